"""Gauss hypergeometric function, Jacobi polynomials and log-gamma.

Every routine accepts complex parameters; real inputs go through the same code.
The hypergeometric argument is restricted to ``0 <= z < 1``.  Below ``z = 0.5``
the power series is summed directly, above it the standard ``z -> 1 - z``
connection formula is used.  Callers that know ``1 - z`` more accurately than
``1 - z`` can be formed in floating point (e.g. ``1/(1 + e^x)`` for large
``x``) pass it as ``zc``.

When ``c - a - b`` is an integer the connection coefficients are singular;
the limiting logarithmic formulas (Abramowitz & Stegun 15.3.11/15.3.12) are
used instead.  Values within ``INTEGER_GUARD`` of an integer but not on it
are regularized by a symmetric parameter perturbation and flagged.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence, PoleAtC, PoleAtNonPositiveInteger

MAX_TERMS = 10_000
SERIES_RTOL = 1e-16
# c - a - b closer than EXACT_INTEGER to an integer takes the logarithmic
# formulas; closer than INTEGER_GUARD (but not exact) takes the perturbation
EXACT_INTEGER = 1e-13
INTEGER_GUARD = 1e-8
PERTURBATION = 1e-6

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def is_nonpositive_integer(z: complex, tol: float = 1e-14) -> bool:
    z = complex(z)
    return abs(z.imag) <= tol and z.real <= tol and abs(z.real - round(z.real)) <= tol


def _near_integer(z: complex, tol: float) -> bool:
    z = complex(z)
    return abs(z.imag) <= tol and abs(z.real - round(z.real)) <= tol


def log_gamma(z: complex) -> complex:
    """Principal-branch ``log Gamma(z)``.

    Lanczos approximation (g = 7, nine terms) for ``Re z >= 1/2``; smaller
    real parts are shifted up with ``log Gamma(z) = log Gamma(z + 1) - log z``
    so the branch stays continuous off the negative real axis.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite argument {z!r}")
    if is_nonpositive_integer(z):
        raise PoleAtNonPositiveInteger(f"Gamma has a pole at {z!r}")
    shift = 0j
    while z.real < 0.5:
        shift -= cmath.log(z)
        z += 1.0
    z -= 1.0
    acc = _LANCZOS_COEF[0]
    for i, coef in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += coef / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc) + shift


def gamma(z: complex) -> complex:
    return cmath.exp(log_gamma(z))


def rgamma(z: complex) -> complex:
    """Reciprocal gamma function, exactly zero at the poles of Gamma."""
    if is_nonpositive_integer(z):
        return 0j
    return cmath.exp(-log_gamma(z))


_BERNOULLI_TERMS = (1 / 12, -1 / 120, 1 / 252, -1 / 240, 1 / 132, -691 / 32760, 1 / 12)


def digamma(z: complex) -> complex:
    z = complex(z)
    if is_nonpositive_integer(z):
        raise PoleAtNonPositiveInteger(f"digamma has a pole at {z!r}")
    shift = 0j
    while abs(z) < 12.0 or z.real < 6.0:
        shift -= 1.0 / z
        z += 1.0
    inv2 = 1.0 / (z * z)
    tail = 0j
    power = inv2
    for coef in _BERNOULLI_TERMS:
        tail += coef * power
        power *= inv2
    return cmath.log(z) - 0.5 / z - tail + shift


def pochhammer(a: complex, k: int) -> complex:
    out = 1 + 0j
    for j in range(k):
        out *= a + j
    return out


@dataclass(frozen=True)
class Hyp2F1Result:
    value: np.ndarray
    converged: bool
    perturbed: bool
    method: str


def _series(a, b, c, z, rtol):
    """Direct power series for |z| <= 1/2, vectorized over z."""
    total = np.ones(z.shape, dtype=complex)
    term = np.ones(z.shape, dtype=complex)
    # past k_min the term ratio is bounded by 0.75 for z <= 1/2
    k_min = int(2 * (abs(a) + abs(b) + abs(c))) + 10
    quiet = 0
    for k in range(MAX_TERMS):
        term = term * ((a + k) * (b + k) / ((c + k) * (k + 1))) * z
        total = total + term
        if k >= k_min:
            if np.all(np.abs(term) <= rtol * np.abs(total)):
                quiet += 1
                if quiet >= 2:
                    return total
            else:
                quiet = 0
        if not np.all(np.isfinite(total)):
            raise NonConvergence(f"2F1({a}, {b}; {c}) series overflowed")
    raise NonConvergence(f"2F1({a}, {b}; {c}) series did not converge in {MAX_TERMS} terms")


def _terminating(a, b):
    """``(n, other)`` when one numerator parameter is ``-n``; the shorter series wins."""
    ns = [(int(round(-t.real)), o) for t, o in ((a, b), (b, a)) if is_nonpositive_integer(t)]
    return min(ns, key=lambda t: t[0]) if ns else None


def _polynomial(n, b, c, z, w):
    """``2F1(-n, b; c; z)``, a polynomial of degree n.

    In the orthogonality regime it is evaluated as a Jacobi polynomial in
    ``x = w - z`` (A&S 15.4.6): the recurrence avoids the cancellation of the
    alternating power sum.  Elsewhere the recurrence is unstable and the
    power sum is used.
    """
    sigma, delta = c - 1, b - n - c
    if sigma.real > -1 and delta.real > -1:
        scale = math.factorial(n) / pochhammer(c, n) if n else 1.0
        p = _jacobi_recurrence(n, sigma, delta, w - z)
        if p is not None and np.isfinite(scale):
            return scale * p
    total = np.ones(z.shape, dtype=complex)
    term = np.ones(z.shape, dtype=complex)
    for k in range(n):
        term = term * ((k - n) * (b + k) / ((c + k) * (k + 1))) * z
        total = total + term
    return total


def _connection(a, b, c, w, logw, lp, rtol):
    """``e^lp * 2F1(a, b; c; 1 - w)`` from the two series in ``w``."""
    m = c - a - b
    lg_c = log_gamma(c)
    out = np.zeros(w.shape, dtype=complex)
    if not is_nonpositive_integer(c - a) and not is_nonpositive_integer(c - b):
        log_a1 = lg_c + log_gamma(m) - log_gamma(c - a) - log_gamma(c - b)
        out += np.exp(lp + log_a1) * _series(a, b, 1.0 - m, w, rtol)
    if not is_nonpositive_integer(a) and not is_nonpositive_integer(b):
        log_a2 = lg_c + log_gamma(-m) - log_gamma(a) - log_gamma(b)
        out += np.exp(lp + log_a2 + m * logw) * _series(c - a, c - b, 1.0 + m, w, rtol)
    return out


def _log_series(a, b, m, w, logw, rtol):
    """sum_n (a)_n (b)_n / (n! (n+m)!) w^n [log w - psi(n+1) - psi(n+m+1) + psi(a+n) + psi(b+n)]."""
    coef = 1.0 / math.factorial(m)
    psi_n1 = digamma(1.0)
    psi_nm1 = digamma(m + 1.0)
    psi_a = digamma(a)
    psi_b = digamma(b)
    power = np.ones(w.shape, dtype=complex)
    total = coef * (logw - psi_n1 - psi_nm1 + psi_a + psi_b) * power
    k_min = int(2 * (abs(a) + abs(b) + m)) + 10
    quiet = 0
    for n in range(MAX_TERMS):
        coef *= (a + n) * (b + n) / ((n + 1) * (n + m + 1))
        psi_n1 += 1.0 / (n + 1)
        psi_nm1 += 1.0 / (n + m + 1)
        psi_a += 1.0 / (a + n)
        psi_b += 1.0 / (b + n)
        power = power * w
        term = coef * power * (logw - psi_n1 - psi_nm1 + psi_a + psi_b)
        total = total + term
        if n >= k_min:
            if np.all(np.abs(term) <= rtol * np.abs(total)):
                quiet += 1
                if quiet >= 2:
                    return total
            else:
                quiet = 0
    raise NonConvergence("logarithmic 2F1 series did not converge")


def _connection_log(a, b, c, w, logw, lp, rtol):
    """Connection formula for integer c - a - b."""
    m = int(round((c - a - b).real))
    lg_c = log_gamma(c)
    if m >= 0:
        # c = a + b + m
        out = np.zeros(w.shape, dtype=complex)
        if m > 0:
            head = np.zeros(w.shape, dtype=complex)
            coef = 1 + 0j
            power = np.ones(w.shape)
            for n in range(m):
                head = head + coef * power
                coef *= (a + n) * (b + n) / ((n + 1) * (n + 1 - m)) if n + 1 < m else 0
                power = power * w
            log_k = lg_c + log_gamma(m) - log_gamma(a + m) - log_gamma(b + m)
            out += np.exp(lp + log_k) * head
        log_k = lg_c - log_gamma(a) - log_gamma(b)
        sign = -((-1) ** m)
        out += sign * np.exp(lp + log_k + m * logw) * _log_series(a + m, b + m, m, w, logw, rtol)
        return out
    # c = a + b - k with k = -m > 0
    k = -m
    head = np.zeros(w.shape, dtype=complex)
    coef = 1 + 0j
    power = np.ones(w.shape)
    for n in range(k):
        head = head + coef * power
        coef *= (a - k + n) * (b - k + n) / ((n + 1) * (n + 1 - k)) if n + 1 < k else 0
        power = power * w
    log_k = lg_c + log_gamma(k) - log_gamma(a) - log_gamma(b)
    out = np.exp(lp + log_k - k * logw) * head
    log_k = lg_c - log_gamma(a - k) - log_gamma(b - k)
    sign = -((-1) ** k)
    out += sign * np.exp(lp + log_k) * _log_series(a, b, k, w, logw, rtol)
    return out


def hyp2f1(a, b, c, z, *, zc=None, log_prefactor=0.0, rtol=SERIES_RTOL) -> Hyp2F1Result:
    """Evaluate ``exp(log_prefactor) * 2F1(a, b; c; z)`` for ``0 <= z < 1``.

    ``log_prefactor`` is folded into each term before they are combined, so a
    decaying prefactor can tame a 2F1 that would overflow on its own near
    ``z = 1``.
    """
    a, b, c = complex(a), complex(b), complex(c)
    # canonical order makes the result bitwise symmetric in (a, b)
    a, b = sorted((a, b), key=lambda t: (t.real, t.imag))
    z = np.asarray(z, dtype=float)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    w = 1.0 - z if zc is None else np.atleast_1d(np.asarray(zc, dtype=float))
    lp = np.broadcast_to(np.asarray(log_prefactor, dtype=complex), z.shape)
    if np.any(z < 0) or np.any(w <= 0):
        raise ValueError("hyp2f1 requires 0 <= z < 1")
    if is_nonpositive_integer(c):
        raise PoleAtC(f"2F1 undefined for c = {c}")

    perturbed = False
    term = _terminating(a, b)
    if term is not None:
        n, other = term
        value = np.exp(lp) * _polynomial(n, other, c, z, w)
        return _result(value, scalar, False, "polynomial")
    term = _terminating(c - a, c - b)
    if term is not None:
        # Euler: 2F1(a,b;c;z) = (1-z)^(c-a-b) 2F1(c-a,c-b;c;z), terminating
        n, other = term
        value = np.exp(lp + (c - a - b) * np.log(w)) * _polynomial(n, other, c, z, w)
        return _result(value, scalar, False, "euler-polynomial")

    value = np.empty(z.shape, dtype=complex)
    low = z <= 0.5
    if np.any(low):
        value[low] = np.exp(lp[low]) * _series(a, b, c, z[low], rtol)
    high = ~low
    if np.any(high):
        wh = w[high]
        logw = np.log(wh)
        if _near_integer(c - a - b, EXACT_INTEGER):
            value[high] = _connection_log(a, b, c, wh, logw, lp[high], rtol)
        elif _near_integer(c - a - b, INTEGER_GUARD):
            half = 0.5 * PERTURBATION
            up = _connection(a + half, b + half, c, wh, logw, lp[high], rtol)
            down = _connection(a - half, b - half, c, wh, logw, lp[high], rtol)
            value[high] = 0.5 * (up + down)
            perturbed = True
        else:
            value[high] = _connection(a, b, c, wh, logw, lp[high], rtol)
    method = "series" if not np.any(high) else ("connection" if not np.any(low) else "series+connection")
    return _result(value, scalar, perturbed, method)


def _result(value, scalar, perturbed, method):
    if not np.all(np.isfinite(value)):
        raise NonConvergence("2F1 evaluation produced non-finite values")
    return Hyp2F1Result(value[0] if scalar else value, True, perturbed, method)


def gauss_2f1(a, b, c, z, *, zc=None, log_prefactor=0.0):
    """Value of ``2F1(a, b; c; z)`` (times ``exp(log_prefactor)``)."""
    return hyp2f1(a, b, c, z, zc=zc, log_prefactor=log_prefactor).value


def gauss_2f1_deriv(a, b, c, z, order=1, *, zc=None, log_prefactor=0.0):
    """``order``-th z-derivative via ``(a)_k (b)_k / (c)_k * 2F1(a+k, b+k; c+k; z)``."""
    coef = pochhammer(a, order) * pochhammer(b, order) / pochhammer(c, order)
    if coef == 0:
        return np.zeros_like(np.asarray(z, dtype=float), dtype=complex)
    return coef * gauss_2f1(a + order, b + order, c + order, z, zc=zc, log_prefactor=log_prefactor)


def gauss_2f1_dz(a, b, c, z, *, zc=None):
    return gauss_2f1_deriv(a, b, c, z, 1, zc=zc)


def _jacobi_recurrence(n: int, sigma, delta, x):
    """Three-term recurrence for ``P_n^(sigma, delta)(x)``; None if a denominator vanishes."""
    p_prev = np.ones_like(x, dtype=np.result_type(x, sigma, delta, float))
    if n == 0:
        return p_prev
    s = sigma + delta
    p = (sigma + 1.0) + (s + 2.0) * (x - 1.0) / 2.0
    for k in range(2, n + 1):
        a_k = 2.0 * k * (k + s) * (2.0 * k + s - 2.0)
        if a_k == 0.0:
            return None
        b_k = (2.0 * k + s - 1.0) * ((2.0 * k + s) * (2.0 * k + s - 2.0) * x + sigma**2 - delta**2)
        c_k = 2.0 * (k + sigma - 1.0) * (k + delta - 1.0) * (2.0 * k + s)
        p_prev, p = p, (b_k * p - c_k * p_prev) / a_k
    return p


def jacobi_p(n: int, sigma: float, delta: float, x):
    """Jacobi polynomial ``P_n^(sigma, delta)(x)`` by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    if n < 0:
        return np.zeros_like(x)
    p = _jacobi_recurrence(n, sigma, delta, x)
    return _jacobi_explicit(n, sigma, delta, x) if p is None else p


def _jacobi_explicit(n, sigma, delta, x):
    # P_n = sum_k C(n+sigma, n-k) C(n+delta, k) ((x-1)/2)^k ((x+1)/2)^(n-k)
    out = np.zeros_like(x)
    for k in range(n + 1):
        c1 = _binom(n + sigma, n - k)
        c2 = _binom(n + delta, k)
        out = out + c1 * c2 * ((x - 1) / 2) ** k * ((x + 1) / 2) ** (n - k)
    return out


def _binom(top: float, k: int) -> float:
    out = 1.0
    for j in range(k):
        out *= (top - j) / (j + 1)
    return out


def jacobi_p_deriv(n: int, sigma: float, delta: float, x, order: int = 1):
    """``d^order/dx^order P_n^(sigma, delta)(x)``."""
    if order > n:
        return np.zeros_like(np.asarray(x, dtype=float))
    coef = pochhammer(n + sigma + delta + 1.0, order).real / 2.0**order
    return coef * jacobi_p(n - order, sigma + order, delta + order, x)
