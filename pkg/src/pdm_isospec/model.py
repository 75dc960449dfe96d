"""Exactly solvable position-dependent-mass model.

With ``s = p*lam``, ``z = e^{sx}/(1 + e^{sx})`` and ``w = 1 - z`` the model is

    M(x) = (p lam^2 / 4) sech^2(s x / 2) = p lam^2 z w
    V(x) = p [((a+b-c)^2 - 1)/4 e^{sx} + c(c-2)/4 e^{-sx}]

Every solution of ``H U = mu U`` used here has the shape ``z^ea w^eb G(z)``
with ``G`` a Gauss hypergeometric function or a Jacobi polynomial.  Since
``d/dx = s z w d/dz`` such a product can be differentiated any number of times
symbolically; the resulting terms ``z^(ea+i) w^(eb+k) G^(j)`` are evaluated
with the power prefactor folded into the hypergeometric sum, so nothing
overflows even where ``G`` alone would.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import specialfn
from .errors import (
    MuAboveGround,
    NonRealPotential,
    SecondBranchPole,
    UnphysicalParameters,
)
from .jets import Jet

REAL_TOL = 1e-10
BOUNDARY_MARGIN = 1e-9
NODE_WINDOW = (-30.0, 30.0)
NODE_SAMPLES = 2001
NODE_XTOL = 1e-10


class Asymptote(enum.Enum):
    VANISHES = "VanishesAtEnd"
    UNBOUNDED = "UnboundedAtEnd"
    BOUNDED_NONZERO = "BoundedNonzero"


class Modification(enum.Enum):
    DELETE_GROUND = "DeleteGround"
    STRICT_ISO = "StrictIso"
    CREATE_BELOW_GROUND = "CreateBelowGround"
    INVALID = "Invalid"


@dataclass(frozen=True)
class ModelParams:
    a: complex
    b: complex
    c: complex
    p: float = 1.0
    lam: float = 1.0
    alpha: complex = 1.0
    beta: complex = 0.0
    nu: float = 0.0

    def __post_init__(self):
        for name in ("a", "b", "c", "alpha", "beta"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        for name in ("p", "lam", "nu"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not self.p > 0 or not self.lam > 0:
            raise ValueError("p and lam must be positive")

    @property
    def s(self) -> float:
        return self.p * self.lam

    @property
    def sigma(self) -> complex:
        return self.c - 1

    @property
    def delta(self) -> complex:
        return self.a + self.b - self.c

    @property
    def physical(self) -> bool:
        return self.c.real > 0.5 and self.delta.real + 0.5 > 0

    @property
    def shifted_ab(self) -> tuple[complex, complex]:
        return self.a + self.nu, self.b - self.nu

    def replace(self, **changes) -> "ModelParams":
        return dataclasses.replace(self, **changes)

    def conjugate(self) -> "ModelParams":
        return self.replace(
            a=self.a.conjugate(),
            b=self.b.conjugate(),
            c=self.c.conjugate(),
            alpha=self.alpha.conjugate(),
            beta=self.beta.conjugate(),
        )

    @property
    def is_real(self) -> bool:
        vals = (self.a, self.b, self.c, self.alpha, self.beta)
        return all(abs(v.imag) <= REAL_TOL * max(1.0, abs(v)) for v in vals)

    def potential_coefficients(self) -> tuple[complex, complex]:
        """Coefficients of ``e^{sx}`` and ``e^{-sx}`` in V."""
        d = self.delta
        return self.p * (d * d - 1) / 4, self.p * self.c * (self.c - 2) / 4


def _real_if_close(value, what: str):
    value = np.asarray(value)
    if not np.iscomplexobj(value):
        return value
    scale = np.maximum(1.0, np.abs(value))
    if np.any(np.abs(value.imag) > REAL_TOL * scale):
        raise NonRealPotential(f"{what} has imaginary part up to {np.max(np.abs(value.imag)):.3e}")
    return value.real.copy()


def _logs(x, s):
    t = s * np.atleast_1d(np.asarray(x, dtype=float))
    log_z = -np.logaddexp(0.0, -t)
    log_w = -np.logaddexp(0.0, t)
    return log_z, log_w


# --- the z^ea w^eb G(z) machinery -------------------------------------------


@lru_cache(maxsize=256)
def _expansion(ea: complex, eb: complex, order: int):
    """``D^k [z^ea w^eb G]`` for ``D = z w d/dz`` as ``{(i, k, j): coef}``.

    Each key stands for ``z^(ea+i) w^(eb+k) G^(j)(z)``.
    """
    levels = [{(0, 0, 0): 1 + 0j}]
    for _ in range(order):
        nxt: dict = defaultdict(complex)
        for (i, k, j), coef in levels[-1].items():
            nxt[(i, k + 1, j)] += coef * (ea + i)
            nxt[(i + 1, k, j)] -= coef * (eb + k)
            nxt[(i + 1, k + 1, j + 1)] += coef
        levels.append({key: c for key, c in nxt.items() if c != 0})
    return tuple(levels)


def _prefactored_jet(ea, eb, g, x, s, order) -> Jet:
    """x-jet of ``z^ea w^eb G(z)``; ``g(j, z, w, lp)`` returns ``e^lp G^(j)(z)``."""
    log_z, log_w = _logs(x, s)
    z, w = np.exp(log_z), np.exp(log_w)
    lp = ea * log_z + eb * log_w
    gj = [g(j, z, w, lp) for j in range(order + 1)]
    data = np.zeros((order + 1, z.size), dtype=complex)
    for n, terms in enumerate(_expansion(complex(ea), complex(eb), order)):
        acc = np.zeros(z.size, dtype=complex)
        for (i, k, j), coef in terms.items():
            acc += coef * z**i * w**k * gj[j]
        data[n] = s**n * acc
    return Jet(data)


def _hyp_g(A, B, C):
    def g(j, z, w, lp):
        coef = specialfn.pochhammer(A, j) * specialfn.pochhammer(B, j) / specialfn.pochhammer(C, j)
        if coef == 0:
            return np.zeros(z.shape, dtype=complex)
        res = specialfn.hyp2f1(A + j, B + j, C + j, z, zc=w, log_prefactor=lp)
        return coef * res.value

    return g


def _jacobi_g(n, sigma, delta):
    # G(z) = P_n(1 - 2z), so G^(j) = (-1)^j (n+sigma+delta+1)_j P_{n-j}^(sigma+j, delta+j)
    def g(j, z, w, lp):
        if j > n:
            return np.zeros(z.shape, dtype=complex)
        coef = (-1) ** j * specialfn.pochhammer(n + sigma + delta + 1, j).real
        return coef * np.exp(lp) * specialfn.jacobi_p(n - j, sigma + j, delta + j, w - z)

    return g


def _unit_g(j, z, w, lp):
    return np.exp(lp) if j == 0 else np.zeros(z.shape, dtype=complex)


def _as_real_jet(jet: Jet, real: bool) -> Jet:
    return jet.real if real else jet


# --- mass and potential ------------------------------------------------------


def mass_jet(params: ModelParams, x, order: int = 0) -> Jet:
    jet = _prefactored_jet(1.0, 1.0, _unit_g, x, params.s, order)
    return (jet * (params.p * params.lam**2)).real


def mass(params: ModelParams, x):
    out = mass_jet(params, x, 0).value
    return out[0] if np.ndim(x) == 0 else out


def potential_jet(params: ModelParams, x, order: int = 0, *, allow_complex: bool = False) -> Jet:
    up, down = params.potential_coefficients()
    s = params.s
    t = s * np.atleast_1d(np.asarray(x, dtype=float))
    e_up, e_down = np.exp(t), np.exp(-t)
    data = np.array([up * s**k * e_up + down * (-s) ** k * e_down for k in range(order + 1)])
    if allow_complex:
        return Jet(data)
    return Jet(_real_if_close(data, "potential"))


def potential(params: ModelParams, x):
    """V(x); raises NonRealPotential when complex parameters give a complex V."""
    out = potential_jet(params, x, 0).value
    return out[0] if np.ndim(x) == 0 else out


# --- spectrum ------------------------------------------------------------------


def _require_physical(params: ModelParams):
    if not params.physical:
        raise UnphysicalParameters(
            f"need Re c > 1/2 and Re(a+b-c) + 1/2 > 0, got c={params.c}, a+b-c={params.delta}"
        )
    if abs(params.sigma.imag) > REAL_TOL or abs(params.delta.imag) > REAL_TOL:
        raise UnphysicalParameters("sigma and delta must be real for a bound-state spectrum")


def energy(params: ModelParams, n: int) -> float:
    _require_physical(params)
    if n < 0:
        raise ValueError("n must be non-negative")
    sig, dlt, p = params.sigma.real, params.delta.real, params.p
    return n * n * p + n * p * (sig + dlt + 1) + (sig + 1) * p * (dlt + 1) / 2


def energies(params: ModelParams, k: int) -> np.ndarray:
    return np.array([energy(params, n) for n in range(k)])


def factorization_energy(a: complex, b: complex, c: complex, p: float = 1.0) -> complex:
    return p * (-a * b + (a + b + 1) * c / 2 - c * c / 2)


@dataclass(frozen=True)
class BoundState:
    params: ModelParams
    n: int
    energy: float
    norm: float

    def jet(self, x, order: int = 0) -> Jet:
        sig, dlt = self.params.sigma.real, self.params.delta.real
        jet = _prefactored_jet(
            (sig + 1) / 2, (dlt + 1) / 2, _jacobi_g(self.n, sig, dlt), x, self.params.s, order
        )
        return (jet * self.norm).real

    def __call__(self, x):
        out = self.jet(x, 0).value
        return out[0] if np.ndim(x) == 0 else out

    def derivative(self, x, k: int = 1):
        out = self.jet(x, k)[k]
        return out[0] if np.ndim(x) == 0 else out


def bound_state(params: ModelParams, n: int) -> BoundState:
    """Normalized eigenfunction ``psi_n`` with its closed-form normalization constant."""
    _require_physical(params)
    sig, dlt = params.sigma.real, params.delta.real
    log_norm2 = (
        math.log(params.s * (2 * n + sig + dlt + 1))
        + math.lgamma(n + 1)
        + math.lgamma(n + sig + dlt + 1)
        - math.lgamma(n + sig + 1)
        - math.lgamma(n + dlt + 1)
    )
    return BoundState(params, n, energy(params, n), math.exp(0.5 * log_norm2))


# --- seed solutions ------------------------------------------------------------


def asymptotic_constants(a: complex, b: complex, c: complex) -> dict[str, complex]:
    """Right-end amplitudes A1, B1 (of ``e^{-(a+b-c+1)sx/2}``) and A2, B2 (of ``e^{-(c-a-b+1)sx/2}``)."""
    rg = specialfn.rgamma
    gm = specialfn.gamma

    def safe(f, *args):
        try:
            return f(*args)
        except specialfn.PoleAtNonPositiveInteger:
            return complex("nan")

    m = c - a - b
    g_c = safe(gm, c)
    g_2c = safe(gm, 2 - c)
    return {
        "A1": g_c * safe(gm, m) * rg(c - a) * rg(c - b),
        "B1": g_2c * safe(gm, m) * rg(1 - a) * rg(1 - b),
        "A2": g_c * safe(gm, -m) * rg(a) * rg(b),
        "B2": g_2c * safe(gm, -m) * rg(a - c + 1) * rg(b - c + 1),
    }


@dataclass(frozen=True)
class SeedSolution:
    """``U = alpha * branch1 + beta * branch2`` at parameters ``(a+nu, b-nu, c)``."""

    params: ModelParams
    mu: complex
    left_asymptote: Asymptote
    right_asymptote: Asymptote

    @property
    def alpha(self) -> complex:
        return self.params.alpha

    @property
    def beta(self) -> complex:
        return self.params.beta

    @property
    def nu(self) -> float:
        return self.params.nu

    @property
    def is_real(self) -> bool:
        return self.params.is_real

    def jet(self, x, order: int = 0) -> Jet:
        a, b = self.params.shifted_ab
        c = self.params.c
        s = self.params.s
        total = None
        if self.alpha != 0:
            j1 = _prefactored_jet(c / 2, (a + b + 1 - c) / 2, _hyp_g(a, b, c), x, s, order)
            total = j1 * self.alpha
        if self.beta != 0:
            j2 = _prefactored_jet(
                1 - c / 2, (a + b - c + 1) / 2, _hyp_g(a - c + 1, b - c + 1, 2 - c), x, s, order
            )
            total = j2 * self.beta if total is None else total + j2 * self.beta
        if total is None:
            raise ValueError("seed with alpha = beta = 0 is identically zero")
        return _as_real_jet(total, self.is_real)

    def __call__(self, x):
        out = self.jet(x, 0).value
        return out[0] if np.ndim(x) == 0 else out

    def value(self, x):
        return self(x)

    def derivative(self, x, k: int = 1):
        out = self.jet(x, k)[k]
        return out[0] if np.ndim(x) == 0 else out

    def conjugate(self) -> "SeedSolution":
        """Seed built from conjugated parameters, i.e. the pointwise conjugate function."""
        return seed(self.params.conjugate())

    def nodes(self, window=NODE_WINDOW, samples: int = NODE_SAMPLES) -> list[float]:
        from .numspec import count_nodes

        if not self.is_real:
            return []
        xs = np.linspace(window[0], window[1], samples)
        return count_nodes(self(xs), xs, func=self, xtol=NODE_XTOL).nodes


def _exponent_state(re_exp: float) -> Asymptote:
    if re_exp > BOUNDARY_MARGIN:
        return Asymptote.VANISHES
    if re_exp < -BOUNDARY_MARGIN:
        return Asymptote.UNBOUNDED
    return Asymptote.BOUNDED_NONZERO


def _nonzero(v: complex) -> bool:
    return not (v == 0 or np.isnan(v))


def _right_asymptote(a, b, c, alpha, beta) -> Asymptote:
    m = c - a - b
    if abs(m.real) < 1 - BOUNDARY_MARGIN:
        return Asymptote.VANISHES
    if abs(abs(m.real) - 1) <= BOUNDARY_MARGIN:
        return Asymptote.BOUNDED_NONZERO
    k = asymptotic_constants(a, b, c)
    if m.real > 1:
        lead = (k["A1"] * alpha if alpha != 0 else 0) + (k["B1"] * beta if beta != 0 else 0)
    else:
        lead = (k["A2"] * alpha if alpha != 0 else 0) + (k["B2"] * beta if beta != 0 else 0)
    if np.isnan(lead):
        return Asymptote.BOUNDED_NONZERO
    scale = max((abs(k[n]) for n in k if _nonzero(k[n])), default=1.0)
    if abs(lead) > 1e-12 * scale * max(abs(alpha), abs(beta)):
        return Asymptote.UNBOUNDED
    return Asymptote.VANISHES


def _left_asymptote(c, alpha, beta) -> Asymptote:
    exps = []
    if alpha != 0:
        exps.append((c / 2).real)
    if beta != 0:
        exps.append((1 - c / 2).real)
    return _exponent_state(min(exps))


def seed(params: ModelParams) -> SeedSolution:
    """Two-branch seed at the shifted parameters ``(a+nu, b-nu, c)``."""
    if params.beta != 0 and specialfn._near_integer(params.c, 1e-14):
        raise SecondBranchPole(f"second branch needs non-integer c, got {params.c}")
    a, b = params.shifted_ab
    c = params.c
    mu = factorization_energy(a, b, c, params.p)
    if abs(mu.imag) <= REAL_TOL * max(1.0, abs(mu)):
        mu = complex(mu.real)
    return SeedSolution(
        params=params,
        mu=mu,
        left_asymptote=_left_asymptote(c, params.alpha, params.beta),
        right_asymptote=_right_asymptote(a, b, c, params.alpha, params.beta),
    )


def classify_modification(sd: SeedSolution) -> Modification:
    """Spectral effect of a first-order transformation built on ``sd``."""
    if abs(sd.mu.imag) > REAL_TOL * max(1.0, abs(sd.mu)):
        raise ValueError("classification needs a real factorization energy")
    mu = sd.mu.real
    e0 = energy(sd.params, 0)
    tol = 1e-9 * max(1.0, abs(e0))
    if mu > e0 + tol:
        raise MuAboveGround(f"mu = {mu} exceeds the ground-state energy {e0}")
    if sd.nodes():
        return Modification.INVALID
    ends = (sd.left_asymptote, sd.right_asymptote)
    if Asymptote.BOUNDED_NONZERO in ends:
        return Modification.INVALID
    vanish = ends.count(Asymptote.VANISHES)
    if vanish == 2:
        return Modification.DELETE_GROUND if abs(mu - e0) <= tol else Modification.INVALID
    if vanish == 1:
        return Modification.STRICT_ISO
    return Modification.CREATE_BELOW_GROUND
