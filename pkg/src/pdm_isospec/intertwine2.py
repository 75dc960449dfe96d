"""Second-order intertwining ``L = (1/M) d^2/dx^2 + eta d/dx + gamma``.

``eta`` comes from the Wronskian of two seeds at distinct factorization
energies (real case) or of a seed and its conjugate (complex case):
``eta = -W'/(M W)``.  The partner potential, ``gamma``, both adjoint zero
modes and the monotone function ``w = W / (M (mu - conj mu))`` follow.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import jets, model, numspec, residuals
from .errors import EqualFactorizationEnergies, Inconclusive, NonRealEta, WronskianNode
from .hamiltonian import Field, PDMHamiltonian, as_field, from_terms, model_hamiltonian
from .jets import Jet

REAL_TOL = 1e-10
WRONSKIAN_WINDOW = (-30.0, 30.0)
WRONSKIAN_SAMPLES = 4001
DIRECT_EXTENT = 10.0
QUAD_PANEL = 0.5
TAIL_LIMIT = 700.0
TAIL_RTOL = 1e-20
SNAP_RTOL = 1e-9
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)


class Case(enum.Enum):
    REAL_DISTINCT = "RealDistinct"
    COMPLEX_CONJUGATE = "ComplexConjugate"


class Modification2(enum.Enum):
    DELETE_TWO = "DeleteTwo"
    STRICT_ISO = "StrictIso"
    CREATE_TWO = "CreateTwo"
    INVALID = "Invalid"


@dataclass(frozen=True)
class SecondOrderPartner:
    seed1: model.SeedSolution
    seed2: model.SeedSolution
    mu1: complex
    mu2: complex
    case: Case
    hamiltonian: PDMHamiltonian = field(repr=False)
    modification: Modification2 = Modification2.INVALID

    @property
    def C1(self) -> complex:
        return (self.mu1 + self.mu2) / 2

    @property
    def C2(self) -> complex:
        return ((self.mu1 - self.mu2) / 2) ** 2

    @property
    def xi(self) -> complex:
        return self.mu2 - self.mu1

    # building blocks ------------------------------------------------------

    def _m(self, x, order):
        return self.hamiltonian.mass(x, order)

    def _v(self, x, order):
        return self.hamiltonian.potential(x, order)

    def _seeds(self, x, order):
        u1 = self.seed1.jet(x, order)
        u2 = self.seed2.jet(x, order)
        return u1, u2

    def wronskian_direct_jet(self, x, order: int = 0) -> Jet:
        """``U1 U2' - U1' U2`` straight from the seed jets.

        Evaluated as ``(W(U1, U2) - W(U2, U1)) / 2`` so that for a bitwise
        conjugate pair the result is exactly imaginary.
        """
        u1, u2 = self._seeds(x, order + 1)
        a1, a2 = u1.truncate(order), u2.truncate(order)
        return (a1 * u2.d() - u1.d() * a2 - (a2 * u1.d() - u2.d() * a1)) * 0.5

    def _g_scaled(self, x) -> tuple[np.ndarray, np.ndarray]:
        """``G = W/M`` as ``mantissa * exp(logscale)``; ``G' = (mu1 - mu2) U1 U2``.

        Near the origin ``G`` is taken from the direct Wronskian.  Far out the
        two seeds share their leading asymptotics and the direct form cancels
        catastrophically, so ``G`` is continued by quadrature of ``U1 U2``:
        outward from the anchor when the integrand grows, inward from infinity
        when it decays.  The running sums are kept in log-scaled form so that
        exponentially large or small tails neither overflow nor underflow.
        """
        x = np.atleast_1d(np.asarray(x, dtype=float))
        s = abs(self.seed1.params.s)
        edge = DIRECT_EXTENT / s
        mant = np.empty(x.shape, dtype=complex)
        scale = np.zeros(x.shape)
        inner = np.abs(x) <= edge
        if np.any(inner):
            xi = x[inner]
            mant[inner] = self.wronskian_direct_jet(xi, 0).value / self._m(xi, 0).value
        for side in (1.0, -1.0):
            mask = side * x > edge
            if np.any(mask):
                mant[mask], scale[mask] = self._g_tail(side, side * x[mask], edge, s)
        return mant, scale

    def _g_values(self, x) -> np.ndarray:
        mant, scale = self._g_scaled(x)
        with np.errstate(over="ignore"):
            return mant * np.exp(scale)

    def _log_integrand(self, side, t):
        """``U1 U2`` at ``x = side * t`` as ``(phase, log|U1 U2|)``."""
        xs = side * np.asarray(t, dtype=float)
        u1 = self.seed1.jet(xs, 0).value
        u2 = self.seed2.jet(xs, 0).value
        with np.errstate(divide="ignore"):
            logmag = np.log(np.abs(u1)) + np.log(np.abs(u2))
        phase = np.exp(1j * (np.angle(u1) + np.angle(u2)))
        return phase, logmag

    def _g_tail(self, side: float, t: np.ndarray, edge: float, s: float):
        anchor = np.array([side * edge])
        g_anchor = (self.wronskian_direct_jet(anchor, 0).value / self._m(anchor, 0).value)[0]
        dmu = side * (self.mu1 - self.mu2)
        l0 = self._log_integrand(side, [edge])[1][0]
        decaying = self._log_integrand(side, [edge + 5.0 / s])[1][0] < l0
        t_end = float(np.max(t))
        if decaying:
            l_last = self._log_integrand(side, [t_end])[1][0]
            t_end += 5.0 / s
            while t_end * s < TAIL_LIMIT and self._log_integrand(side, [t_end])[1][0] > l_last + np.log(TAIL_RTOL):
                t_end += 5.0 / s
        step = QUAD_PANEL / s
        breaks = np.unique(np.concatenate([[edge], t, np.arange(edge, t_end, step), [t_end]]))
        pieces, logs = _panel_integrals(lambda tt: self._log_integrand(side, tt), breaks)
        idx = np.searchsorted(breaks, t)
        n = len(breaks)
        mant = np.zeros(n, dtype=complex)
        scale = np.zeros(n)
        if not decaying:
            c, m = complex(g_anchor), 0.0
            mant[0] = c
            for j in range(n - 1):
                m_new = max(m, logs[j])
                c = c * np.exp(m - m_new) + dmu * pieces[j] * np.exp(logs[j] - m_new)
                m = m_new
                mant[j + 1], scale[j + 1] = c, m
            return mant[idx], scale[idx]
        c, m = 0j, -np.inf
        for j in range(n - 2, -1, -1):
            m_new = max(m, logs[j])
            c = (c * np.exp(m - m_new) if np.isfinite(m) else 0j) + pieces[j] * np.exp(logs[j] - m_new)
            m = m_new
            mant[j], scale[j] = c, m
        g_inf = g_anchor + dmu * mant[0] * np.exp(scale[0])
        if abs(g_inf) <= SNAP_RTOL * abs(g_anchor):
            return -dmu * mant[idx], scale[idx]
        with np.errstate(over="ignore", under="ignore"):
            return g_inf - dmu * mant[idx] * np.exp(scale[idx]), np.zeros(idx.size)

    def g_jet(self, x, order: int = 0) -> Jet:
        """Jet of ``G = W/M``; derivatives follow from ``G^(k) = (mu1 - mu2) (U1 U2)^(k-1)``."""
        g0 = self._g_values(x)
        data = np.zeros((order + 1, g0.size), dtype=complex)
        data[0] = g0
        if order >= 1:
            u1, u2 = self._seeds(x, order - 1)
            # symmetric product: exactly real for a bitwise conjugate pair
            prod = (u1 * u2 + u2 * u1) * 0.5
            for k in range(1, order + 1):
                data[k] = (self.mu1 - self.mu2) * prod[k - 1]
        return Jet(data)

    def wronskian_jet(self, x, order: int = 0) -> Jet:
        return self._m(x, order) * self.g_jet(x, order)

    def wronskian(self, x):
        return _scalar(self.wronskian_jet(x, 0).value, x)

    def eta_jet(self, x, order: int = 0, *, keep_complex: bool = False) -> Jet:
        wj = self.wronskian_jet(x, order + 1)
        if np.any(wj.value == 0):
            raise WronskianNode("Wronskian vanishes at an evaluation point")
        eta = -wj.d() / (self._m(x, order) * wj.truncate(order))
        return eta if keep_complex else self._realify(eta)

    def _realify(self, jet: Jet) -> Jet:
        if not np.iscomplexobj(jet.data):
            return jet
        scale = np.maximum(1.0, np.abs(jet.data))
        if np.any(np.abs(jet.data.imag) > REAL_TOL * scale):
            raise NonRealEta(f"imaginary part up to {np.max(np.abs(jet.data.imag)):.3e}")
        return jet.real

    def eta(self, x):
        return _scalar(self.eta_jet(x, 0).value, x)

    def eta_from_log_derivatives(self, x) -> np.ndarray:
        """``(mu1 - mu2)/(tau1 - tau2) - M'/M^2``."""
        u1, u2 = self._seeds(x, 1)
        m = self._m(x, 1)
        tau1 = u1.d() / u1.truncate(0)
        tau2 = u2.d() / u2.truncate(0)
        val = (self.mu1 - self.mu2) / (tau1 - tau2).value - (m.d() / (m * m)).value
        return np.real_if_close(val, tol=1e6)

    def gamma_jet(self, x, order: int = 0) -> Jet:
        eta = self.eta_jet(x, order + 1)
        m = self._m(x, order + 2)
        v = self._v(x, order)
        m1, m2 = m.d(), m.d(2)
        c1 = self.C1.real if self.case is Case.COMPLEX_CONJUGATE else self.C1
        return (
            m * eta * eta / 2
            + m1 * eta / (2 * m)
            - eta.d() / 2
            - v
            + m1 * m1 / m**3
            - m2 / (2 * m * m)
            + _real(c1)
        )

    def gamma(self, x):
        return _scalar(self.gamma_jet(x, 0).value, x)

    def partner_potential_jet(self, x, order: int = 0, *, keep_complex: bool = False) -> Jet:
        """Partner potential; ``keep_complex`` skips the final projection of ``eta`` onto the reals."""
        eta = self.eta_jet(x, order + 1, keep_complex=keep_complex)
        m = self._m(x, order + 2)
        v = self._v(x, order)
        m1, m2 = m.d(), m.d(2)
        return v + 2 * eta.d() + m1 * eta / m - 3 * m1 * m1 / m**3 + 2 * m2 / (m * m)

    def partner_potential2(self, x):
        return _scalar(self.partner_potential_jet(x, 0).value, x)

    @property
    def partner_hamiltonian(self) -> PDMHamiltonian:
        return PDMHamiltonian(self.hamiltonian.mass, self.partner_potential_jet)

    # operators ------------------------------------------------------------

    def L2_terms(self, psi):
        f = as_field(psi)

        def t(x, order: int = 0) -> list[Jet]:
            pj = f(x, order + 2)
            return [pj.d(2) / self._m(x, order), self.eta_jet(x, order) * pj.d(), self.gamma_jet(x, order) * pj]

        return t

    def apply_L2(self, psi) -> Field:
        return from_terms(self.L2_terms(psi))

    def L2_adjoint_terms(self, g):
        f = as_field(g)

        def t(x, order: int = 0) -> list[Jet]:
            gj = f(x, order + 2)
            m = self._m(x, order + 2)
            eta = self.eta_jet(x, order + 1)
            m1, m2 = m.d(), m.d(2)
            return [
                gj.d(2) / m,
                -(eta + 2 * m1 / (m * m)) * gj.d(),
                (2 * m1 * m1 / m**3 - m2 / (m * m) - eta.d() + self.gamma_jet(x, order)) * gj,
            ]

        return t

    def apply_L2_adjoint(self, g) -> Field:
        return from_terms(self.L2_adjoint_terms(g))

    def zero_mode_jets(self):
        """Fields ``M U2 / W`` (at mu1) and ``M U1 / W`` (at mu2)."""
        if self.case is not Case.REAL_DISTINCT:
            raise ValueError("zero modes are defined for the real case only")

        def mode(which):
            def f(x, order: int = 0) -> Jet:
                u1, u2 = self._seeds(x, order)
                return (u2 if which == 1 else u1) / self.g_jet(x, order)

            return f

        return mode(1), mode(2)

    def zero_mode_values(self, which: int, x) -> np.ndarray:
        """Zero mode ``U / G`` evaluated in log-scaled form (safe far into the tails)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        u = (self.seed2 if which == 1 else self.seed1).jet(x, 0).value
        mant, scale = self._g_scaled(x)
        with np.errstate(divide="ignore", under="ignore"):
            mag = np.exp(np.log(np.abs(u)) - scale - np.log(np.abs(mant)))
        return np.real_if_close(mag * np.exp(1j * (np.angle(u) - np.angle(mant))), tol=1e6)

    def zero_modes(self, lengths=(10.0, 20.0, 40.0)):
        """Both zero modes with their normalizability verdicts (``None`` if inconclusive)."""
        out = []
        for which, f in enumerate(self.zero_mode_jets(), start=1):
            try:
                verdict, vals = numspec.normalizability(lambda x, w=which: self.zero_mode_values(w, x), lengths)
            except Inconclusive:
                verdict, vals = None, None
            out.append((f, verdict, vals))
        return out

    def monotone_w_jet(self, x, order: int = 0) -> Jet:
        if self.case is not Case.COMPLEX_CONJUGATE:
            raise ValueError("w is defined for the complex case only")
        wr = self.wronskian_jet(x, order)
        val = wr / (self._m(x, order) * (self.mu1 - self.mu2))
        return self._realify(val)

    def monotone_w(self, x):
        return _scalar(self.monotone_w_jet(x, 0).value, x)

    # spectrum -------------------------------------------------------------

    @property
    def law(self) -> tuple[numspec.Law, tuple]:
        if self.modification is Modification2.DELETE_TWO:
            return numspec.Law.SHIFT_BY_TWO, ()
        if self.modification is Modification2.STRICT_ISO:
            return numspec.Law.EQUAL, ()
        if self.modification is Modification2.CREATE_TWO:
            return numspec.Law.INSERT_TWO, (self.mu1.real, self.mu2.real)
        raise ValueError("no spectrum rule for an invalid transformation")

    def partner_spectrum(self, k: int) -> np.ndarray:
        law, ins = self.law
        return numspec.expected_partner(model.energies(self.seed1.params, k + 2), law, ins)[:k]

    # identity checks ------------------------------------------------------

    def ansatz_residual(self, x, *, swapped: bool = False) -> np.ndarray:
        """``eta' = M eta^2 + 2(eta + M'/M^2) tau + (M'/M) eta + 2M'^2/M^3 - M''/M^2 + xi``."""
        eta = self.eta_jet(x, 1)
        m = self._m(x, 2)
        u = (self.seed2 if swapped else self.seed1).jet(x, 1)
        tau = u.d() / u.truncate(0)
        xi = -self.xi if swapped else self.xi
        m1, m2 = m.d(), m.d(2)
        terms = [
            -eta.d(),
            m * eta * eta,
            2 * eta * tau,
            2 * m1 * tau / (m * m),
            m1 * eta / m,
            2 * m1 * m1 / m**3,
            -m2 / (m * m),
            Jet.constant(xi, eta.d()),
        ]
        return residuals.pointwise(terms)

    def tau_bracket_residual(self, x, which: int = 1) -> np.ndarray:
        """``tau'/M + tau^2/M - M' tau/M^2 - V + mu`` for ``tau = U'/U``."""
        sd = self.seed1 if which == 1 else self.seed2
        mu = self.mu1 if which == 1 else self.mu2
        u = sd.jet(x, 2)
        tau = u.d() / u.truncate(1)
        m = self._m(x, 1)
        v = self._v(x, 0)
        terms = [tau.d() / m, tau * tau / m, -m.d() * tau / (m * m), -v, Jet.constant(mu, v)]
        return residuals.pointwise(terms)

    def gamma_consistency_residual(self, x) -> np.ndarray:
        """Zeroth-order coefficient equation with ``gamma`` substituted."""
        eta = self.eta_jet(x, 1)
        g = self.gamma_jet(x, 2)
        m = self._m(x, 2)
        v = self._v(x, 2)
        m1, m2 = m.d(), m.d(2)
        bracket = 2 * eta.d() + m1 * eta / m - 3 * m1 * m1 / m**3 + 2 * m2 / (m * m)
        terms = [g * bracket, m1 * g.d() / (m * m), -g.d(2) / m, -eta * v.d(), -v.d(2) / m]
        return residuals.pointwise(terms)

    def first_order_coefficient_residual(self, x) -> np.ndarray:
        """First-derivative coefficient equation with the partner potential substituted."""
        eta = self.eta_jet(x, 2)
        g = self.gamma_jet(x, 1)
        m = self._m(x, 3)
        v = self._v(x, 1)
        m1, m2, m3 = m.d(), m.d(2), m.d(3)
        terms = [
            2 * eta * eta.d(),
            m1 * eta * eta / m,
            -3 * eta * m1 * m1 / m**3,
            2 * m2 * eta / (m * m),
            -2 * g.d() / m,
            m1 * eta.d() / (m * m),
            2 * m1 * m1 * eta / m**3,
            -eta.d(2) / m,
            -m2 * eta / (m * m),
            -2 * v.d() / m,
            -6 * m1**3 / m**5,
            6 * m1 * m2 / m**4,
            -m3 / m**3,
        ]
        return residuals.pointwise(terms)

    def third_order_eta_residual(self, x) -> np.ndarray:
        """Equation for ``eta`` alone obtained after eliminating ``gamma``."""
        e = self.eta_jet(x, 3)
        m = self._m(x, 4)
        v = self._v(x, 1)
        c1 = _real(self.C1)
        m1, m2, m3, m4 = m.d(), m.d(2), m.d(3), m.d(4)
        e1, e2, e3 = e.d(), e.d(2), e.d(3)
        terms = [
            e3 / (2 * m),
            m * e1 * e * e,
            -e * e1 * m1 / (2 * m),
            -2 * e1 * e1,
            -2 * e1 * v,
            5 * e1 * m1 * m1 / m**3,
            -3 * e1 * m2 / (m * m),
            e**3 * m1 / 2,
            -e * e * m1 * m1 / (2 * m * m),
            -e * v * m1 / m,
            -2 * e * m1**3 / m**4,
            e * e * m2 / (2 * m),
            5 * e * m1 * m2 / (2 * m**3),
            -e2 * m1 / (m * m),
            -e * e2,
            -e * v.d(),
            -e * m3 / (2 * m * m),
            2 * c1 * e1,
            c1 * e * m1 / m,
            3 * v * m1 * m1 / m**3,
            -18 * m1**4 / m**6,
            49 * m1 * m1 * m2 / (2 * m**5),
            -3 * c1 * m1 * m1 / m**3,
            -2 * v * m2 / (m * m),
            -4 * m2 * m2 / m**4,
            2 * c1 * m2 / (m * m),
            -v.d() * m1 / (m * m),
            -9 * m1 * m3 / (2 * m**4),
            m4 / (2 * m**3),
        ]
        return residuals.pointwise(terms)

    def integrated_invariant_residual(self, x) -> np.ndarray:
        """First integral of the ``eta`` equation with ``C2 = ((mu1 - mu2)/2)^2``."""
        e = self.eta_jet(x, 2)
        m = self._m(x, 3)
        v = self._v(x, 0)
        c1, c2 = _real(self.C1), _real(self.C2)
        m1, m2, m3 = m.d(), m.d(2), m.d(3)
        e1, e2 = e.d(), e.d(2)
        terms = [
            e * e2 / 2,
            -e1 * e1 / 4,
            -e1 * e * e * m,
            e**4 * m * m / 4,
            -m * e * e * v,
            c1 * m * e * e,
            c1 * m1 * m1 / m**3,
            2 * c1 * m1 * e / m,
            -2 * m1 * v * e / m,
            -m1 * m1 * v / m**3,
            -m2 * e * e / (2 * m),
            m1 * e**3 / 2,
            5 * m1**3 * e / m**4,
            -2 * m1 * e * e1 / m,
            5 * m1 * m1 * e * e / (4 * m * m),
            m1 * e2 / (2 * m * m),
            -m2 * e1 / (2 * m * m),
            m3 * e / (2 * m * m),
            -4 * m1 * m2 * e / m**3,
            3 * m1**4 / m**6,
            -5 * m1 * m1 * m2 / (2 * m**5),
            -m2 * m2 / (4 * m**4),
            m1 * m3 / (2 * m**4),
            Jet.constant(c2, e),
        ]
        return residuals.pointwise(terms)

    def intertwining_residual(self, psi, energy, x) -> float:
        terms = self.partner_hamiltonian.residual_terms(self.apply_L2(psi), energy)(x, 0)
        return residuals.max_relative(terms)

    def operator_intertwining_residual(self, phi, x) -> float:
        f = as_field(phi)
        lhs = self.L2_terms(self.hamiltonian.apply(f))(x, 0)
        rhs = self.partner_hamiltonian.terms(self.apply_L2(f))(x, 0)
        return residuals.max_relative(lhs, rhs)

    def kernel_residual(self, which: int, x) -> float:
        sd = self.seed1 if which == 1 else self.seed2
        return residuals.max_relative(self.L2_terms(sd)(x, 0))

    def zero_mode_residuals(self, x) -> dict[str, float]:
        out = {}
        for j, (f, mu) in enumerate(zip(self.zero_mode_jets(), (self.mu1, self.mu2)), start=1):
            out[f"adjoint_kernel_{j}"] = residuals.max_relative(self.L2_adjoint_terms(f)(x, 0))
            out[f"eigen_{j}"] = residuals.max_relative(self.partner_hamiltonian.residual_terms(f, mu.real)(x, 0))
        return out

    def monotone_w_residual(self, x) -> float:
        """Pointwise ``w' - |U|^2`` relative to ``|U|^2``."""
        w = self.monotone_w_jet(x, 1)
        u = self.seed1.jet(x, 0).value
        mod2 = np.abs(u) ** 2
        return float(np.max(np.abs(w.d().value - mod2) / np.maximum(mod2, 1e-300)))


def _panel_integrals(f, breaks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre integrals over ``[breaks[i], breaks[i+1]]`` as ``value * exp(log)``.

    ``f`` returns ``(phase, log_magnitude)`` so panels never leave double range.
    """
    lo, hi = breaks[:-1], breaks[1:]
    half = (hi - lo) / 2
    nodes = (lo + half)[:, None] + half[:, None] * _GL_NODES[None, :]
    phase, logmag = f(nodes.ravel())
    phase, logmag = phase.reshape(nodes.shape), logmag.reshape(nodes.shape)
    top = logmag.max(axis=1)
    vals = phase * np.exp(logmag - top[:, None])
    return (vals * _GL_WEIGHTS[None, :]).sum(axis=1) * half, top


def _real(value: complex):
    value = complex(value)
    return value.real if abs(value.imag) <= REAL_TOL * max(1.0, abs(value)) else value


def _scalar(values, x):
    return values[0] if np.ndim(x) == 0 else values


def wronskian_nodes(partner: SecondOrderPartner, window=WRONSKIAN_WINDOW, samples=WRONSKIAN_SAMPLES) -> list[float]:
    xs = np.linspace(window[0], window[1], samples)
    w = partner.wronskian_jet(xs, 0).value
    if partner.case is Case.COMPLEX_CONJUGATE:
        w = (w / 1j).real
    else:
        w = np.real(w)

    def func(x):
        val = partner.wronskian_jet(np.atleast_1d(x), 0).value[0]
        return (val / 1j).real if partner.case is Case.COMPLEX_CONJUGATE else np.real(val)

    return numspec.count_nodes(w, xs, func=func).nodes


def _classify(partner: SecondOrderPartner) -> Modification2:
    if wronskian_nodes(partner):
        return Modification2.INVALID
    if partner.case is Case.COMPLEX_CONJUGATE:
        return Modification2.STRICT_ISO
    verdicts = [v for _, v, _ in partner.zero_modes()]
    if None in verdicts:
        return Modification2.INVALID
    norm = numspec.Normalizability.NORMALIZABLE
    if all(v is not norm for v in verdicts):
        e = model.energies(partner.seed1.params, 2) if partner.seed1.params.physical else None
        mus = sorted([partner.mu1.real, partner.mu2.real])
        if e is not None and np.allclose(mus, e, rtol=1e-9, atol=1e-9):
            return Modification2.DELETE_TWO
        return Modification2.STRICT_ISO
    if all(v is norm for v in verdicts):
        return Modification2.CREATE_TWO
    return Modification2.INVALID


def second_order_partner(seed1: model.SeedSolution, seed2: model.SeedSolution | None = None) -> SecondOrderPartner:
    """Real case from two seeds; complex case from one seed (its conjugate is implied)."""
    if seed2 is None:
        if abs(seed1.mu.imag) <= REAL_TOL * max(1.0, abs(seed1.mu)):
            raise ValueError("a single seed needs a complex factorization energy")
        seed2 = seed1.conjugate()
        case = Case.COMPLEX_CONJUGATE
    else:
        for sd in (seed1, seed2):
            if abs(sd.mu.imag) > REAL_TOL * max(1.0, abs(sd.mu)):
                raise ValueError("two-seed construction needs real factorization energies")
        case = Case.REAL_DISTINCT
    mu1, mu2 = seed1.mu, seed2.mu
    if abs(mu1 - mu2) <= 1e-12 * max(1.0, abs(mu1)):
        raise EqualFactorizationEnergies("C2 = 0 (equal factorization energies) is not supported")
    base = SecondOrderPartner(seed1, seed2, mu1, mu2, case, model_hamiltonian(seed1.params))
    return _with_modification(base, _classify(base))


def _with_modification(p: SecondOrderPartner, mod: Modification2) -> SecondOrderPartner:
    return SecondOrderPartner(p.seed1, p.seed2, p.mu1, p.mu2, p.case, p.hamiltonian, mod)


def model_pair(params: model.ModelParams, nu: float) -> SecondOrderPartner:
    """Seeds at ``(a, b)`` and ``(a + nu, b - nu)`` with the same branch weights."""
    s1 = model.seed(params.replace(nu=0.0))
    s2 = model.seed(params.replace(nu=nu))
    return second_order_partner(s1, s2)


def complex_partner(params: model.ModelParams) -> SecondOrderPartner:
    return second_order_partner(model.seed(params))
