"""Consistency of the intertwining constructions with type A N-fold SUSY (N = 1, 2).

For ``N`` factorization solutions the type A operator is built from a
superpotential ``W``, a gauge ``calW`` and a coordinate ``z``.  With
``calW = -ln U1`` and ``z = U2/U1`` (``N = 2``) or ``calW = -ln U`` (``N = 1``)
the potential difference

    V+ - V- = 2N (W'/M - M' W / (2 M^2))

must reproduce the partner potentials of the intertwining constructions, and
the gauged Hamiltonian must have ``B(z)`` linear in ``z``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import intertwine1, model, residuals
from .errors import NonMonotoneZ, SeedHasNode
from .hamiltonian import Field, PDMHamiltonian, as_field, model_hamiltonian
from .jets import Jet
from .report import VerificationReport

NODE_GUARD = 1e-300
DEFAULT_WINDOW = (-5.0, 5.0)


def _nodeless(u: Jet, what: str) -> Jet:
    if np.any(np.abs(u.value) <= NODE_GUARD):
        raise SeedHasNode(f"{what} vanishes at an evaluation point")
    return u


def superpotential_jet(u: Jet, m: Jet) -> Jet:
    """``W = -(ln U)' + M'/(4M)``; ``u`` and ``m`` need one derivative beyond the result."""
    return -u.d() / u.truncate(u.order - 1) + m.d() / (4 * m.truncate(m.order - 1))


def superpotential_W_from_seed(sd, x, mass: Field | None = None):
    """One-fold superpotential of a nodeless seed (model mass unless ``mass`` is given)."""
    if mass is None:
        mass = model_hamiltonian(sd.params).mass
    u = _nodeless(as_field(sd)(x, 1), "seed")
    w = superpotential_jet(u, mass(x, 1)).value
    w = np.real_if_close(w, tol=1e6)
    return w[0] if np.ndim(x) == 0 else w


def delta_v_jet(w: Jet, m: Jet, n: int) -> Jet:
    """``2N (W'/M - M' W / (2 M^2))`` from jets of order >= 1."""
    mt, wt = m.truncate(m.order - 1), w.truncate(w.order - 1)
    return 2 * n * (w.d() / mt - m.d() * wt / (2 * mt * mt))


def first_order_equivalence(sd: model.SeedSolution, x) -> float:
    """Max relative gap between the one-fold ``V+ - V-`` and the first-order ``Vbar - V``."""
    h = model_hamiltonian(sd.params)
    u = _nodeless(sd.jet(x, 2), "seed")
    m = h.mass(x, 2)
    v = h.potential(x, 0)
    dv_typea = delta_v_jet(superpotential_jet(u, m), m, 1)
    vbar = intertwine1.darboux_potential(u, m, v)
    return residuals.max_relative([dv_typea], [vbar, -v])


@dataclass(frozen=True)
class TwoFoldPair:
    """Two solutions ``H U_i = mu_i U_i`` with ``U1`` nodeless on the region of interest."""

    u1: Field
    u2: Field
    mu1: complex
    mu2: complex
    hamiltonian: PDMHamiltonian

    def _u1(self, x, order):
        return _nodeless(self.u1(x, order), "U1")

    def z_jet(self, x, order: int = 0) -> Jet:
        return self.u2(x, order) / self._u1(x, order)

    def z(self, x):
        return _scalar(np.real_if_close(self.z_jet(x, 0).value, tol=1e6), x)

    def gauge_derivative_jet(self, x, order: int = 0) -> Jet:
        """``d calW / dx`` for ``calW = -ln U1``."""
        u = self._u1(x, order + 1)
        return -u.d() / u.truncate(order)

    def superpotential_jet(self, x, order: int = 0) -> Jet:
        """``W = calW' - (N-1)/2 z''/z' + N M'/(4M)`` at ``N = 2``."""
        zj = self.z_jet(x, order + 2)
        m = self.hamiltonian.mass(x, order + 1)
        return (
            self.gauge_derivative_jet(x, order)
            - zj.d(2) / (2 * zj.d().truncate(order))
            + m.d() / (2 * m.truncate(order))
        )

    def eta_jet(self, x, order: int = 0) -> Jet:
        m = self.hamiltonian.mass(x, order + 1)
        mt = m.truncate(order)
        return 2 * self.superpotential_jet(x, order) / mt - m.d() / (mt * mt)

    def eta_from_W(self, x):
        return _scalar(np.real_if_close(self.eta_jet(x, 0).value, tol=1e6), x)

    def delta_v_jet(self, x, order: int = 0) -> Jet:
        return delta_v_jet(self.superpotential_jet(x, order + 1), self.hamiltonian.mass(x, order + 1), 2)

    def b_jet(self, x, order: int = 0) -> Jet:
        """``B = z''/M - z' M'/M^2 - 2 z'^2/M dcalW/dz`` with ``dcalW/dz = calW'/z'``."""
        zj = self.z_jet(x, order + 2)
        m = self.hamiltonian.mass(x, order + 1)
        mt = m.truncate(order)
        z1 = zj.d().truncate(order)
        return zj.d(2) / mt - z1 * m.d() / (mt * mt) - 2 * z1 * self.gauge_derivative_jet(x, order) / mt

    def b_values(self, x):
        return _scalar(np.real_if_close(self.b_jet(x, 0).value, tol=1e6), x)


def pair_from_seeds(seed1: model.SeedSolution, seed2: model.SeedSolution) -> TwoFoldPair:
    return TwoFoldPair(seed1.jet, seed2.jet, seed1.mu, seed2.mu, model_hamiltonian(seed1.params))


def pair_from_partner(partner) -> TwoFoldPair:
    """The two-fold data behind a second-order partner."""
    return TwoFoldPair(partner.seed1.jet, partner.seed2.jet, partner.mu1, partner.mu2, partner.hamiltonian)


def second_order_equivalence(partner, x) -> dict[str, float]:
    """``eta`` and ``Vbar - V`` from the two-fold superpotential against the Wronskian route."""
    pair = pair_from_partner(partner)
    eta_w = pair.eta_jet(x, 0)
    eta_i = partner.eta_jet(x, 0)
    dv = pair.delta_v_jet(x, 0)
    vbar = partner.partner_potential_jet(x, 0)
    v = partner.hamiltonian.potential(x, 0)
    return {
        "eta": residuals.max_relative([eta_w], [eta_i]),
        "delta_v": residuals.max_relative([dv], [vbar, -v]),
    }


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    deviation: float


def bz_linearity(pair: TwoFoldPair, xs=None, tol: float = 1e-6) -> VerificationReport:
    """Fit ``B(z) = slope z + intercept`` on the samples; the slope must be ``mu1 - mu2``."""
    if xs is None:
        xs = np.linspace(*DEFAULT_WINDOW, 201)
    xs = np.asarray(xs, dtype=float)
    zj = pair.z_jet(xs, 1)
    z = np.real_if_close(zj.value, tol=1e6)
    dz = np.real_if_close(zj.d().value, tol=1e6)
    if np.iscomplexobj(z) or not (np.all(dz > 0) or np.all(dz < 0)) or not (
        np.all(np.diff(z) > 0) or np.all(np.diff(z) < 0)
    ):
        raise NonMonotoneZ("z = U2/U1 is not strictly monotone on the sample window")
    b = np.real_if_close(pair.b_values(xs), tol=1e6)
    slope, intercept = np.polyfit(z, b, 1)
    scale = max(np.max(np.abs(b)), 1e-300)
    deviation = float(np.max(np.abs(b - (slope * z + intercept))) / scale)
    gap = abs(pair.mu1 - pair.mu2)
    report = VerificationReport("B(z) linearity")
    report.add("slope - (mu1 - mu2)", abs(slope - (pair.mu1 - pair.mu2).real) / gap, tol)
    report.add("intercept", abs(intercept) / gap, tol)
    report.add("affine deviation", deviation, tol)
    report.info.update(slope=float(slope), intercept=float(intercept), deviation=deviation)
    return report


def _scalar(values, x):
    return values[0] if np.ndim(x) == 0 else values
