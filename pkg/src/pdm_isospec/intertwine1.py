"""First-order intertwining ``L = (d/dx - U'/U) / sqrt(M)``.

Given a nodeless seed ``U`` with ``H U = mu U`` this builds the superpotential
``A = -U'/(sqrt(M) U)``, the partner potential, the maps ``L`` and ``L^dagger``
on fields, and the partner eigenfunction ``sqrt(M)/U`` at ``mu``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import jets, model, numspec
from .errors import SeedHasNode
from . import residuals
from .hamiltonian import Field, PDMHamiltonian, as_field, from_terms, model_hamiltonian
from .jets import Jet
from .model import Modification
from .report import VerificationReport

NODE_GUARD = 1e-300


def darboux_potential(u: Jet, m: Jet, v: Jet) -> Jet:
    """Partner potential for seed jet ``u`` (order >= 2), mass ``m`` (order >= 2), potential ``v``."""
    u1, u2 = u.d(), u.d(2)
    m1, m2 = m.d(), m.d(2)
    return (
        v
        - 2 * u2 / (m * u)
        + 2 * u1 * u1 / (m * u * u)
        + m1 * u1 / (m * m * u)
        + m2 / (2 * m * m)
        - 3 * m1 * m1 / (4 * m**3)
    )


@dataclass(frozen=True)
class FirstOrderPartner:
    seed: model.SeedSolution
    mu: float
    modification: Modification
    hamiltonian: PDMHamiltonian = field(repr=False)

    # building blocks ------------------------------------------------------

    def _m(self, x, order):
        return self.hamiltonian.mass(x, order)

    def _v(self, x, order):
        return self.hamiltonian.potential(x, order)

    def _u(self, x, order):
        u = self.seed.jet(x, order)
        if np.any(np.abs(u.value) <= NODE_GUARD):
            raise SeedHasNode("seed vanishes at an evaluation point")
        return u

    def log_derivative(self, x, order: int = 0) -> Jet:
        u = self._u(x, order + 1)
        return u.d() / u

    def superpotential_jet(self, x, order: int = 0) -> Jet:
        u = self._u(x, order + 1)
        m = self._m(x, order)
        return -u.d() / (jets.sqrt(m) * u)

    def superpotential_A(self, x):
        return _scalar(self.superpotential_jet(x, 0).value, x)

    def partner_potential_jet(self, x, order: int = 0) -> Jet:
        u = self._u(x, order + 2)
        m = self._m(x, order + 2)
        v = self._v(x, order)
        return darboux_potential(u, m, v)

    def partner_potential(self, x):
        return _scalar(self.partner_potential_jet(x, 0).value, x)

    @property
    def partner_hamiltonian(self) -> PDMHamiltonian:
        return PDMHamiltonian(self.hamiltonian.mass, self.partner_potential_jet)

    # operators ------------------------------------------------------------

    def L_terms(self, psi):
        f = as_field(psi)

        def t(x, order: int = 0) -> list[Jet]:
            pj = f(x, order + 1)
            sm = jets.sqrt(self._m(x, order))
            return [pj.d() / sm, -self.log_derivative(x, order) * pj / sm]

        return t

    def apply_L(self, psi) -> Field:
        return from_terms(self.L_terms(psi))

    def L_adjoint_terms(self, g):
        f = as_field(g)

        def t(x, order: int = 0) -> list[Jet]:
            gj = f(x, order + 1)
            m = self._m(x, order + 1)
            sm = jets.sqrt(m)
            return [-gj.d() / sm, -self.log_derivative(x, order) * gj / sm, m.d() * gj / (2 * m * sm)]

        return t

    def apply_L_adjoint(self, g) -> Field:
        return from_terms(self.L_adjoint_terms(g))

    def missing_state_jet(self, x, order: int = 0) -> Jet:
        return jets.sqrt(self._m(x, order)) / self._u(x, order)

    def missing_state(self, x):
        return _scalar(self.missing_state_jet(x, 0).value, x)

    def missing_state_normalizability(self, lengths=(10.0, 20.0, 40.0)):
        return numspec.normalizability(self.missing_state, lengths)

    # spectrum -------------------------------------------------------------

    def partner_spectrum(self, k: int) -> np.ndarray:
        """First ``k`` partner levels predicted by the modification rule."""
        e = model.energies(self.seed.params, k + 1)
        if self.modification is Modification.DELETE_GROUND:
            return e[1 : k + 1]
        if self.modification is Modification.STRICT_ISO:
            return e[:k]
        if self.modification is Modification.CREATE_BELOW_GROUND:
            return np.concatenate([[self.mu], e[: k - 1]])
        raise ValueError("no spectrum rule for an invalid transformation")

    @property
    def law(self) -> tuple[numspec.Law, tuple]:
        return {
            Modification.DELETE_GROUND: (numspec.Law.SHIFT_BY_ONE, ()),
            Modification.STRICT_ISO: (numspec.Law.EQUAL, ()),
            Modification.CREATE_BELOW_GROUND: (numspec.Law.INSERT_ONE, (self.mu,)),
        }[self.modification]

    # identity checks ------------------------------------------------------

    def riccati_residual(self, x) -> np.ndarray:
        """Pointwise ``A'/sqrt(M) - A M'/(2 M^{3/2}) - A^2 + V - mu`` relative to its terms."""
        a = self.superpotential_jet(x, 1)
        m = self._m(x, 1)
        v = self._v(x, 0)
        sm = jets.sqrt(m)
        terms = [a.d() / sm, -a * m.d() / (2 * m * sm), -a * a, v, Jet.constant(-self.mu, v)]
        return residuals.pointwise(terms)

    def riccati_derivative_residual(self, x) -> np.ndarray:
        """Differentiated Riccati equation (free of the integration constant)."""
        a = self.superpotential_jet(x, 2)
        m = self._m(x, 2)
        v = self._v(x, 1)
        sm = jets.sqrt(m)
        m32 = m * sm
        terms = [
            a.d(2) / sm,
            -a.d() * m.d() / m32,
            -a * m.d(2) / (2 * m32),
            3 * a * m.d() * m.d() / (4 * m32 * m),
            -2 * a * a.d(),
            v.d(),
        ]
        return residuals.pointwise(terms)

    def coefficient_residuals(self, x) -> dict[str, np.ndarray]:
        """Equations obtained by matching derivative orders in ``L H = Hbar L``."""
        a = self.superpotential_jet(x, 2)
        m = self._m(x, 2)
        v = self._v(x, 1)
        vb = self.partner_potential_jet(x, 0)
        sm = jets.sqrt(m)
        first = [vb, -v, -2 * a.d() / sm, 3 * m.d() * m.d() / (4 * m**3), -m.d(2) / (2 * m * m)]
        zeroth = [a * vb, -a * v, a.d() * m.d() / (m * m), -v.d() / sm, -a.d(2) / m]
        return {
            "potential_shift": residuals.pointwise(first),
            "zeroth_order": residuals.pointwise(zeroth),
        }

    def factorization_residuals(self, test_functions, x, tol: float = 1e-6) -> VerificationReport:
        """``L^dag L = H - mu`` and ``L L^dag = Hbar - mu`` applied to each test function."""
        report = VerificationReport("first-order factorization")
        h, hb = self.hamiltonian, self.partner_hamiltonian
        for name, phi in test_functions.items():
            f = as_field(phi)
            lhs = self.L_adjoint_terms(self.apply_L(f))(x, 0)
            rhs = h.residual_terms(f, self.mu)(x, 0)
            report.add(f"LdagL-(H-mu) [{name}]", residuals.max_relative(lhs, rhs), tol)
            lhs = self.L_terms(self.apply_L_adjoint(f))(x, 0)
            rhs = hb.residual_terms(f, self.mu)(x, 0)
            report.add(f"LLdag-(Hbar-mu) [{name}]", residuals.max_relative(lhs, rhs), tol)
        return report

    def intertwining_residual(self, psi, energy, x) -> float:
        """``(Hbar - E) L psi`` for an eigenfunction ``psi`` of H at ``energy``."""
        terms = self.partner_hamiltonian.residual_terms(self.apply_L(psi), energy)(x, 0)
        return residuals.max_relative(terms)

    def operator_intertwining_residual(self, phi, x) -> float:
        """``L H phi - Hbar L phi`` for an arbitrary smooth ``phi``."""
        f = as_field(phi)
        lhs = self.L_terms(self.hamiltonian.apply(f))(x, 0)
        rhs = self.partner_hamiltonian.terms(self.apply_L(f))(x, 0)
        return residuals.max_relative(lhs, rhs)

    def adjoint_kernel_residual(self, x) -> float:
        """``L^dag`` annihilates the missing state."""
        return residuals.max_relative(self.L_adjoint_terms(self.missing_state_jet)(x, 0))


def _scalar(values, x):
    return values[0] if np.ndim(x) == 0 else values


def first_order_partner(sd: model.SeedSolution, modification: Modification | None = None) -> FirstOrderPartner:
    """Partner built on ``sd``; classification is computed unless supplied."""
    if modification is None:
        modification = model.classify_modification(sd)
    if modification is Modification.INVALID:
        raise SeedHasNode("seed has a node or unsuitable asymptotics; partner would be singular")
    return FirstOrderPartner(sd, float(sd.mu.real), modification, model_hamiltonian(sd.params))


def chained_partner(first: FirstOrderPartner, second_seed_field, mu2: float) -> "ChainedPartner":
    return ChainedPartner(first, as_field(second_seed_field), mu2)


@dataclass(frozen=True)
class ChainedPartner:
    """Second first-order step taken on the partner of ``first`` with seed ``L psi``."""

    first: FirstOrderPartner
    seed_field: Field
    mu: float

    def partner_potential_jet(self, x, order: int = 0) -> Jet:
        u = self.seed_field(x, order + 2)
        m = self.first.hamiltonian.mass(x, order + 2)
        v = self.first.partner_potential_jet(x, order)
        return darboux_potential(u, m, v)

    def partner_potential(self, x):
        return _scalar(self.partner_potential_jet(x, 0).value, x)
