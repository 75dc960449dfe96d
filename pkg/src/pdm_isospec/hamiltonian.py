"""BenDaniel-Duke operator ``H = -d/dx (1/M) d/dx + V`` acting on jets.

A *field* is any callable ``f(x, order) -> Jet``.  Operators map fields to
fields, so compositions such as ``L^dagger L phi`` stay exact.  Each operator
also exposes its individual terms, which residual checks use as their scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .jets import Jet
from .residuals import total

Field = Callable[..., Jet]


def as_field(obj) -> Field:
    """Fields from seeds, bound states, or anything exposing ``jet(x, order)``."""
    if hasattr(obj, "jet"):
        return obj.jet
    return obj


def from_terms(terms_field) -> Field:
    def f(x, order: int = 0) -> Jet:
        return total(terms_field(x, order))

    return f


@dataclass(frozen=True)
class PDMHamiltonian:
    mass: Field
    potential: Field

    def terms(self, f) -> Callable[..., list[Jet]]:
        f = as_field(f)

        def t(x, order: int = 0) -> list[Jet]:
            fj = f(x, order + 2)
            m = self.mass(x, order + 1)
            return [-fj.d(2) / m, m.d() * fj.d() / (m * m), self.potential(x, order) * fj]

        return t

    def apply(self, f) -> Field:
        return from_terms(self.terms(f))

    def residual_terms(self, f, energy) -> Callable[..., list[Jet]]:
        """Terms of ``(H - energy) f``."""
        f = as_field(f)
        ht = self.terms(f)

        def t(x, order: int = 0) -> list[Jet]:
            return ht(x, order) + [-energy * f(x, order)]

        return t

    def residual(self, f, energy) -> Field:
        return from_terms(self.residual_terms(f, energy))


def model_hamiltonian(params) -> PDMHamiltonian:
    from . import model

    return PDMHamiltonian(
        mass=lambda x, order=0: model.mass_jet(params, x, order),
        potential=lambda x, order=0: model.potential_jet(params, x, order),
    )
