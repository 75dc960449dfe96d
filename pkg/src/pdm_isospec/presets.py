"""Parameter sets of the seven worked examples and their curve tables."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import intertwine1, intertwine2, model

FIG6_NU = 7.2
FIG6_NU_ALT = 10.0
CURVE_ROWS = 801


@dataclass(frozen=True)
class FigurePreset:
    id: str
    params: model.ModelParams
    order: int
    modification: str
    x_range: tuple[float, float] = (-5.0, 5.0)
    nu2: float | None = None
    notes: str = ""

    @property
    def columns(self) -> tuple[str, ...]:
        if self.id in ("fig4", "fig5", "fig6"):
            return ("x", "V", "Vbar", "Vbar2")
        return ("x", "V", "Vbar")

    def first_order(self) -> intertwine1.FirstOrderPartner:
        return intertwine1.first_order_partner(model.seed(self.params))

    def second_order(self, nu: float | None = None) -> intertwine2.SecondOrderPartner:
        if self.params.is_real:
            return intertwine2.model_pair(self.params, self.nu2 if nu is None else nu)
        return intertwine2.complex_partner(self.params)

    def curves(self, samples: int = CURVE_ROWS, nu: float | None = None) -> dict[str, np.ndarray]:
        """Columns of the figure table on a uniform grid over ``x_range``."""
        x = np.linspace(self.x_range[0], self.x_range[1], samples)
        out = {"x": x, "V": model.potential(self.params, x)}
        if self.order == 1:
            out["Vbar"] = self.first_order().partner_potential(x)
            return out
        second = self.second_order(nu)
        if "Vbar2" in self.columns:
            out["Vbar"] = self.first_order().partner_potential(x)
            out["Vbar2"] = second.partner_potential2(x)
        else:
            vbar = second.partner_potential_jet(x, 0).value
            out["Vbar"] = np.real(vbar)
        return out

    def max_imag_vbar(self, x=None) -> float:
        """Largest imaginary part of the second-order partner before it is made real."""
        if x is None:
            x = np.linspace(-10.0, 10.0, 2001)
        if self.order != 2:
            return 0.0
        second = self.second_order()
        vbar = second.partner_potential_jet(x, 0, keep_complex=True).value
        return float(np.max(np.abs(np.imag(vbar)))) if np.iscomplexobj(vbar) else 0.0


P = model.ModelParams

PRESETS: dict[str, FigurePreset] = {
    "fig1": FigurePreset("fig1", P(5, 0, 3, alpha=1, beta=0), 1, "DeleteGround", notes="deletes E0 = 4.5"),
    "fig2": FigurePreset("fig2", P(3, 5, 4, alpha=1, beta=0), 1, "StrictIso"),
    "fig3": FigurePreset("fig3", P(2.8, 20, 4.4, alpha=1, beta=1), 1, "CreateBelowGround", notes="inserts mu = -13.32"),
    "fig4": FigurePreset("fig4", P(5, 0, 3, alpha=1, beta=0), 2, "DeleteTwo", nu2=1.0, notes="deletes E0 and E1"),
    "fig5": FigurePreset("fig5", P(3, 5, 4, alpha=1, beta=0), 2, "StrictIso", nu2=1.0),
    "fig6": FigurePreset(
        "fig6",
        P(2.8, 20, 4.4, alpha=1, beta=1),
        2,
        "CreateTwo",
        nu2=FIG6_NU,
        notes="inserts -13.32 and -85.32; nu = 10 gives the same second seed",
    ),
    "fig7": FigurePreset(
        "fig7",
        P(6.1 - 5j, 8 + 5j, 4.1, alpha=1, beta=0, nu=1.9),
        2,
        "StrictIso",
        notes="complex conjugate factorization energies -51.25 +- 9.5i",
    ),
}


def get(fig: str) -> FigurePreset:
    try:
        return PRESETS[fig]
    except KeyError:
        raise ValueError(f"unknown figure {fig!r}; choose from {', '.join(PRESETS)}") from None
