"""Registry of verification checks grouped into suites.

Each check returns a :class:`VerificationReport` whose pass/fail is derived
from its recorded numbers.  Failures and exceptions are collected, never
raised, so a run always visits every selected check.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import intertwine1, intertwine2, jets, model, numspec, presets, specialfn, typea
from .hamiltonian import model_hamiltonian
from .numspec import Law, Spectrum
from .report import VerificationReport

SUITES = ("all", "first-order", "second-order", "typea", "numerics")
SPECTRUM_TOL = 1e-3
CLOSED_FORM_TOL = 1e-8
IDENTITY_TOL = 1e-6
TYPEA_TOL = 1e-8
COMPOSITION_TOL = 1e-7
SPECIALFN_TOL = 1e-10
SPECIALFN_DRAWS = 200
SPECIALFN_SEED = 20240601

WIDE = np.linspace(-10.0, 10.0, 401)
# even count keeps x = 0 (a node of odd bound states) off the grid
IDENTITY_GRID = np.linspace(-8.0, 8.0, 320)


@dataclass(frozen=True)
class Check:
    name: str
    suite: str
    criterion: str
    func: Callable[[float], VerificationReport]

    def run(self, tol_scale: float = 1.0) -> VerificationReport:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                report = self.func(tol_scale)
        except Exception as exc:  # collected, not raised
            report = VerificationReport(self.name, error=f"{type(exc).__name__}: {exc}")
        report.name = self.name
        report.info.setdefault("suite", self.suite)
        report.info.setdefault("criterion", self.criterion)
        return report


# --- helpers ---------------------------------------------------------------------


def _rel_dev(got, ref) -> float:
    got, ref = np.asarray(got), np.asarray(ref)
    return float(np.max(np.abs(got - ref) / np.maximum(1.0, np.abs(ref))))


def _spectrum(h, k: int) -> Spectrum:
    return numspec.converged_spectrum(h.mass, h.potential, k)


def _law_metrics(report, reference: Spectrum, partner: Spectrum, law: Law, tol, inserted=(), prefix=""):
    sub = numspec.verify_isospectral(reference, partner, law, tol, inserted)
    report.extend(sub, prefix)
    report.info[prefix + "partner_eigenvalues"] = [float(v) for v in partner.eigenvalues]


def _analytic(params, k: int) -> Spectrum:
    return Spectrum.analytic(model.energies(params, k))


def _gauss_bump(center: float, width: float):
    def f(x, order: int = 0):
        t = (jets.Jet.variable(x, order) - center) * (1.0 / width)
        return jets.exp(t * t * (-1.0))

    return f


BUMPS = {"bump(0,1)": _gauss_bump(0.0, 1.0), "bump(1.3,0.7)": _gauss_bump(1.3, 0.7), "bump(-2,1.5)": _gauss_bump(-2.0, 1.5)}


# --- criterion 1: model spectrum ---------------------------------------------------


def check_model_spectrum(scale: float) -> VerificationReport:
    params = presets.get("fig1").params
    spec = _spectrum(model_hamiltonian(params), 3)
    report = VerificationReport("model spectrum")
    ref = model.energies(params, 3)
    for i, (g, r) in enumerate(zip(spec.eigenvalues, ref)):
        report.add(f"E[{i}]", abs(g - r) / max(1.0, abs(r)), SPECTRUM_TOL * scale, expected=float(r), observed=float(g))
    order = spec.observed_order
    report.add("observed order - 2", float(np.max(np.abs(order - 2.0))), 0.5 * scale)
    report.info["spectrum"] = spec.to_dict()
    return report


# --- criteria 2-4: first order ----------------------------------------------------


def check_first_deletion(scale: float) -> VerificationReport:
    pre = presets.get("fig1")
    a, b, c = 5.0, 0.0, 3.0
    fp = pre.first_order()
    x = WIDE
    ref = (c * c - 1) / 4 * np.exp(-x) + (a + b - c) * (2 + a + b - c) / 4 * np.exp(x) + (a + b) / 2
    report = VerificationReport("first-order deletion")
    report.add("Vbar vs closed form", _rel_dev(fp.partner_potential(x), ref), CLOSED_FORM_TOL * scale)
    partner = _spectrum(fp.partner_hamiltonian, 3)
    _law_metrics(report, _analytic(pre.params, 4), partner, Law.SHIFT_BY_ONE, SPECTRUM_TOL * scale)
    report.info["modification"] = fp.modification.value
    return report


def check_first_strict_iso(scale: float) -> VerificationReport:
    pre = presets.get("fig2")
    fp = pre.first_order()
    x = WIDE
    ref = 15 * np.exp(-x) / 4 + 2 * np.exp(x) + (4 + np.exp(x) - 3 * np.exp(2 * x)) / (4 + 3 * np.exp(x)) ** 2
    report = VerificationReport("first-order strict isospectrality")
    report.add("Vbar vs closed form", _rel_dev(fp.partner_potential(x), ref), CLOSED_FORM_TOL * scale)
    base = _spectrum(model_hamiltonian(pre.params), 4)
    _law_metrics(report, _analytic(pre.params, 4), base, Law.EQUAL, SPECTRUM_TOL * scale, prefix="H: ")
    partner = _spectrum(fp.partner_hamiltonian, 4)
    _law_metrics(report, base, partner, Law.EQUAL, SPECTRUM_TOL * scale, prefix="Hbar vs H: ")
    report.info["modification"] = fp.modification.value
    return report


def check_first_creation(scale: float) -> VerificationReport:
    pre = presets.get("fig3")
    fp = pre.first_order()
    report = VerificationReport("first-order creation")
    partner = _spectrum(fp.partner_hamiltonian, 4)
    _law_metrics(report, _analytic(pre.params, 4), partner, Law.INSERT_ONE, SPECTRUM_TOL * scale, (fp.mu,))
    verdict, vals = fp.missing_state_normalizability()
    report.add("missing state normalizable", 0.0 if verdict is numspec.Normalizability.NORMALIZABLE else 1.0, 0.5)
    report.info.update(mu=fp.mu, window_integrals=vals, modification=fp.modification.value)
    return report


# --- criteria 5-8: second order ---------------------------------------------------


def check_second_deletion(scale: float) -> VerificationReport:
    pre = presets.get("fig4")
    p = pre.second_order()
    a, b, c = 5.0, 0.0, 3.0
    x = WIDE
    ref = ((c * c - 2 * c * (a + b + 2) + (a + b + 1) * (a + b + 3)) * np.exp(x) + c * (c + 2) * np.exp(-x) + 4 * (a + b + 1)) / 4
    report = VerificationReport("second-order deletion")
    report.add("Vbar vs closed form", _rel_dev(p.partner_potential2(x), ref), CLOSED_FORM_TOL * scale)
    partner = _spectrum(p.partner_hamiltonian, 2)
    _law_metrics(report, _analytic(pre.params, 4), partner, Law.SHIFT_BY_TWO, SPECTRUM_TOL * scale)
    report.info["modification"] = p.modification.value
    return report


def check_second_strict_iso(scale: float) -> VerificationReport:
    pre = presets.get("fig5")
    p = pre.second_order()
    x = WIDE
    ref = 1 + 0.75 * (9 * np.cosh(x) - 7 * np.sinh(x))
    report = VerificationReport("second-order strict isospectrality")
    report.add("Vbar vs closed form", _rel_dev(p.partner_potential2(x), ref), CLOSED_FORM_TOL * scale)
    base = _spectrum(model_hamiltonian(pre.params), 4)
    partner = _spectrum(p.partner_hamiltonian, 4)
    _law_metrics(report, _analytic(pre.params, 4), base, Law.EQUAL, SPECTRUM_TOL * scale, prefix="H: ")
    _law_metrics(report, base, partner, Law.EQUAL, SPECTRUM_TOL * scale, prefix="Hbar vs H: ")
    report.info["modification"] = p.modification.value
    return report


def check_second_creation(scale: float) -> VerificationReport:
    pre = presets.get("fig6")
    last = None
    for nu in (presets.FIG6_NU, presets.FIG6_NU_ALT):
        p = pre.second_order(nu)
        report = VerificationReport("second-order creation")
        partner = _spectrum(p.partner_hamiltonian, 4)
        inserted = (p.mu1.real, p.mu2.real)
        _law_metrics(report, _analytic(pre.params, 4), partner, Law.INSERT_TWO, SPECTRUM_TOL * scale, inserted)
        report.info.update(nu=nu, mu=list(inserted), modification=p.modification.value)
        if report.passed:
            return report
        last = report
    return last


def check_complex(scale: float) -> VerificationReport:
    pre = presets.get("fig7")
    p = pre.second_order()
    report = VerificationReport("complex conjugate case")
    report.add("max |Im Vbar| on [-10,10]", pre.max_imag_vbar(WIDE), 1e-10 * scale)
    base = _spectrum(model_hamiltonian(pre.params), 4)
    partner = _spectrum(p.partner_hamiltonian, 4)
    _law_metrics(report, _analytic(pre.params, 4), base, Law.EQUAL, SPECTRUM_TOL * scale, prefix="H: ")
    _law_metrics(report, base, partner, Law.EQUAL, SPECTRUM_TOL * scale, prefix="Hbar vs H: ")
    report.info.update(mu1=str(p.mu1), mu2=str(p.mu2), modification=p.modification.value)
    return report


# --- criterion 9: operator identities ---------------------------------------------


def _kernel_levels(fp_or_p, params, k: int) -> list[int]:
    """Bound-state indices that the intertwiner annihilates (they are seeds)."""
    if isinstance(fp_or_p, intertwine1.FirstOrderPartner):
        mus = [fp_or_p.mu]
    else:
        mus = [fp_or_p.mu1, fp_or_p.mu2]
    e = model.energies(params, k)
    return [n for n in range(k) if any(abs(e[n] - m) <= 1e-9 * max(1.0, abs(e[n])) for m in mus)]


def check_first_identities(scale: float) -> VerificationReport:
    report = VerificationReport("first-order identities")
    x = IDENTITY_GRID
    tol = IDENTITY_TOL * scale
    for fig in ("fig1", "fig2", "fig3"):
        pre = presets.get(fig)
        fp = pre.first_order()
        report.add(f"{fig} Riccati", float(np.max(fp.riccati_residual(x))), tol)
        report.add(f"{fig} Riccati derivative", float(np.max(fp.riccati_derivative_residual(x))), tol)
        for name, r in fp.coefficient_residuals(x).items():
            report.add(f"{fig} coefficient {name}", float(np.max(r)), tol)
        tests = dict(BUMPS)
        tests["psi0"] = model.bound_state(pre.params, 0)
        report.extend(fp.factorization_residuals(tests, x, tol), f"{fig} ")
        skip = _kernel_levels(fp, pre.params, 4)
        for n in range(4):
            if n in skip:
                continue
            psi = model.bound_state(pre.params, n)
            report.add(f"{fig} intertwining psi{n}", fp.intertwining_residual(psi, model.energy(pre.params, n), x), tol)
        for name, phi in BUMPS.items():
            report.add(f"{fig} L H - Hbar L [{name}]", fp.operator_intertwining_residual(phi, x), tol)
        report.add(f"{fig} L^dag kills missing state", fp.adjoint_kernel_residual(x), tol)
    return report


def check_second_identities(scale: float) -> VerificationReport:
    report = VerificationReport("second-order identities")
    tol = IDENTITY_TOL * scale
    for fig in ("fig4", "fig5", "fig6", "fig7"):
        pre = presets.get(fig)
        p = pre.second_order()
        x = IDENTITY_GRID
        report.add(f"{fig} ansatz (tau1, +xi)", float(np.max(p.ansatz_residual(x))), tol)
        report.add(f"{fig} ansatz (tau2, -xi)", float(np.max(p.ansatz_residual(x, swapped=True))), tol)
        report.add(f"{fig} tau bracket", float(np.max(p.tau_bracket_residual(x, 1))), tol)
        report.add(f"{fig} integrated invariant", float(np.max(p.integrated_invariant_residual(x))), tol)
        report.add(f"{fig} third-order eta equation", float(np.max(p.third_order_eta_residual(x))), tol)
        report.add(f"{fig} first-derivative coefficients", float(np.max(p.first_order_coefficient_residual(x))), tol)
        report.add(f"{fig} gamma consistency", float(np.max(p.gamma_consistency_residual(x))), tol)
        report.add(f"{fig} kernel U1", p.kernel_residual(1, x), tol)
        report.add(f"{fig} kernel U2", p.kernel_residual(2, x), tol)
        params = pre.params if pre.params.is_real else pre.params.replace(nu=0.0)
        skip = _kernel_levels(p, params, 4)
        for n in range(4):
            if n in skip:
                continue
            psi = model.bound_state(params, n)
            report.add(f"{fig} intertwining psi{n}", p.intertwining_residual(psi, model.energy(params, n), x), tol)
        for name, phi in BUMPS.items():
            report.add(f"{fig} L H - Hbar L [{name}]", p.operator_intertwining_residual(phi, x), tol)
        if p.case is intertwine2.Case.REAL_DISTINCT:
            for name, v in p.zero_mode_residuals(x).items():
                report.add(f"{fig} zero mode {name}", v, tol)
        else:
            report.add(f"{fig} w' - |U|^2", p.monotone_w_residual(x), tol)
    return report


# --- criterion 10: type A ---------------------------------------------------------


def check_typea(scale: float) -> VerificationReport:
    report = VerificationReport("type A equivalence")
    tol = TYPEA_TOL * scale
    x = np.linspace(-5.0, 5.0, 201)
    for fig in ("fig1", "fig2", "fig3"):
        sd = model.seed(presets.get(fig).params)
        report.add(f"{fig} N=1 potential difference", typea.first_order_equivalence(sd, x), tol)
    for fig in ("fig4", "fig5", "fig6", "fig7"):
        p = presets.get(fig).second_order()
        for name, v in typea.second_order_equivalence(p, x).items():
            report.add(f"{fig} N=2 {name}", v, tol)
    p = presets.get("fig4").second_order()
    fit = typea.bz_linearity(typea.pair_from_partner(p), x, 1e-6 * scale)
    report.extend(fit, "fig4 ")
    report.info.update(slope=fit.info["slope"], intercept=fit.info["intercept"])
    return report


# --- criterion 11: composition ----------------------------------------------------


def check_composition(scale: float) -> VerificationReport:
    pre = presets.get("fig4")
    p = pre.second_order()
    fp = pre.first_order()
    chained = intertwine1.chained_partner(fp, fp.apply_L(model.bound_state(pre.params, 1)), model.energy(pre.params, 1))
    report = VerificationReport("composition")
    report.add("two first-order deletions vs second order", _rel_dev(chained.partner_potential(WIDE), p.partner_potential2(WIDE)), COMPOSITION_TOL * scale)
    return report


# --- criterion 12: special functions ----------------------------------------------


def _rel(lhs: complex, scale: float) -> float:
    return abs(lhs) / max(scale, 1e-300)


def check_special_functions(scale: float) -> VerificationReport:
    rng = np.random.default_rng(SPECIALFN_SEED)
    tol = SPECIALFN_TOL * scale
    worst = {"jacobi connection": 0.0, "contiguous a": 0.0, "contiguous c": 0.0, "derivative": 0.0}
    for _ in range(SPECIALFN_DRAWS):
        n = int(rng.integers(0, 9))
        sig, dlt = rng.uniform(-0.9, 6.0, size=2)
        t = rng.uniform(-0.99, 0.99)
        jp = specialfn.jacobi_p(n, sig, dlt, np.array([t]))[0]
        ref = (specialfn.pochhammer(sig + 1, n) / specialfn.pochhammer(1, n)).real * specialfn.gauss_2f1(
            -n, n + sig + dlt + 1, sig + 1, (1 - t) / 2
        )
        worst["jacobi connection"] = max(worst["jacobi connection"], _rel(jp - ref, max(1.0, abs(ref))))

        a, b = rng.uniform(-3.0, 6.0, size=2) + 1j * rng.uniform(-2.0, 2.0, size=2) * rng.integers(0, 2)
        c = rng.uniform(0.3, 7.0)
        z = rng.uniform(0.0, 0.95)
        F = lambda aa, bb, cc: complex(specialfn.gauss_2f1(aa, bb, cc, z))  # noqa: E731
        terms = [(c - a) * F(a - 1, b, c), (2 * a - c + (b - a) * z) * F(a, b, c), a * (z - 1) * F(a + 1, b, c)]
        worst["contiguous a"] = max(worst["contiguous a"], _rel(sum(terms), max(abs(v) for v in terms)))
        terms = [
            c * (c - 1) * (z - 1) * F(a, b, c - 1),
            c * (c - 1 - (2 * c - a - b - 1) * z) * F(a, b, c),
            (c - a) * (c - b) * z * F(a, b, c + 1),
        ]
        worst["contiguous c"] = max(worst["contiguous c"], _rel(sum(terms), max(abs(v) for v in terms)))
        d = complex(specialfn.gauss_2f1_dz(a, b, c, z))
        terms = [z * d, -a * F(a + 1, b, c), a * F(a, b, c)]
        worst["derivative"] = max(worst["derivative"], _rel(sum(terms), max(abs(v) for v in terms)))
    report = VerificationReport("special functions")
    for name, v in worst.items():
        report.add(name, v, tol, draws=SPECIALFN_DRAWS)
    return report


CHECKS: tuple[Check, ...] = (
    Check("c01-model-spectrum", "numerics", "1", check_model_spectrum),
    Check("c02-first-order-deletion", "first-order", "2", check_first_deletion),
    Check("c03-first-order-strict-iso", "first-order", "3", check_first_strict_iso),
    Check("c04-first-order-creation", "first-order", "4", check_first_creation),
    Check("c05-second-order-deletion", "second-order", "5", check_second_deletion),
    Check("c06-second-order-strict-iso", "second-order", "6", check_second_strict_iso),
    Check("c07-second-order-creation", "second-order", "7", check_second_creation),
    Check("c08-complex-case", "second-order", "8", check_complex),
    Check("c09a-first-order-identities", "first-order", "9", check_first_identities),
    Check("c09b-second-order-identities", "second-order", "9", check_second_identities),
    Check("c10-type-a", "typea", "10", check_typea),
    Check("c11-composition", "second-order", "11", check_composition),
    Check("c12-special-functions", "numerics", "12", check_special_functions),
)


def select(suite: str) -> list[Check]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    chosen = [c for c in CHECKS if suite == "all" or c.suite == suite]
    return sorted(chosen, key=lambda c: c.name)


def run(suite: str = "all", tol_scale: float = 1.0) -> list[VerificationReport]:
    return [c.run(tol_scale) for c in select(suite)]
