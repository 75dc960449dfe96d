import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from pdm_isospec import intertwine1, jets, model, numspec
from pdm_isospec.errors import SeedHasNode
from pdm_isospec.hamiltonian import PDMHamiltonian, model_hamiltonian
from pdm_isospec.jets import Jet
from pdm_isospec.model import Modification, ModelParams
from pdm_isospec.numspec import Law, Normalizability

FIG1 = ModelParams(5, 0, 3)
ISO = ModelParams(3, 5, 4)
CREATE = ModelParams(2.8, 20, 4.4, alpha=1, beta=1)
X = np.linspace(-8, 8, 320)


def partner(params):
    return intertwine1.first_order_partner(model.seed(params))


def mp_partner_potential(a, b, c, x):
    """Independent route: mpmath 2F1 seed, mpmath derivatives, p = lam = 1."""
    with mpmath.workdps(30):
        def u(t):
            z = mpmath.exp(t) / (1 + mpmath.exp(t))
            return mpmath.exp(c * t / 2) * (1 + mpmath.exp(t)) ** (-(a + b + 1) / 2) * mpmath.hyp2f1(a, b, c, z)

        def m(t):
            return 1 / (4 * mpmath.cosh(t / 2) ** 2)

        x = mpmath.mpf(x)
        u0, u1, u2 = (mpmath.diff(u, x, k) for k in range(3))
        m0, m1, m2 = (mpmath.diff(m, x, k) for k in range(3))
        v = ((a + b - c) ** 2 - 1) / 4 * mpmath.exp(x) + c * (c - 2) / 4 * mpmath.exp(-x)
        vb = v - 2 * u2 / (m0 * u0) + 2 * u1**2 / (m0 * u0**2) + m1 * u1 / (m0**2 * u0) + m2 / (2 * m0**2) - 3 * m1**2 / (4 * m0**3)
        return float(vb)


def test_superpotential_vanishes_at_origin_for_ground_state():
    assert abs(partner(FIG1).superpotential_A(0.0)) < 1e-14


def test_constant_mass_reduces_to_ordinary_superpotential():
    sd = model.seed(ISO)

    def unit(x, order=0):
        return Jet.constant(1.0, order, np.size(x))

    h = PDMHamiltonian(unit, model_hamiltonian(ISO).potential)
    p = intertwine1.FirstOrderPartner(sd, float(sd.mu.real), Modification.STRICT_ISO, h)
    u = sd.jet(X, 1)
    np.testing.assert_allclose(p.superpotential_A(X), -u[1] / u[0], rtol=1e-14)


@pytest.mark.parametrize("params", [FIG1, ISO, CREATE])
def test_riccati(params):
    p = partner(params)
    assert np.max(p.riccati_residual(X)) < 1e-8
    assert np.max(p.riccati_derivative_residual(X)) < 1e-7


def test_deletion_closed_form():
    a, b, c = 5, 0, 3
    ex = np.exp(X)
    ref = (c * c - 1) / 4 / ex + (a + b - c) * (2 + a + b - c) / 4 * ex + (a + b) / 2
    np.testing.assert_allclose(partner(FIG1).partner_potential(X), ref, rtol=1e-12)
    assert partner(FIG1).partner_potential(0.0) == pytest.approx(6.5, abs=1e-12)


def test_shape_invariance():
    shifted = model.potential(ModelParams(6, 1, 4), X)
    np.testing.assert_allclose(partner(FIG1).partner_potential(X), shifted + 2.5, rtol=1e-12)


def test_strict_iso_closed_form():
    ex = np.exp(X)
    ref = 15 / 4 / ex + 2 * ex + (4 + ex - 3 * ex**2) / (4 + 3 * ex) ** 2
    np.testing.assert_allclose(partner(ISO).partner_potential(X), ref, rtol=1e-12)


@given(st.floats(0.5, 6), st.floats(-0.5, 6), st.floats(1.2, 5), st.floats(-4, 4))
def test_partner_potential_vs_independent_route(a, b, c, x):
    params = ModelParams(a, b, c)
    sd = model.seed(params)
    assume(not sd.nodes(window=(-6, 6), samples=241))
    assume(sd.right_asymptote is not model.Asymptote.BOUNDED_NONZERO)
    p = intertwine1.FirstOrderPartner(sd, float(sd.mu.real), Modification.STRICT_ISO, model_hamiltonian(params))
    ref = mp_partner_potential(a, b, c, x)
    scale = max(1.0, abs(ref), abs(float(model.potential(params, x))))
    assert abs(p.partner_potential(x) - ref) <= 1e-8 * scale


def test_L_annihilates_seed():
    p = partner(ISO)
    lu = p.apply_L(p.seed)(X, 0).value
    assert np.max(np.abs(lu)) <= 1e-12 * np.max(np.abs(p.seed.derivative(X)) / np.sqrt(model.mass(ISO, X)))


def test_mapped_states_match_shifted_family():
    p = partner(FIG1)
    for n in range(3):
        mapped = p.apply_L(model.bound_state(FIG1, n + 1))(X, 0).value
        ref = model.bound_state(ModelParams(6, 1, 4), n)(X)
        mapped /= math.sqrt(numspec.quad(lambda t: p.apply_L(model.bound_state(FIG1, n + 1))(t, 0).value ** 2, -30, 30).value)
        sign = np.sign(mapped[160] * ref[160])
        np.testing.assert_allclose(sign * mapped, ref, atol=1e-8)


@pytest.mark.parametrize("params", [FIG1, ISO, CREATE])
def test_intertwining_of_bound_states(params):
    p = partner(params)
    start = 1 if p.modification is Modification.DELETE_GROUND else 0
    for n in range(start, 5):
        psi = model.bound_state(params, n)
        assert p.intertwining_residual(psi, psi.energy, X) < 1e-6


def bump(x, order=0):
    t = Jet.variable(x, order)
    return jets.exp(-(t * t))


@pytest.mark.parametrize("params", [FIG1, ISO, CREATE])
def test_factorization(params):
    p = partner(params)
    tests = {"bump": bump, "psi0": model.bound_state(params, 0)}
    report = p.factorization_residuals(tests, X, tol=1e-6)
    assert report.passed, report.summary()
    assert p.operator_intertwining_residual(bump, X) < 1e-6


@pytest.mark.parametrize("params", [FIG1, ISO, CREATE])
def test_adjoint_kills_missing_state(params):
    assert partner(params).adjoint_kernel_residual(X) < 1e-8


def test_missing_state_normalizability():
    assert partner(FIG1).missing_state_normalizability()[0] is Normalizability.DIVERGENT
    assert partner(ISO).missing_state_normalizability()[0] is Normalizability.DIVERGENT
    assert partner(CREATE).missing_state_normalizability()[0] is Normalizability.NORMALIZABLE


def test_coefficient_equations():
    p = partner(CREATE)
    for name, r in p.coefficient_residuals(X).items():
        assert np.max(r) < 1e-8, name


def test_laws_and_predicted_spectra():
    assert partner(FIG1).law == (Law.SHIFT_BY_ONE, ())
    assert partner(ISO).law == (Law.EQUAL, ())
    law, ins = partner(CREATE).law
    assert law is Law.INSERT_ONE and ins[0] == pytest.approx(-13.32)
    np.testing.assert_allclose(partner(FIG1).partner_spectrum(3), [10.5, 18.5, 28.5])
    np.testing.assert_allclose(partner(CREATE).partner_spectrum(3), [-13.32, 42.68, 66.48], rtol=1e-12)


def test_pole_free_on_window():
    x = np.linspace(-20, 20, 4001)
    for params in (FIG1, ISO, CREATE):
        assert np.all(np.isfinite(partner(params).partner_potential(x)))


def test_node_rejected():
    sd = model.seed(ModelParams(2.8, 20, 4.4, alpha=1, beta=1, nu=7.2))
    assert len(sd.nodes()) == 1
    assert model.classify_modification(sd) is Modification.INVALID
    with pytest.raises(SeedHasNode):
        intertwine1.first_order_partner(sd)


def test_chained_deletion_equals_double_shape_invariance():
    first = partner(FIG1)
    psi1 = model.bound_state(FIG1, 1)
    chain = intertwine1.chained_partner(first, first.apply_L(psi1), psi1.energy)
    shifted = model.potential(ModelParams(7, 2, 5), X) + 2.5 + 3.5
    np.testing.assert_allclose(chain.partner_potential(X), shifted, rtol=1e-9)
