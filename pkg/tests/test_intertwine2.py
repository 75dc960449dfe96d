import functools

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pdm_isospec import intertwine1, intertwine2, jets, model, presets
from pdm_isospec.errors import EqualFactorizationEnergies, NonRealEta
from pdm_isospec.intertwine2 import Case, Modification2
from pdm_isospec.jets import Jet
from pdm_isospec.model import ModelParams
from pdm_isospec.numspec import Law, Normalizability

X = np.linspace(-8, 8, 320)
WIDE = np.linspace(-30, 30, 601)


@pytest.fixture(scope="module")
def fig4():
    return presets.get("fig4").second_order()


@pytest.fixture(scope="module")
def fig5():
    return presets.get("fig5").second_order()


@pytest.fixture(scope="module")
def fig6():
    return presets.get("fig6").second_order()


@pytest.fixture(scope="module")
def fig7():
    return presets.get("fig7").second_order()


def mp_vbar2(p1, p2, x):
    """Independent route with mpmath seeds and derivatives (p = lam = 1)."""
    with mpmath.workdps(25):
        def seed(params):
            a, b = (complex(v) for v in params.shifted_ab)
            c = complex(params.c)
            alpha, beta = complex(params.alpha), complex(params.beta)

            def u(t):
                z = mpmath.exp(t) / (1 + mpmath.exp(t))
                w = 1 / (1 + mpmath.exp(t))
                out = alpha * z ** (c / 2) * w ** ((a + b + 1 - c) / 2) * mpmath.hyp2f1(a, b, c, z)
                if beta:
                    out += beta * z ** (1 - c / 2) * w ** ((a + b + 1 - c) / 2) * mpmath.hyp2f1(a - c + 1, b - c + 1, 2 - c, z)
                return out

            return u

        u1, u2 = seed(p1), seed(p2)

        def w(t):
            return u1(t) * mpmath.diff(u2, t) - mpmath.diff(u1, t) * u2(t)

        def m(t):
            return 1 / (4 * mpmath.cosh(t / 2) ** 2)

        def eta(t):
            return -mpmath.diff(w, t) / (m(t) * w(t))

        x = mpmath.mpf(x)
        a, b, c = (complex(v) for v in (p1.a, p1.b, p1.c))
        v = ((a + b - c) ** 2 - 1) / 4 * mpmath.exp(x) + c * (c - 2) / 4 * mpmath.exp(-x)
        m0, m1, m2 = (mpmath.diff(m, x, k) for k in range(3))
        e0, e1 = eta(x), mpmath.diff(eta, x)
        return complex(v + 2 * e1 + m1 / m0 * e0 - 3 * m1**2 / m0**3 + 2 * m2 / m0**2)


def test_deletion_closed_form(fig4):
    a, b, c = 5.0, 0.0, 3.0
    ref = ((c * c - 2 * c * (a + b + 2) + (a + b + 1) * (a + b + 3)) * np.exp(X) + c * (c + 2) * np.exp(-X) + 4 * (a + b + 1)) / 4
    np.testing.assert_allclose(fig4.partner_potential2(X), ref, rtol=1e-9)
    assert fig4.partner_potential2(0.0) == pytest.approx(13.5, abs=1e-10)


def test_deletion_is_double_shape_invariance(fig4):
    ref = model.potential(ModelParams(7, 2, 5), X) + 6.0
    np.testing.assert_allclose(fig4.partner_potential2(X), ref, rtol=1e-9)


def test_eta_vanishes_at_origin_for_deletion(fig4):
    assert abs(fig4.eta(0.0)) < 1e-12


def test_strict_iso_closed_form(fig5):
    ref = 1 + 0.75 * (9 * np.cosh(X) - 7 * np.sinh(X))
    np.testing.assert_allclose(fig5.partner_potential2(X), ref, rtol=1e-9)


def test_deletion_wronskian_shape(fig4):
    # W / [e^{(c+1)x} (1+e^x)^{-(a+b+3)}] is constant for a=5, b=0, c=3
    w = fig4.wronskian_direct_jet(X, 0).value.real
    ratio = w / (np.exp(4 * X) * (1 + np.exp(X)) ** -8)
    np.testing.assert_allclose(ratio, ratio[0], rtol=1e-9)


@pytest.mark.parametrize("fig", ["fig5", "fig6"])
@pytest.mark.parametrize("x", [-3.1, -0.4, 1.7])
def test_partner_potential_vs_independent_route(fig, x):
    p = presets.get(fig).second_order()
    ref = mp_vbar2(p.seed1.params, p.seed2.params, x)
    assert abs(p.partner_potential2(x) - ref.real) <= 1e-8 * max(1.0, abs(ref))


@pytest.mark.parametrize("x", [-2.5, 0.3])
def test_complex_partner_vs_independent_route(fig7, x):
    ref = mp_vbar2(fig7.seed1.params, fig7.seed2.params, x)
    assert abs(ref.imag) <= 1e-20 * max(1.0, abs(ref)) or abs(ref.imag) < 1e-12
    assert abs(fig7.partner_potential2(x) - ref.real) <= 1e-8 * max(1.0, abs(ref))


@pytest.mark.parametrize("fig", ["fig4", "fig5", "fig6", "fig7"])
def test_abel_identity_across_continuation(fig):
    p = presets.get(fig).second_order()
    g = p.g_jet(WIDE, 1)
    u1, u2 = p.seed1.jet(WIDE, 0).value, p.seed2.jet(WIDE, 0).value
    rhs = (p.mu1 - p.mu2) * u1 * u2
    ok = np.isfinite(rhs) & (np.abs(rhs) < 1e300) & (np.abs(rhs) > 1e-300)
    err = np.abs(g.d().value - rhs)[ok] / np.abs(rhs[ok])
    assert np.max(err) < 1e-8


@pytest.mark.parametrize("fig", ["fig4", "fig5", "fig6"])
def test_continued_wronskian_matches_direct_in_core(fig):
    p = presets.get(fig).second_order()
    x = np.linspace(-9.5, 9.5, 77)
    direct = p.wronskian_direct_jet(x, 0).value
    np.testing.assert_allclose(p.wronskian(x), direct, rtol=1e-9)


def test_swapping_seeds_keeps_partner(fig5):
    swapped = intertwine2.second_order_partner(fig5.seed2, fig5.seed1)
    np.testing.assert_allclose(swapped.wronskian(X), -fig5.wronskian(X), rtol=1e-12)
    np.testing.assert_allclose(swapped.partner_potential2(X), fig5.partner_potential2(X), rtol=1e-11)


def test_classifications(fig4, fig5, fig6, fig7):
    assert fig4.modification is Modification2.DELETE_TWO
    assert fig5.modification is Modification2.STRICT_ISO
    assert fig6.modification is Modification2.CREATE_TWO
    assert fig7.modification is Modification2.STRICT_ISO
    assert fig7.case is Case.COMPLEX_CONJUGATE


def test_laws(fig4, fig5, fig6, fig7):
    assert fig4.law == (Law.SHIFT_BY_TWO, ())
    assert fig5.law == (Law.EQUAL, ())
    law, ins = fig6.law
    assert law is Law.INSERT_TWO
    np.testing.assert_allclose(sorted(ins), [-85.32, -13.32], rtol=1e-12)
    np.testing.assert_allclose(fig4.partner_spectrum(3), [18.5, 28.5, 40.5])
    np.testing.assert_allclose(fig6.partner_spectrum(4), [-85.32, -13.32, 42.68, 66.48], rtol=1e-12)
    np.testing.assert_allclose(fig7.partner_spectrum(3), model.energies(presets.get("fig7").params, 3))


def test_second_creation_seed_has_one_node(fig6):
    assert len(fig6.seed2.nodes()) == 1
    assert not fig6.seed1.nodes()


def test_alternative_shift_gives_same_creation():
    a = presets.get("fig6").second_order(presets.FIG6_NU)
    b = presets.get("fig6").second_order(presets.FIG6_NU_ALT)
    assert a.mu2 == pytest.approx(b.mu2, abs=1e-12)
    np.testing.assert_allclose(a.partner_potential2(X), b.partner_potential2(X), rtol=1e-12)


def test_zero_modes(fig4, fig6):
    assert [v for _, v, _ in fig4.zero_modes()] == [Normalizability.DIVERGENT] * 2
    assert [v for _, v, _ in fig6.zero_modes()] == [Normalizability.NORMALIZABLE] * 2
    for name, r in fig6.zero_mode_residuals(X).items():
        assert r < 1e-6, name


def test_ansatz_and_derived_equations(fig4, fig5, fig6, fig7):
    for p in (fig4, fig5, fig6, fig7):
        assert np.max(p.ansatz_residual(X)) < 1e-8
        assert np.max(p.ansatz_residual(X, swapped=True)) < 1e-8
        assert np.max(p.tau_bracket_residual(X, 1)) < 1e-8
        assert np.max(p.gamma_consistency_residual(X)) < 1e-8
        assert np.max(p.first_order_coefficient_residual(X)) < 1e-8
        assert np.max(p.third_order_eta_residual(X)) < 1e-8
        assert np.max(p.integrated_invariant_residual(X)) < 1e-8


def test_eta_from_log_derivatives(fig5):
    np.testing.assert_allclose(fig5.eta_from_log_derivatives(X), fig5.eta(X), rtol=1e-9, atol=1e-12)


def test_kernel_and_intertwining(fig5):
    assert fig5.kernel_residual(1, X) < 1e-8
    assert fig5.kernel_residual(2, X) < 1e-8
    for n in range(4):
        psi = model.bound_state(presets.get("fig5").params, n)
        assert fig5.intertwining_residual(psi, psi.energy, X) < 1e-6


def _bump(center, width):
    def f(x, order=0):
        t = (Jet.variable(x, order) - center) * (1.0 / width)
        return jets.exp(-(t * t))

    return f


@functools.lru_cache(maxsize=None)
def _fig5_partner():
    return presets.get("fig5").second_order()


@given(st.floats(-3, 3), st.floats(0.4, 2), st.floats(-3, 3), st.floats(-3, 3))
def test_L2_is_linear(center, width, ca, cb):
    p = _fig5_partner()
    f, g = _bump(center, width), _bump(-center, width * 1.3)

    def combo(x, order=0):
        return ca * f(x, order) + cb * g(x, order)

    lhs = p.apply_L2(combo)(X, 0).value
    rhs = ca * p.apply_L2(f)(X, 0).value + cb * p.apply_L2(g)(X, 0).value
    assert np.max(np.abs(lhs - rhs)) <= 1e-9 * max(1.0, np.max(np.abs(rhs)))


@pytest.mark.parametrize("center", [-2.0, 0.5, 1.7])
def test_operator_intertwining(fig4, fig6, fig7, center):
    for p in (fig4, fig6, fig7):
        assert p.operator_intertwining_residual(_bump(center, 1.0), X) < 1e-6


def test_complex_case_structure(fig7):
    w = fig7.wronskian(X)
    assert np.all(np.real(w) == 0)
    assert presets.get("fig7").max_imag_vbar() == 0.0
    assert fig7.monotone_w_residual(X) < 1e-10
    assert np.all(np.diff(fig7.monotone_w(X)) > 0)


def test_fig7_factorization_energies(fig7):
    assert {complex(fig7.mu1), complex(fig7.mu2)} == {-51.25 - 9.5j, -51.25 + 9.5j}


def test_broken_conjugation_is_detected(fig7):
    off = model.seed(fig7.seed1.params.conjugate().replace(nu=fig7.seed1.params.nu + 1e-3))
    p = intertwine2.SecondOrderPartner(fig7.seed1, off, fig7.mu1, off.mu, Case.COMPLEX_CONJUGATE, fig7.hamiltonian)
    with pytest.raises(NonRealEta):
        p.eta_jet(X, 0)
    vbar = p.partner_potential_jet(X, 0, keep_complex=True).value
    assert np.max(np.abs(np.imag(vbar))) > 1e-6


def test_equal_energies_rejected():
    sd = model.seed(ModelParams(3, 5, 4))
    with pytest.raises(EqualFactorizationEnergies):
        intertwine2.second_order_partner(sd, sd)


def test_single_real_seed_rejected():
    with pytest.raises(ValueError):
        intertwine2.second_order_partner(model.seed(ModelParams(3, 5, 4)))


def test_composition_of_two_deletions(fig4):
    pre = presets.get("fig4")
    fp = pre.first_order()
    psi1 = model.bound_state(pre.params, 1)
    chained = intertwine1.chained_partner(fp, fp.apply_L(psi1), psi1.energy)
    x = np.linspace(-10, 10, 401)
    np.testing.assert_allclose(chained.partner_potential(x), fig4.partner_potential2(x), rtol=1e-9)
