import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from pdm_isospec import intertwine1, model, presets, typea
from pdm_isospec.errors import NonMonotoneZ, SeedHasNode
from pdm_isospec.hamiltonian import model_hamiltonian
from pdm_isospec.model import ModelParams

X = np.linspace(-5, 5, 201)


@pytest.mark.parametrize("fig", ["fig1", "fig2", "fig3"])
def test_one_fold_matches_first_order(fig):
    sd = model.seed(presets.get(fig).params)
    assert typea.first_order_equivalence(sd, X) < 1e-12


@pytest.mark.parametrize("fig", ["fig1", "fig2", "fig3"])
def test_one_fold_superpotential_relation(fig):
    params = presets.get(fig).params
    fp = intertwine1.first_order_partner(model.seed(params))
    m = model.mass_jet(params, X, 1)
    w = typea.superpotential_W_from_seed(fp.seed, X)
    ref = np.sqrt(m.value) * fp.superpotential_A(X) + m[1] / (4 * m.value)
    np.testing.assert_allclose(w, ref, rtol=1e-12, atol=1e-12)


@given(st.floats(0.5, 6), st.floats(-0.5, 6), st.floats(1.2, 5), st.floats(-2, 2))
def test_one_fold_equivalence_random_seeds(a, b, c, nu):
    sd = model.seed(ModelParams(a, b, c, nu=nu))
    try:
        gap = typea.first_order_equivalence(sd, X)
    except SeedHasNode:
        return
    assert gap < 1e-10


@pytest.mark.parametrize("fig", ["fig4", "fig5", "fig6", "fig7"])
def test_two_fold_matches_second_order(fig):
    gaps = typea.second_order_equivalence(presets.get(fig).second_order(), X)
    assert gaps["eta"] < 1e-8
    assert gaps["delta_v"] < 1e-8


def test_bz_linear_with_energy_gap_slope():
    p = presets.get("fig4").second_order()
    report = typea.bz_linearity(typea.pair_from_partner(p), X)
    assert report.passed, report.summary()
    assert report.info["slope"] == pytest.approx(-6.0, rel=1e-9)
    assert abs(report.info["intercept"]) < 1e-9


def test_swapped_pair_flips_slope():
    p = presets.get("fig5").second_order()
    one = typea.bz_linearity(typea.pair_from_seeds(p.seed1, p.seed2), X)
    two = typea.bz_linearity(typea.pair_from_seeds(p.seed2, p.seed1), X)
    assert one.passed and two.passed
    assert one.info["slope"] == pytest.approx(-two.info["slope"], rel=1e-9)
    assert one.info["slope"] == pytest.approx((p.mu1 - p.mu2).real, rel=1e-9)


@given(st.floats(0.3, 2.5))
def test_bz_linearity_random_pairs(nu):
    params = ModelParams(3, 5, 4)
    s1, s2 = model.seed(params), model.seed(params.replace(nu=nu))
    # nu -> 2 is the confluent limit (mu is symmetric about nu = 1)
    assume(abs(s1.mu - s2.mu) > 0.1)
    pair = typea.pair_from_seeds(s1, s2)
    try:
        report = typea.bz_linearity(pair, X)
    except NonMonotoneZ:
        assume(False)
    assert report.passed, report.summary()


def test_nonmonotone_z_rejected():
    params = ModelParams(5, 0, 3)
    psi0, psi2 = model.bound_state(params, 0), model.bound_state(params, 2)
    pair = typea.TwoFoldPair(psi0.jet, psi2.jet, psi0.energy, psi2.energy, model_hamiltonian(params))
    with pytest.raises(NonMonotoneZ):
        typea.bz_linearity(pair, X)


def test_node_in_first_solution_rejected():
    params = ModelParams(5, 0, 3)
    psi0, psi1 = model.bound_state(params, 0), model.bound_state(params, 1)
    pair = typea.TwoFoldPair(psi1.jet, psi0.jet, psi1.energy, psi0.energy, model_hamiltonian(params))
    with pytest.raises(SeedHasNode):
        pair.z(np.array([0.0]))
