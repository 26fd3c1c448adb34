import numpy as np
import pytest

from gmewit.fidelity import (FidelityBoundQuery, closed_form_l0, fidelity_curve,
                             ghz_fidelity, numeric_l_eps)
from gmewit.linalg import expectation
from gmewit.measurement import ImprecisionBudget
from gmewit.states import ghz_state
from gmewit.witnesses import BUILDERS


def test_closed_form_l0():
    assert closed_form_l0("mermin4", 8.0) == pytest.approx(1.0)
    assert closed_form_l0("mermin4", 4.0) == pytest.approx(0.5)
    assert closed_form_l0("stabilizer4", 11.0) == pytest.approx(1.0)
    assert closed_form_l0("stabilizer4", 7.0) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        closed_form_l0("d3", 4.0)


def test_ghz_fidelity():
    psi = ghz_state(4, +1)
    assert ghz_fidelity(psi) == pytest.approx(1.0)
    rho = np.outer(psi, psi.conj())
    assert ghz_fidelity(rho) == pytest.approx(1.0)
    assert ghz_fidelity(ghz_state(4, -1)) == pytest.approx(0.0, abs=1e-12)


def test_query_rejects_out_of_range_value():
    with pytest.raises(ValueError):
        FidelityBoundQuery("mermin4", 9.5, ImprecisionBudget.ideal(4))


def test_ideal_l_eps_matches_closed_form():
    for witness in ("mermin4", "stabilizer4"):
        for w in (6.0, 7.4664, 10.0):
            try:
                query = FidelityBoundQuery(witness, w, ImprecisionBudget.ideal(4))
            except ValueError:
                continue
            assert numeric_l_eps(query) == pytest.approx(
                closed_form_l0(witness, w), abs=1e-6)


def test_l_eps_soundness_on_random_states():
    # The ideal bound is sound: every state's GHZ fidelity is at least the
    # bound computed from its own witness value.
    rng = np.random.default_rng(7)
    mat = BUILDERS["mermin4"]().matrix
    budget = ImprecisionBudget.ideal(4)
    for _ in range(20):
        v = rng.normal(size=16) + 1j * rng.normal(size=16)
        v /= np.linalg.norm(v)
        w = expectation(mat, v)
        bound = numeric_l_eps(FidelityBoundQuery("mermin4", w, budget))
        assert ghz_fidelity(v) >= bound - 1e-7


def test_l_eps_never_exceeds_l0():
    budget = ImprecisionBudget.uniform(0.002, 4)
    for w in (6.5, 7.0, 7.5):
        query = FidelityBoundQuery("mermin4", w, budget, tilt_restarts=2, seed=1)
        assert numeric_l_eps(query) <= closed_form_l0("mermin4", w) + 1e-6


def test_l_eps_small_eps_limit():
    # The correction is first order in the transverse coefficient 2√(ε(1−ε)),
    # so ε must be tiny for L_ε to sit within 1e−3 of L0.
    budget = ImprecisionBudget.uniform(1e-8, 4)
    query = FidelityBoundQuery("stabilizer4", 10.5, budget, tilt_restarts=2, seed=1)
    assert numeric_l_eps(query) == pytest.approx(
        closed_form_l0("stabilizer4", 10.5), abs=1e-3)


def test_numeric_l_eps_details():
    query = FidelityBoundQuery("mermin4", 7.0, ImprecisionBudget.ideal(4))
    res = numeric_l_eps(query, return_details=True)
    assert res.value == pytest.approx(closed_form_l0("mermin4", 7.0), abs=1e-6)
    assert res.witness_matrix.shape == (16, 16)


def test_fidelity_curve_shape():
    budget = ImprecisionBudget.ideal(4)
    rows = fidelity_curve("mermin4", budget, [0.8, 0.9], tilt_restarts=1)
    assert [r["w_fraction"] for r in rows] == [0.8, 0.9]
    for r in rows:
        assert r["L_eps"] == pytest.approx(r["L0"], abs=1e-6)
