import itertools

import numpy as np
import pytest

from gmewit import fixture_path
from gmewit.linalg import PAULI, expectation, pauli_string
from gmewit.measurement import ImprecisionBudget
from gmewit.states import cluster_state_4, ghz_state, w_state
from gmewit.witnesses import (BUILDERS, CorrelatorRecord, born_probabilities,
                              cluster_witness_c4, eval_from_correlators,
                              inm_value, load_correlator_fixture,
                              mermin_recursive, mermin_terms, mermin_witness,
                              stabilizer_terms, stabilizer_witness,
                              w_witness_d3)


def test_mermin_terms_structure():
    for n in (3, 4, 5):
        terms = mermin_terms(n)
        assert len(terms) == 2 ** (n - 1)
        for sign, letters in terms:
            y = letters.count("Y")
            assert y % 2 == 0
            assert sign == (-1) ** (y // 2)
            assert set(letters) <= {"X", "Y"}


def test_mermin_ghz_value():
    for n in (3, 4, 5, 6):
        spec = mermin_witness(n)
        assert expectation(spec.matrix, ghz_state(n, +1)) == pytest.approx(
            2 ** (n - 1), abs=1e-9)


def test_mermin_recursion_matches_assembly():
    for n in (2, 3, 4, 5, 6):
        pairs = [(PAULI["X"], PAULI["Y"])] * n
        m, _ = mermin_recursive(n, pairs)
        if n >= 2:
            direct = sum(s * pauli_string(letters) for s, letters in mermin_terms(n))
            assert np.max(np.abs(m - direct)) <= 1e-12


def test_mermin_split_identity():
    # M4 = M2⊗M2 − N2⊗N2 for any observables.
    rng = np.random.default_rng(3)

    def rand_obs():
        v = rng.normal(size=3)
        v /= np.linalg.norm(v)
        return v[0] * PAULI["X"] + v[1] * PAULI["Y"] + v[2] * PAULI["Z"]

    pairs = [(rand_obs(), rand_obs()) for _ in range(4)]
    m4, _ = mermin_recursive(4, pairs)
    m2a, n2a = mermin_recursive(2, pairs[:2])
    m2b, n2b = mermin_recursive(2, pairs[2:])
    split = np.kron(m2a, m2b) - np.kron(n2a, n2b)
    assert np.max(np.abs(m4 - split)) <= 1e-12


def test_mermin_recursive_validation():
    with pytest.raises(ValueError):
        mermin_recursive(3, [(PAULI["X"], PAULI["Y"])] * 2)
    with pytest.raises(ValueError):
        mermin_recursive(1, [(2 * PAULI["X"], PAULI["Y"])])


def test_stabilizer_terms_and_ghz_value():
    for n in (3, 4):
        terms = stabilizer_terms(n)
        assert len(terms) == 1 + 2 ** (n - 1)
        spec = stabilizer_witness(n)
        assert expectation(spec.matrix, ghz_state(n, +1)) == pytest.approx(
            3 * 2 ** (n - 2) - 1, abs=1e-9)


def test_stabilizer4_z_strings():
    letters = {t[1] for t in stabilizer_terms(4)}
    assert letters == {"XXXX", "IIII", "ZZII", "IZZI", "IIZZ",
                       "ZIZI", "IZIZ", "ZIIZ", "ZZZZ"}


def test_w_and_cluster_witness_target_values():
    assert expectation(w_witness_d3().matrix, w_state()) == pytest.approx(4.0, abs=1e-10)
    assert expectation(cluster_witness_c4().matrix, cluster_state_4()) == pytest.approx(
        6.0, abs=1e-10)


def test_tilted_witness_ideal_limit():
    for name, builder in BUILDERS.items():
        ideal = builder()
        zero = builder(ImprecisionBudget.ideal(ideal.n))
        assert np.max(np.abs(ideal.matrix - zero.matrix)) <= 1e-12


def test_tilted_witness_is_hermitian():
    budget = ImprecisionBudget.uniform(0.03, 4)
    spec = stabilizer_witness(4, budget)
    assert np.max(np.abs(spec.matrix - spec.matrix.conj().T)) <= 1e-12


def test_correlator_record_validation():
    with pytest.raises(ValueError):
        CorrelatorRecord("XXXX", 1.5, 0.01)
    with pytest.raises(ValueError):
        CorrelatorRecord("XXXX", 0.5, -0.01)
    CorrelatorRecord("XXXX", 1.01, 0.01)  # within 3σ of the physical range


def test_eval_from_correlators_born_consistency():
    # Records built from exact GHZ correlators reproduce the matrix expectation.
    spec = stabilizer_witness(4)
    psi = ghz_state(4, +1)
    records = [CorrelatorRecord(letters, expectation(pauli_string(letters), psi), 0.0)
               for _, letters in spec.terms if letters != "IIII"]
    value, std = eval_from_correlators(spec, records)
    assert value == pytest.approx(expectation(spec.matrix, psi), abs=1e-9)
    assert std == 0.0


def test_eval_from_correlators_errors():
    spec = mermin_witness(3)
    records = [CorrelatorRecord(letters, 0.9, 0.01) for _, letters in spec.terms]
    with pytest.raises(ValueError):
        eval_from_correlators(spec, records[:-1])
    with pytest.raises(ValueError):
        eval_from_correlators(spec, records + [records[0]])


def test_fixture_evaluation():
    name, records = load_correlator_fixture(fixture_path("fig4_mermin.json"))
    value, std = eval_from_correlators(BUILDERS[name](), records)
    assert value == pytest.approx(7.4664, abs=1e-4)
    assert std == pytest.approx(0.0204, abs=1e-3)
    name, records = load_correlator_fixture(fixture_path("fig4_stabilizer.json"))
    value, std = eval_from_correlators(BUILDERS[name](), records)
    assert value == pytest.approx(10.5168, abs=1e-4)
    assert std == pytest.approx(0.0412, abs=1e-3)


def test_inm_deterministic_strategy():
    # All-outputs-0 strategy: every correlator is +1; compare against a direct
    # enumeration oracle over all (s, r).
    n, m = 4, 2
    table = np.zeros((m,) * n + (2,) * n)
    table[..., 0, 0, 0, 0] = 1.0
    value = inm_value(n, m, table)
    oracle = 0.0
    for svec in itertools.product(range(m), repeat=n):
        s = sum(svec)
        if s % m == 0:
            oracle += (-1) ** (s // m)
        elif s % m == 1:
            oracle += (-1) ** ((s - 1) // m)
    assert value == pytest.approx(oracle, abs=1e-12)
    assert value == pytest.approx(-4.0, abs=1e-12)


def test_inm_i42_matches_mermin_on_ghz():
    settings = [[PAULI["X"], PAULI["Y"]]] * 4
    table = born_probabilities(ghz_state(4, +1), settings)
    assert inm_value(4, 2, table) == pytest.approx(8.0, abs=1e-9)


def test_inm_validation():
    with pytest.raises(ValueError):
        inm_value(2, 2, np.zeros((2, 2, 2)))       # wrong shape
    bad = np.full((2, 2, 2, 2), 0.3)               # not normalized
    with pytest.raises(ValueError):
        inm_value(2, 2, bad)
