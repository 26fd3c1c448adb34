"""Witness operators: Mermin, GHZ-stabilizer, W-state D3, cluster C4 — in
ideal and tilted form — plus evaluation on states, correlator records and
I_nm probability tables."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .linalg import I2, herm_eig, kron
from .measurement import ImprecisionBudget, tilted_observable
from .tolerances import tol

#: In-plane tilt partner for each witness family.
TILT_PLANES = {
    "mermin": {"X": "Y", "Y": "X"},
    "stabilizer": {"X": "Z", "Z": "X"},
    "wstate": {"X": "Y", "Y": "X"},
    "cluster": {"X": "Z", "Z": "X"},
}


@dataclass(frozen=True)
class WitnessSpec:
    """A witness as coefficient-weighted Pauli-letter terms plus its matrix."""

    name: str
    n: int
    terms: tuple          # ((coefficient, letters), ...)
    constant_offset: float
    matrix: np.ndarray

    def __post_init__(self):
        for _, letters in self.terms:
            if len(letters) != self.n:
                raise ValueError("term letter string has wrong length")


@dataclass(frozen=True)
class CorrelatorRecord:
    """A measured joint expectation value with its standard error."""

    letters: str
    value: float
    std: float

    def __post_init__(self):
        if self.std < 0:
            raise ValueError("std must be non-negative")
        if abs(self.value) > 1 + 3 * self.std:
            raise ValueError("correlator value outside the physical range")


# ---------------------------------------------------------------------------
# Assembly helpers
# ---------------------------------------------------------------------------

def observable_table(family: str, n: int, budget: ImprecisionBudget | None):
    """Per-party letter → 2×2 observable map for a witness family.

    With a budget, each letter is replaced by its tilted observable with the
    in-plane partner of the family (ε = 0 reproduces the exact Pauli).
    """
    plane = TILT_PLANES[family]
    table = []
    for party in range(n):
        row = {"I": I2}
        for letter, partner in plane.items():
            eps = 0.0 if budget is None else budget.eps(party, letter)
            row[letter] = tilted_observable(letter, partner, eps).matrix
        table.append(row)
    return table


def assemble(terms, constant_offset: float, obs_table) -> np.ndarray:
    n = len(obs_table)
    dim = 2 ** n
    mat = constant_offset * np.eye(dim, dtype=complex)
    for coeff, letters in terms:
        mat += coeff * kron(*(obs_table[p][c] for p, c in enumerate(letters)))
    return mat


def _make_spec(name, family, n, terms, offset, budget) -> WitnessSpec:
    table = observable_table(family, n, budget)
    return WitnessSpec(name, n, tuple(terms), offset, assemble(terms, offset, table))


# ---------------------------------------------------------------------------
# Mermin witness
# ---------------------------------------------------------------------------

def mermin_terms(n: int):
    """The 2^{n−1} X/Y strings of the Mermin operator with their signs.

    Terms carry an even number of Y letters and sign (−1)^{#Y/2}; the order
    lists the all-X string first, then increasing Y-weight.
    """
    terms = []
    for y_count in range(0, n + 1, 2):
        sign = (-1) ** (y_count // 2)
        for positions in itertools.combinations(range(n), y_count):
            letters = "".join("Y" if p in positions else "X" for p in range(n))
            terms.append((float(sign), letters))
    return terms


def mermin_witness(n: int, budget: ImprecisionBudget | None = None) -> WitnessSpec:
    if n < 2:
        raise ValueError("n must be at least 2")
    return _make_spec(f"mermin{n}", "mermin", n, mermin_terms(n), 0.0, budget)


def mermin_recursive(n: int, observables) -> tuple[np.ndarray, np.ndarray]:
    """Recursive Mermin pair: M_k = M_{k−1}⊗A₀ − N_{k−1}⊗A₁ and
    N_k = M_{k−1}⊗A₁ + N_{k−1}⊗A₀.

    ``observables`` is a per-party list of (A₀, A₁) 2×2 Hermitian pairs;
    with A₀ = X, A₁ = Y the first output equals the Eq.-style assembly.
    """
    if len(observables) != n:
        raise ValueError("need one (A0, A1) pair per party")
    for a0, a1 in observables:
        for obs in (a0, a1):
            evs = np.linalg.eigvalsh(obs)
            if evs.min() < -1 - 1e-9 or evs.max() > 1 + 1e-9:
                raise ValueError("observable eigenvalues must lie in [−1, 1]")
    m, nn = observables[0]
    for a0, a1 in observables[1:]:
        m, nn = np.kron(m, a0) - np.kron(nn, a1), np.kron(m, a1) + np.kron(nn, a0)
    return m, nn


# ---------------------------------------------------------------------------
# GHZ stabilizer witness
# ---------------------------------------------------------------------------

def stabilizer_terms(n: int):
    """Terms of 2^{n−2}·∏X + Σ_{edge subsets} ∏ZZ (expansion of ∏(ZZ+𝟙)).

    Each subset of the chain edges contributes a Z-string with letters set by
    incidence parity; the empty subset yields the identity string whose +1
    cancels against the −1 constant offset.
    """
    terms = [(float(2 ** (n - 2)), "X" * n)]
    edges = [(j, j + 1) for j in range(n - 1)]
    for r in range(len(edges) + 1):
        for subset in itertools.combinations(edges, r):
            incidence = [0] * n
            for a, b in subset:
                incidence[a] += 1
                incidence[b] += 1
            letters = "".join("Z" if c % 2 else "I" for c in incidence)
            terms.append((1.0, letters))
    return terms


def stabilizer_witness(n: int, budget: ImprecisionBudget | None = None) -> WitnessSpec:
    if n < 3:
        raise ValueError("n must be at least 3")
    return _make_spec(f"stabilizer{n}", "stabilizer", n, stabilizer_terms(n), -1.0, budget)


# ---------------------------------------------------------------------------
# W-state and cluster witnesses
# ---------------------------------------------------------------------------

D3_TERMS = tuple((1.0, s) for s in ("XXI", "XIX", "IXX", "YYI", "YIY", "IYY"))
C4_TERMS = tuple((1.0, s) for s in ("XZII", "XIXZ", "IZXZ", "ZXZI", "IIZX", "ZXIX"))


def w_witness_d3(budget: ImprecisionBudget | None = None) -> WitnessSpec:
    return _make_spec("d3", "wstate", 3, D3_TERMS, 0.0, budget)


def cluster_witness_c4(budget: ImprecisionBudget | None = None) -> WitnessSpec:
    return _make_spec("c4", "cluster", 4, C4_TERMS, 0.0, budget)


BUILDERS = {
    "mermin4": lambda budget=None: mermin_witness(4, budget),
    "mermin3": lambda budget=None: mermin_witness(3, budget),
    "stabilizer4": lambda budget=None: stabilizer_witness(4, budget),
    "stabilizer3": lambda budget=None: stabilizer_witness(3, budget),
    "d3": w_witness_d3,
    "c4": cluster_witness_c4,
}


# ---------------------------------------------------------------------------
# Evaluation on measured correlators
# ---------------------------------------------------------------------------

def eval_from_correlators(spec: WitnessSpec, records) -> tuple[float, float]:
    """Witness value and propagated error from correlator records.

    Each non-identity term must be matched by exactly one record with the
    same letter string; errors combine as uncorrelated Gaussians.
    """
    by_letters = {}
    for rec in records:
        if rec.letters in by_letters:
            raise ValueError(f"duplicate record for {rec.letters}")
        by_letters[rec.letters] = rec
    value = spec.constant_offset
    var = 0.0
    identity = "I" * spec.n
    for coeff, letters in spec.terms:
        if letters == identity:
            value += coeff
            continue
        rec = by_letters.get(letters)
        if rec is None:
            raise ValueError(f"missing record for term {letters}")
        value += coeff * rec.value
        var += coeff ** 2 * rec.std ** 2
    return float(value), float(np.sqrt(var))


def load_correlator_fixture(path) -> tuple[str, list[CorrelatorRecord]]:
    """Load a correlator fixture JSON: witness name plus its records."""
    with open(path) as fh:
        data = json.load(fh)
    records = [CorrelatorRecord(r["letters"], float(r["value"]), float(r["std"]))
               for r in data["records"]]
    return data["witness"], records


# ---------------------------------------------------------------------------
# I_nm multi-setting correlator functional
# ---------------------------------------------------------------------------

def inm_value(n: int, m: int, probabilities: np.ndarray) -> float:
    """The I_nm functional on a conditional probability table P(r⃗|s⃗).

    ``probabilities`` has shape (m,)*n + (2,)*n.  The symmetrized correlator
    E_s sums Σ_r (−1)^{|r|} P(r⃗|s⃗) over all input vectors with Σs_j = s;
    the functional adds residue-class s ≡ 0 (mod m) terms with sign
    (−1)^{s/m} and s ≡ 1 terms with sign (−1)^{(s−1)/m}.
    """
    probabilities = np.asarray(probabilities, dtype=float)
    if probabilities.shape != (m,) * n + (2,) * n:
        raise ValueError("probability table has wrong shape")
    flat = probabilities.reshape((m ** n, 2 ** n))
    sums = flat.sum(axis=1)
    if np.max(np.abs(sums - 1.0)) > tol("prob_norm"):
        raise ValueError("conditional distributions must each sum to 1")
    parity = np.array([(-1) ** bin(r).count("1") for r in range(2 ** n)])
    correlators = flat @ parity
    e_s = np.zeros(n * (m - 1) + 1)
    for idx, svec in enumerate(itertools.product(range(m), repeat=n)):
        e_s[sum(svec)] += correlators[idx]
    total = 0.0
    for s, e in enumerate(e_s):
        if s % m == 0:
            total += (-1) ** (s // m) * e
        elif s % m == 1:
            total += (-1) ** ((s - 1) // m) * e
    return float(total)


def born_probabilities(state: np.ndarray, settings) -> np.ndarray:
    """P(r⃗|s⃗) table for per-party dichotomic observables via the Born rule.

    ``settings`` is a per-party list of m 2×2 Hermitian observables; outcome
    bit 0 maps to the +1 eigenprojector.
    """
    n = len(settings)
    m = len(settings[0])
    projs = []
    for party_obs in settings:
        row = []
        for obs in party_obs:
            _, vecs = herm_eig(obs)
            plus = np.outer(vecs[:, 0], vecs[:, 0].conj())
            row.append((plus, np.eye(2) - plus))
        projs.append(row)
    rho = np.outer(state, state.conj()) if state.ndim == 1 else state
    table = np.zeros((m,) * n + (2,) * n)
    for svec in itertools.product(range(m), repeat=n):
        for rvec in itertools.product(range(2), repeat=n):
            op = kron(*(projs[p][svec[p]][rvec[p]] for p in range(n)))
            table[svec + rvec] = np.trace(op @ rho).real
    return table
