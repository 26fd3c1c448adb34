"""Measurement models: tilted observables, imprecision budgets, the
waveplate/PBS POVM error model, and tomography-based fidelity estimation."""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field

import numpy as np

from .linalg import I2, PAULI, assert_hermitian, herm_eig
from .tolerances import tol

AXES = ("X", "Y", "Z")


def q_of(eps: float) -> float:
    """Alignment coefficient q = 1 − 2ε."""
    return 1.0 - 2.0 * eps


def u_of(eps: float) -> float:
    """Transverse coefficient √(1−q²) = 2√(ε(1−ε))."""
    return 2.0 * np.sqrt(eps * (1.0 - eps))


# ---------------------------------------------------------------------------
# Tilted observables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TiltedObservable:
    """Dichotomic observable q·σ(intended) + √(1−q²)·σ(partner)."""

    intended: str
    partner: str
    q: float
    matrix: np.ndarray


def tilted_observable(intended: str, partner: str, eps: float) -> TiltedObservable:
    """Extremal imprecise observable for the intended axis with infidelity ε."""
    if intended not in AXES or partner not in AXES:
        raise ValueError("axes must be X, Y or Z")
    if intended == partner:
        raise ValueError("partner axis must differ from the intended axis")
    if not 0.0 <= eps <= 0.5:
        raise ValueError("ε must lie in [0, 1/2]")
    q, u = q_of(eps), u_of(eps)
    mat = q * PAULI[intended] + u * PAULI[partner]
    return TiltedObservable(intended, partner, q, mat)


@dataclass(frozen=True)
class ImprecisionBudget:
    """Per-party (ε_X, ε_Y, ε_Z) measurement infidelities."""

    per_party: tuple

    def __post_init__(self):
        for trip in self.per_party:
            for eps in trip:
                if not 0.0 <= eps <= 0.5:
                    raise ValueError("each ε must lie in [0, 1/2]")

    @classmethod
    def ideal(cls, n: int) -> "ImprecisionBudget":
        return cls(tuple((0.0, 0.0, 0.0) for _ in range(n)))

    @classmethod
    def uniform(cls, eps: float, n: int) -> "ImprecisionBudget":
        return cls(tuple((eps, eps, eps) for _ in range(n)))

    @classmethod
    def per_basis(cls, eps_x: float, eps_y: float, eps_z: float, n: int) -> "ImprecisionBudget":
        return cls(tuple((eps_x, eps_y, eps_z) for _ in range(n)))

    @classmethod
    def single_party(cls, eps: float, n: int, party: int = 0) -> "ImprecisionBudget":
        trips = [(0.0, 0.0, 0.0)] * n
        trips[party] = (eps, eps, eps)
        return cls(tuple(trips))

    @property
    def n(self) -> int:
        return len(self.per_party)

    def eps(self, party: int, axis: str) -> float:
        return self.per_party[party][AXES.index(axis)]

    def is_ideal(self) -> bool:
        return all(e == 0.0 for trip in self.per_party for e in trip)


# ---------------------------------------------------------------------------
# Measurement fidelity
# ---------------------------------------------------------------------------

def bloch_states(axis: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenstates |±n⟩ of n·σ for a unit Bloch vector n."""
    nx, ny, nz = axis / np.linalg.norm(axis)
    op = nx * PAULI["X"] + ny * PAULI["Y"] + nz * PAULI["Z"]
    _, vecs = herm_eig(op)
    return vecs[:, 0], vecs[:, 1]


AXIS_VECTORS = {"X": np.array([1.0, 0, 0]), "Y": np.array([0, 1.0, 0]), "Z": np.array([0, 0, 1.0])}


def projectors(obs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Spectral ± projectors of a dichotomic 2×2 observable."""
    _, vecs = herm_eig(obs)
    plus, minus = vecs[:, 0], vecs[:, 1]
    return np.outer(plus, plus.conj()), np.outer(minus, minus.conj())


def measurement_fidelity(povm_plus: np.ndarray, povm_minus: np.ndarray,
                         axis: np.ndarray) -> float:
    """Average fidelity ½⟨n|P̃₊|n⟩ + ½⟨−n|P̃₋|−n⟩ against the axis n."""
    if np.max(np.abs(povm_plus + povm_minus - I2)) > tol("povm_completeness"):
        raise ValueError("POVM elements do not sum to the identity")
    for p in (povm_plus, povm_minus):
        assert_hermitian(p)
        if np.linalg.eigvalsh(p).min() < -1e-12:
            raise ValueError("POVM element is not positive semidefinite")
    plus, minus = bloch_states(np.asarray(axis, dtype=float))
    f = 0.5 * np.vdot(plus, povm_plus @ plus).real \
        + 0.5 * np.vdot(minus, povm_minus @ minus).real
    return float(f)


# ---------------------------------------------------------------------------
# Waveplate / PBS POVM model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WaveplateErrorSpec:
    """Rotation-stage and retardance errors plus PBS routing probability."""

    d_alpha: float = 0.0
    d_beta: float = 0.0
    d_eta_q: float = 0.0
    d_eta_h: float = 0.0
    gamma: float = 1.0

    def __post_init__(self):
        if min(self.d_alpha, self.d_beta, self.d_eta_q, self.d_eta_h) < 0:
            raise ValueError("error magnitudes must be non-negative")
        if not 0.5 <= self.gamma <= 1.0:
            raise ValueError("γ must lie in [1/2, 1]")


#: QWP angle α and HWP angle β steering each basis onto the PBS H/V ports.
WAVEPLATE_SETTINGS = {
    "Z": (0.0, 0.0),
    "X": (np.pi / 4, np.pi / 8),
    "Y": (0.0, 3 * np.pi / 8),
}


def _rot(t: float) -> np.ndarray:
    return np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]], dtype=complex)


def waveplate(t: float, eta: float) -> np.ndarray:
    """Jones matrix of a waveplate at angle t with retardance η."""
    return _rot(t) @ np.diag([1.0, np.exp(1j * eta)]) @ _rot(-t)


def _povm_plus(alpha, beta, eta_q, eta_h, gamma):
    u = waveplate(beta, eta_h) @ waveplate(alpha, eta_q)
    psi = u.conj().T @ np.array([1, 0], dtype=complex)
    psi_perp = u.conj().T @ np.array([0, 1], dtype=complex)
    return gamma * np.outer(psi, psi.conj()) + (1 - gamma) * np.outer(psi_perp, psi_perp.conj())


def waveplate_povm(basis: str, spec: WaveplateErrorSpec):
    """POVM pair implemented by the imperfect QWP–HWP–PBS chain.

    Returns ``(P_plus, P_minus, info)`` where ``info`` carries the worst-case
    fidelity over all error-sign combinations (authoritative), the
    quadrature-propagated first-order estimate, and the worst sign tuple.
    """
    if basis not in WAVEPLATE_SETTINGS:
        raise ValueError(f"unknown basis {basis!r}")
    alpha, beta = WAVEPLATE_SETTINGS[basis]
    axis = AXIS_VECTORS[basis]
    worst_f, worst_signs, worst_povm = np.inf, None, None
    for signs in itertools.product((1, -1), repeat=4):
        sa, sb, sq, sh = signs
        p_plus = _povm_plus(alpha + sa * spec.d_alpha, beta + sb * spec.d_beta,
                            np.pi / 2 + sq * spec.d_eta_q, np.pi + sh * spec.d_eta_h,
                            spec.gamma)
        f = measurement_fidelity(p_plus, I2 - p_plus, axis)
        if f < worst_f:
            worst_f, worst_signs, worst_povm = f, signs, p_plus
    # First-order estimate: per-parameter Bloch-angle deviations in quadrature.
    delta_sq = 0.0
    deltas = [(spec.d_alpha, 0, 0, 0), (0, spec.d_beta, 0, 0),
              (0, 0, spec.d_eta_q, 0), (0, 0, 0, spec.d_eta_h)]
    for da, db, dq, dh in deltas:
        p_plus = _povm_plus(alpha + da, beta + db, np.pi / 2 + dq, np.pi + dh, 1.0)
        f = measurement_fidelity(p_plus, I2 - p_plus, axis)
        delta_sq += (2 * np.arccos(np.sqrt(np.clip(f, 0, 1)))) ** 2
    delta = np.sqrt(delta_sq)
    f_prop = spec.gamma * np.cos(delta / 2) ** 2 + (1 - spec.gamma) * np.sin(delta / 2) ** 2
    info = {"fidelity": float(worst_f), "fidelity_propagated": float(f_prop),
            "worst_signs": worst_signs}
    return worst_povm, I2 - worst_povm, info


# ---------------------------------------------------------------------------
# Detector tomography from coincidence counts
# ---------------------------------------------------------------------------

PREP_LABELS = ("H", "V", "D", "A", "R", "L")
PROJ_LABELS = ("D", "A", "R", "L", "H", "V")

#: Probe states in the H/V computational basis.
_PROBES = {
    "H": np.array([1, 0], dtype=complex),
    "V": np.array([0, 1], dtype=complex),
    "D": np.array([1, 1], dtype=complex) / np.sqrt(2),
    "A": np.array([1, -1], dtype=complex) / np.sqrt(2),
    "R": np.array([1, 1j], dtype=complex) / np.sqrt(2),
    "L": np.array([1, -1j], dtype=complex) / np.sqrt(2),
}

#: Each projector pair and the Bloch axis whose ± eigenstates it targets.
PROJECTOR_PAIRS = {"X": ("D", "A"), "Y": ("R", "L"), "Z": ("H", "V")}


@dataclass
class CountTable:
    """6×6 table of coincidence counts, projector row × preparation column."""

    counts: dict = field(default_factory=dict)

    def __post_init__(self):
        for proj in PROJ_LABELS:
            for prep in PREP_LABELS:
                c = self.counts.get((proj, prep))
                if c is None:
                    raise ValueError(f"missing count for proj_{proj}/prep_{prep}")
                if c < 0:
                    raise ValueError("counts must be non-negative")

    @classmethod
    def from_csv(cls, path) -> "CountTable":
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
        header = rows[0]
        preps = [h.removeprefix("prep_") for h in header[1:]]
        counts = {}
        for row in rows[1:]:
            proj = row[0].removeprefix("proj_")
            for prep, cell in zip(preps, row[1:]):
                counts[(proj, prep)] = int(cell)
        return cls(counts)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["projector"] + [f"prep_{p}" for p in PREP_LABELS])
        for proj in PROJ_LABELS:
            w.writerow([f"proj_{proj}"] + [self.counts[(proj, p)] for p in PREP_LABELS])
        return buf.getvalue()


def _reconstruct_povm(table: CountTable, proj: str, partner: str) -> np.ndarray:
    """Linear-inversion detector tomography of one POVM element.

    Probabilities are normalized per preparation against the projector's
    partner port; probe states are assumed ideal.
    """
    c0, cx, cy, cz = 0.0, 0.0, 0.0, 0.0
    probs = {}
    for prep in PREP_LABELS:
        n_plus = table.counts[(proj, prep)]
        n_minus = table.counts[(partner, prep)]
        total = n_plus + n_minus
        if total == 0:
            raise ValueError(f"zero total counts for preparation {prep}")
        probs[prep] = n_plus / total
    # p(prep) = ½(c0 + c·s(prep)) with s the probe Bloch vector; the six
    # probes are ±x, ±y, ±z so the inversion is direct.
    c0 = sum(probs.values()) / 3.0
    cx = probs["D"] - probs["A"]
    cy = probs["R"] - probs["L"]
    cz = probs["H"] - probs["V"]
    povm = 0.5 * (c0 * I2 + cx * PAULI["X"] + cy * PAULI["Y"] + cz * PAULI["Z"])
    # Clip to the PSD cone if sampling noise pushed an eigenvalue negative.
    evals, vecs = np.linalg.eigh(povm)
    evals = np.clip(evals, 0.0, 1.0)
    return (vecs * evals) @ vecs.conj().T


def fidelity_from_counts(table: CountTable) -> dict:
    """Per-projector fidelity estimates from a tomography count table.

    For each projector pair three estimators are returned:

    - ``pass_fail``: ½(N_pass(+n)/N_tot(+n) + N_pass(−n)/N_tot(−n));
    - ``tomography``: linear-inversion POVM reconstruction scored by
      ``measurement_fidelity`` against the ideal axis;
    - ``symmetric``: (1 + p̄)/2 with p̄ the pass_fail estimate — attributes
      half of the observed infidelity to probe preparation (primary column).
    """
    out = {}
    for axis, (plus_label, minus_label) in PROJECTOR_PAIRS.items():
        p_plus = table.counts[(plus_label, plus_label)] / (
            table.counts[(plus_label, plus_label)] + table.counts[(minus_label, plus_label)])
        p_minus = table.counts[(minus_label, minus_label)] / (
            table.counts[(plus_label, minus_label)] + table.counts[(minus_label, minus_label)])
        for label, p in ((plus_label, p_plus), (minus_label, p_minus)):
            pass_fail = p
            povm_plus = _reconstruct_povm(
                table, label, minus_label if label == plus_label else plus_label)
            sign = +1 if label == plus_label else -1
            tomo = measurement_fidelity(povm_plus, I2 - povm_plus,
                                        sign * AXIS_VECTORS[axis])
            out[label] = {
                "axis": axis,
                "pass_fail": float(pass_fail),
                "tomography": float(tomo),
                "symmetric": float((1.0 + pass_fail) / 2.0),
            }
    return out


# ---------------------------------------------------------------------------
# Poissonian Monte-Carlo witness error
# ---------------------------------------------------------------------------

def poisson_witness_error(setting_counts: dict, spec, trials: int = 1000,
                          seed: int = 42) -> tuple[float, float]:
    """Monte-Carlo mean and std of a correlator-witness value.

    ``setting_counts`` maps each term's letter string to a length-2^n array
    of outcome counts (computational ordering of ±1 outcome tuples).  Every
    count is resampled from a Poisson law with the observed count as mean,
    correlators are recomputed per trial and the witness re-evaluated.
    """
    if trials < 100:
        raise ValueError("trials must be at least 100")
    rng = np.random.default_rng(seed)
    n = spec.n
    for letters, counts in setting_counts.items():
        if np.sum(counts) == 0:
            raise ValueError(f"setting {letters} has zero total counts")

    def parity_vector(letters):
        # Identity positions are marginalized: only non-identity outcome bits
        # contribute to the correlator sign.
        active = [i for i, c in enumerate(letters) if c != "I"]
        signs = np.ones(2 ** n)
        for i in range(2 ** n):
            bits = sum((i >> (n - 1 - q)) & 1 for q in active)
            signs[i] = (-1) ** bits
        return signs

    parities = {letters: parity_vector(letters) for _, letters in spec.terms}
    values = np.empty(trials)
    for t in range(trials):
        total = spec.constant_offset
        for coeff, letters in spec.terms:
            if letters == "I" * n:
                total += coeff
                continue
            counts = np.asarray(setting_counts[letters], dtype=float)
            sample = rng.poisson(counts)
            tot = sample.sum()
            corr = float(parities[letters] @ sample) / tot if tot > 0 else 0.0
            total += coeff * corr
        values[t] = total
    return float(values.mean()), float(values.std(ddof=1))
