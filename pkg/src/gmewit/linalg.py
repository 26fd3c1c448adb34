"""Dense complex linear algebra: Pauli matrices, Kronecker products,
Hermitian eigensolving, expectation values and validation helpers.

All operators are plain ``numpy`` complex arrays; states are 1-D complex
vectors, density matrices square complex arrays.  Every public routine
validates its inputs against the central tolerance table.
"""

from __future__ import annotations

from functools import reduce

import numpy as np

from .tolerances import tol

# ---------------------------------------------------------------------------
# Pauli constants
# ---------------------------------------------------------------------------

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)

PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}


# ---------------------------------------------------------------------------
# Construction helpers
# ---------------------------------------------------------------------------

def kron(*mats: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices, left to right."""
    return reduce(np.kron, mats)


def pauli_string(letters: str) -> np.ndarray:
    """Tensor product of single-qubit Paulis, e.g. ``"XZII"``."""
    return kron(*(PAULI[c] for c in letters))


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def is_hermitian(m: np.ndarray, atol: float | None = None) -> bool:
    if atol is None:
        atol = tol("hermitian")
    return bool(np.max(np.abs(m - m.conj().T)) <= atol)


def assert_hermitian(m: np.ndarray) -> None:
    if not is_hermitian(m):
        raise ValueError("matrix is not Hermitian within tolerance")


def assert_state(psi: np.ndarray) -> None:
    """Check normalization and power-of-two dimension of a state vector."""
    dim = psi.shape[0]
    if dim & (dim - 1):
        raise ValueError(f"state dimension {dim} is not a power of two")
    if abs(np.vdot(psi, psi).real - 1.0) > tol("state_norm"):
        raise ValueError("state vector is not normalized")


def assert_density_matrix(rho: np.ndarray) -> None:
    assert_hermitian(rho)
    if abs(np.trace(rho).real - 1.0) > tol("density_trace"):
        raise ValueError("density matrix trace differs from 1")
    evals = np.linalg.eigvalsh(rho)
    if evals.min() < tol("density_psd"):
        raise ValueError(f"density matrix has eigenvalue {evals.min():.3e} < 0")


# ---------------------------------------------------------------------------
# Expectation values and eigensolving
# ---------------------------------------------------------------------------

def expectation(op: np.ndarray, state: np.ndarray) -> float:
    """⟨ψ|op|ψ⟩ for a vector or tr(op·ρ) for a density matrix.

    The operator must be Hermitian and dimension-matched; the imaginary
    residue of the result is asserted small and discarded.
    """
    assert_hermitian(op)
    if state.ndim == 1:
        if op.shape[0] != state.shape[0]:
            raise ValueError("operator/state dimension mismatch")
        val = np.vdot(state, op @ state)
    elif state.ndim == 2:
        if op.shape != state.shape:
            raise ValueError("operator/state dimension mismatch")
        val = np.trace(op @ state)
    else:
        raise ValueError("state must be a vector or a density matrix")
    if abs(val.imag) > tol("expectation_imag"):
        raise ValueError(f"expectation has imaginary residue {val.imag:.3e}")
    return float(val.real)


def herm_eig(m: np.ndarray, mode: str = "full"):
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    m : ndarray
        Hermitian matrix, dimension at most 2**10.
    mode : {"full", "max-only"}
        "full" returns ``(eigenvalues, eigenvectors)`` with eigenvalues
        sorted descending and eigenvectors as columns; "max-only" returns
        ``(max_eigenvalue, eigenvector)``.
    """
    assert_hermitian(m)
    if m.shape[0] > 2 ** 10:
        raise ValueError("dimension exceeds the supported 2^10 cap")
    evals, evecs = np.linalg.eigh(m)
    order = np.argsort(evals)[::-1]
    evals, evecs = evals[order], evecs[:, order]
    if mode == "max-only":
        return float(evals[0]), evecs[:, 0]
    if mode != "full":
        raise ValueError(f"unknown mode {mode!r}")
    return evals.astype(float), evecs


def max_eigenvalue(m: np.ndarray) -> float:
    assert_hermitian(m)
    return float(np.linalg.eigvalsh(m)[-1])


def min_eigenvalue(m: np.ndarray) -> float:
    assert_hermitian(m)
    return float(np.linalg.eigvalsh(m)[0])


# ---------------------------------------------------------------------------
# Partial trace (used by the see-saw oracle and purity checks)
# ---------------------------------------------------------------------------

def partial_trace(rho: np.ndarray, keep: list[int], n: int) -> np.ndarray:
    """Partial trace of an n-qubit density matrix onto the qubits ``keep``."""
    keep = sorted(keep)
    traced = [q for q in range(n) if q not in keep]
    t = rho.reshape([2] * (2 * n))
    n_cur = n
    # Trace out highest qubits first so lower traced-qubit indices stay valid.
    for q in sorted(traced, reverse=True):
        t = np.trace(t, axis1=q, axis2=q + n_cur)
        n_cur -= 1
    d = 2 ** len(keep)
    return t.reshape(d, d)
