"""Dense complex-matrix primitives shared by all quantum objects.

Operators are plain ``numpy.ndarray`` matrices with ``complex128`` entries;
this module supplies the multilinear pieces numpy does not ship directly
(tensor products of many factors, partial trace, tolerance-aware checks)
plus the orthonormal Pauli-string basis used for real vectorization.
"""

from __future__ import annotations

import itertools

import numpy as np

from .config import DEFAULT_TOL


class DimensionMismatchError(ValueError):
    """Operator shapes are incompatible with the requested operation."""


def dagger(op: np.ndarray) -> np.ndarray:
    return np.asarray(op).conj().T


def tensor(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more operators, left to right."""
    if not ops:
        raise ValueError("tensor() needs at least one operator")
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def partial_trace(op: np.ndarray, dims, keep) -> np.ndarray:
    """Trace out all tensor factors not listed in ``keep``.

    Parameters
    ----------
    op : ndarray
        Square matrix on the full product space.
    dims : sequence of int
        Factor dimensions; their product must match ``op``.
    keep : int or sequence of int
        Indices (into ``dims``) of the factors to keep, in original order.
    """
    dims = [int(d) for d in dims]
    if isinstance(keep, (int, np.integer)):
        keep = [int(keep)]
    keep = sorted(int(k) for k in keep)
    total = int(np.prod(dims))
    op = np.asarray(op, dtype=complex)
    if op.shape != (total, total):
        raise DimensionMismatchError(f"operator shape {op.shape} != product of dims {dims}")
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionMismatchError(f"keep indices {keep} out of range for {len(dims)} factors")

    n = len(dims)
    reshaped = op.reshape(dims + dims)
    # Row/col axes of traced factors are contracted pairwise.
    traced = [i for i in range(n) if i not in keep]
    for offset, i in enumerate(traced):
        axis = i - offset
        reshaped = np.trace(reshaped, axis1=axis, axis2=axis + (n - offset))
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return reshaped.reshape(d_keep, d_keep)


def trace(op: np.ndarray) -> complex:
    return complex(np.trace(op))


def hermitian_eigenvalues(op: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian operator (Hermitian-specialized)."""
    return np.linalg.eigvalsh(op)


def is_hermitian(op: np.ndarray, tol: float = DEFAULT_TOL.eq) -> bool:
    op = np.asarray(op)
    return op.shape[0] == op.shape[1] and bool(np.abs(op - op.conj().T).max() <= tol)


def operators_close(a: np.ndarray, b: np.ndarray, tol: float = DEFAULT_TOL.eq) -> bool:
    """Entrywise equality within an absolute tolerance."""
    a = np.asarray(a)
    b = np.asarray(b)
    return a.shape == b.shape and bool(np.abs(a - b).max() <= tol)


def assert_psd(op: np.ndarray, tol: float = DEFAULT_TOL.psd, what: str = "operator") -> np.ndarray:
    """Check positive semidefiniteness; clamp eigenvalues in [-tol, 0) to 0.

    Returns the (clamped) eigenvalues; raises on negativity below ``-tol``.
    """
    eigs = hermitian_eigenvalues(op)
    if eigs.min(initial=0.0) < -tol:
        raise ValueError(f"{what} has negative eigenvalue {eigs.min():.3e} below -{tol:g}")
    return np.clip(eigs, 0.0, None)


# ---------------------------------------------------------------------------
# Pauli-string basis and real vectorization of Hermitian operators
# ---------------------------------------------------------------------------

_PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_strings(n_qubits: int) -> list[tuple[str, np.ndarray]]:
    """All 4**n Pauli strings on ``n_qubits`` qubits as (label, operator) pairs.

    Ordering is lexicographic over the alphabet I, X, Y, Z, so it is stable
    across runs and usable as a canonical basis order.
    """
    out = []
    for combo in itertools.product("IXYZ", repeat=n_qubits):
        label = "".join(combo)
        out.append((label, tensor(*[_PAULI_1Q[c] for c in combo])))
    return out


def pauli_vectorize(op: np.ndarray, paulis: list[tuple[str, np.ndarray]]) -> np.ndarray:
    """Expand a Hermitian operator over the orthonormal Pauli basis.

    The basis elements are Pauli strings divided by sqrt(d), so the map is an
    isometry: Hilbert-Schmidt inner products equal Euclidean dot products of
    the returned real vectors.
    """
    op = np.asarray(op, dtype=complex)
    d = op.shape[0]
    coeffs = np.empty(len(paulis))
    scale = 1.0 / np.sqrt(d)
    for k, (_, pauli) in enumerate(paulis):
        val = np.trace(pauli @ op) * scale
        coeffs[k] = val.real
    return coeffs


def pauli_unvectorize(vec: np.ndarray, paulis: list[tuple[str, np.ndarray]]) -> np.ndarray:
    """Inverse of :func:`pauli_vectorize`."""
    d = paulis[0][1].shape[0]
    out = np.zeros((d, d), dtype=complex)
    scale = 1.0 / np.sqrt(d)
    for coeff, (_, pauli) in zip(vec, paulis):
        out += coeff * scale * pauli
    return out
