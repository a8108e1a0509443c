"""States, Kraus channels and Choi states, plus the channel zoo.

Everything here is immutable after construction: matrices are stored as
read-only copies and all operations are pure functions, so objects can be
shared freely across sweep workers.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOL
from .gates import HADAMARD, T_GATE, fourier_gate, qutrit_t_gate
from .linalg import (
    DimensionMismatchError,
    assert_psd,
    dagger,
    is_hermitian,
    partial_trace,
    tensor,
)

logger = logging.getLogger(__name__)


class StateValidationError(ValueError):
    """Matrix does not describe a (possibly unnormalized) quantum state."""


class ChannelCompletenessError(ValueError):
    """Kraus operators do not sum to the identity within tolerance."""


def _readonly(matrix: np.ndarray) -> np.ndarray:
    out = np.array(matrix, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Positive Hermitian matrix with a flag separating trace-1 states from
    unnormalized conditional states (post-selected branches carry their
    outcome probability as the trace).

    Parameters
    ----------
    matrix : ndarray
        Square complex matrix; must be Hermitian and positive semidefinite
        within the package tolerances.
    normalized : bool
        True asserts trace 1; False admits any nonnegative trace.
    """

    matrix: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise StateValidationError(f"density operator must be square, got {mat.shape}")
        if not is_hermitian(mat, DEFAULT_TOL.eq):
            raise StateValidationError("density operator is not Hermitian within tolerance")
        # Eigenvalue floor sits at the equality tolerance: anything in
        # [-1e-10, 0) is rounding residue, anything lower is a real error.
        assert_psd(mat, DEFAULT_TOL.eq * max(1.0, abs(np.trace(mat))), "density operator")
        tr = np.trace(mat).real
        if self.normalized and abs(tr - 1.0) > DEFAULT_TOL.psd:
            raise StateValidationError(f"normalized state has trace {tr!r}")
        if not self.normalized and tr < -DEFAULT_TOL.psd:
            raise StateValidationError(f"unnormalized state has negative trace {tr!r}")
        object.__setattr__(self, "matrix", _readonly(mat))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    @classmethod
    def pure(cls, vec) -> "DensityOperator":
        vec = np.asarray(vec, dtype=complex)
        vec = vec / np.linalg.norm(vec)
        return cls(np.outer(vec, vec.conj()))

    @classmethod
    def maximally_mixed(cls, d: int) -> "DensityOperator":
        return cls(np.eye(d, dtype=complex) / d)

    def renormalized(self) -> tuple["DensityOperator", float]:
        """Scale to unit trace; returns (state, factor) with factor the old trace."""
        tr = self.trace
        if tr <= DEFAULT_TOL.psd:
            raise StateValidationError(f"cannot renormalize state with trace {tr:.3e}")
        if self.normalized and abs(tr - 1.0) <= DEFAULT_TOL.eq:
            return self, 1.0
        return DensityOperator(self.matrix / tr, normalized=True), tr

    def isclose(self, other: "DensityOperator", tol: float = DEFAULT_TOL.eq) -> bool:
        return self.matrix.shape == other.matrix.shape and bool(
            np.abs(self.matrix - other.matrix).max() <= tol
        )


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """A linear map given by Kraus operators, each ``d_out x d_in``.

    Completeness (trace preservation) is *checkable*, not assumed: weighted
    branch maps are legitimately sub-unital here, so :meth:`validate` is the
    explicit gate used before any operation that requires a true channel.
    """

    kraus_ops: tuple
    d_in: int = field(default=0)
    d_out: int = field(default=0)

    def __post_init__(self):
        ops = tuple(_readonly(K) for K in self.kraus_ops)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        d_out, d_in = ops[0].shape
        for K in ops:
            if K.shape != (d_out, d_in):
                raise DimensionMismatchError("all Kraus operators must share one shape")
        object.__setattr__(self, "kraus_ops", ops)
        object.__setattr__(self, "d_in", d_in)
        object.__setattr__(self, "d_out", d_out)

    def completeness_residual(self) -> float:
        total = sum(dagger(K) @ K for K in self.kraus_ops)
        return float(np.abs(total - np.eye(self.d_in)).max())

    def validate(self, tol: float = DEFAULT_TOL.completeness) -> "KrausChannel":
        res = self.completeness_residual()
        if res > tol:
            raise ChannelCompletenessError(
                f"Kraus completeness residual {res:.3e} exceeds {tol:g}"
            )
        return self

    def is_complete(self, tol: float = DEFAULT_TOL.completeness) -> bool:
        return self.completeness_residual() <= tol


@dataclass(frozen=True, eq=False)
class ChoiState:
    """Choi state of a channel: (1/d_in) sum_ij |i><j| (x) N(|i><j|).

    The reference copy is the first tensor factor; tracing out the output
    factor of a trace-preserving channel leaves I/d_in.
    """

    matrix: np.ndarray
    d_in: int
    d_out: int

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        d = self.d_in * self.d_out
        if mat.shape != (d, d):
            raise DimensionMismatchError(f"Choi matrix shape {mat.shape} != {(d, d)}")
        assert_psd(mat, DEFAULT_TOL.psd, "Choi state")
        marginal = partial_trace(mat, [self.d_in, self.d_out], keep=0)
        if np.abs(marginal - np.eye(self.d_in) / self.d_in).max() > DEFAULT_TOL.psd:
            raise StateValidationError("Choi marginal differs from I/d_in: channel not TP")
        object.__setattr__(self, "matrix", _readonly(mat))


# ---------------------------------------------------------------------------
# Channel actions
# ---------------------------------------------------------------------------

def apply_kraus(kraus_ops, matrix: np.ndarray) -> np.ndarray:
    """Raw Kraus action sum_i K_i M K_i^dag on an arbitrary matrix."""
    out = np.zeros((kraus_ops[0].shape[0], kraus_ops[0].shape[0]), dtype=complex)
    for K in kraus_ops:
        out += K @ matrix @ dagger(K)
    return out


def apply_channel(ch: KrausChannel, rho: DensityOperator) -> DensityOperator:
    """Apply a channel to a state.

    The output is flagged normalized only when its trace lands on 1, so
    weighted (sub-unital) branch maps flow through unchanged.
    """
    if rho.dim != ch.d_in:
        raise DimensionMismatchError(f"state dim {rho.dim} != channel input dim {ch.d_in}")
    out = apply_kraus(ch.kraus_ops, rho.matrix)
    tr = np.trace(out).real
    return DensityOperator(out, normalized=abs(tr - 1.0) <= DEFAULT_TOL.psd)


def choi_of_channel(ch: KrausChannel, tol: float = DEFAULT_TOL.completeness) -> ChoiState:
    """Choi state of a valid channel (completeness enforced first)."""
    ch.validate(tol)
    d_in, d_out = ch.d_in, ch.d_out
    J = np.zeros((d_in * d_out, d_in * d_out), dtype=complex)
    for K in ch.kraus_ops:
        # |v> = sum_i |i> (x) K|i>, so J = (1/d_in) sum_K |v><v|.
        v = np.zeros(d_in * d_out, dtype=complex)
        for i in range(d_in):
            v[i * d_out : (i + 1) * d_out] = K[:, i]
        J += np.outer(v, v.conj())
    return ChoiState(J / d_in, d_in=d_in, d_out=d_out)


def channel_from_choi(choi: ChoiState, tol: float = DEFAULT_TOL.psd) -> KrausChannel:
    """Reconstruct Kraus operators from a Choi state via eigendecomposition."""
    d_in, d_out = choi.d_in, choi.d_out
    eigvals, eigvecs = np.linalg.eigh(choi.matrix * d_in)
    ops = []
    for lam, vec in zip(eigvals, eigvecs.T):
        if lam < -tol:
            raise StateValidationError(f"Choi eigenvalue {lam:.3e} below -{tol:g}")
        if lam <= tol:
            continue
        K = np.sqrt(lam) * vec.reshape(d_in, d_out).T
        ops.append(K)
    return KrausChannel(tuple(ops))


def compose_channels(outer: KrausChannel, inner: KrausChannel) -> KrausChannel:
    """Channel composition outer after inner (Kraus products O_i I_j)."""
    if inner.d_out != outer.d_in:
        raise DimensionMismatchError(
            f"cannot compose: inner output dim {inner.d_out} != outer input dim {outer.d_in}"
        )
    ops = tuple(O @ I for O in outer.kraus_ops for I in inner.kraus_ops)
    return KrausChannel(ops)


def extend_with_reference(ch: KrausChannel, d_ref: int) -> KrausChannel:
    """Tensor an idle reference system onto the left: id_ref (x) channel."""
    eye = np.eye(d_ref, dtype=complex)
    return KrausChannel(tuple(tensor(eye, K) for K in ch.kraus_ops))


def measure_control(
    state: DensityOperator,
    outcome: str,
    control_position: int = 0,
    control_dim: int = 2,
) -> tuple[DensityOperator, float]:
    """Project the control qubit onto |+> or |-> and return the target branch.

    Parameters
    ----------
    state : DensityOperator
        State on control (x) target (or target (x) control, see position).
    outcome : str
        "plus" or "minus".
    control_position : int
        0 if the control is the first tensor factor, 1 if the last.
    control_dim : int
        Only qubit controls (dim 2) are supported.

    Returns
    -------
    (branch, probability)
        The unnormalized conditional state <pm|state|pm> on the target and
        its trace.  Probabilities over both outcomes sum to the input trace.
    """
    if control_dim != 2:
        raise DimensionMismatchError("only a qubit control is supported")
    if outcome not in ("plus", "minus"):
        raise ValueError(f"outcome must be 'plus' or 'minus', got {outcome!r}")
    if control_position not in (0, 1):
        raise DimensionMismatchError(f"invalid control position {control_position}")
    d_total = state.dim
    if d_total % control_dim != 0:
        raise DimensionMismatchError(
            f"state dim {d_total} does not factor over a dim-{control_dim} control"
        )
    d_target = d_total // control_dim
    sign = 1.0 if outcome == "plus" else -1.0
    ctrl = np.array([1.0, sign], dtype=complex) / np.sqrt(2)

    if control_position == 0:
        block = state.matrix.reshape(control_dim, d_target, control_dim, d_target)
        branch = np.einsum("a,ambn,b->mn", ctrl.conj(), block, ctrl)
    else:
        block = state.matrix.reshape(d_target, control_dim, d_target, control_dim)
        branch = np.einsum("a,manb,b->mn", ctrl.conj(), block, ctrl)
    prob = float(np.trace(branch).real)
    return DensityOperator(branch, normalized=False), prob


# ---------------------------------------------------------------------------
# Channel zoo
# ---------------------------------------------------------------------------

def unitary_channel(U) -> KrausChannel:
    return KrausChannel((np.asarray(U, dtype=complex),))


def identity_channel(d: int) -> KrausChannel:
    return unitary_channel(np.eye(d, dtype=complex))


def orthogonal_unitary_basis(d: int) -> list[np.ndarray]:
    """A basis of d**2 unitaries orthogonal under the trace inner product.

    Pauli strings for d = 2; boost/shift products for odd prime d.
    """
    if d == 2:
        from .gates import PAULI_X, PAULI_Y, PAULI_Z

        return [np.eye(2, dtype=complex), PAULI_X, PAULI_Y, PAULI_Z]
    if d % 2 == 1 and _is_prime(d):
        from .phasespace import heisenberg_weyl_operators

        return [op for _, op in heisenberg_weyl_operators(d)]
    raise DimensionMismatchError(f"no orthogonal unitary basis implemented for d={d}")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, int(n**0.5) + 1))


def depolarizing_channel(d: int, p: float) -> KrausChannel:
    """Mix a state with the maximally mixed state: rho -> p I/d + (1-p) rho.

    Valid for p in [0, d^2/(d^2-1)]; the upper part of that range (p > 1)
    still defines a completely positive map and is what the minus branch of
    the switched depolarizing noise produces.
    """
    p_max = d * d / (d * d - 1)
    if not 0.0 <= p <= p_max + 1e-12:
        raise ValueError(f"depolarizing strength p={p} outside [0, {p_max:.6f}]")
    basis = orthogonal_unitary_basis(d)
    # rho -> a rho + (p/d^2) sum_{non-identity U} U rho U^dag with
    # a = 1 - p (d^2-1)/d^2 >= 0 over the whole valid range.
    a = max(0.0, 1.0 - p * (d * d - 1) / (d * d))
    ops = [np.sqrt(a) * np.eye(d, dtype=complex)]
    ops += [np.sqrt(p) / d * U for U in basis[1:]]
    return KrausChannel(tuple(ops))


def noisy_th_channel(p: float) -> KrausChannel:
    """Qubit channel mixing a Fourier-basis reset with the combined T H gate.

    With weight ``p`` the input is measured in the |+>/|-> basis and the
    outcome is written into the computational basis; with weight ``1 - p``
    the unitary T H is applied.  Complete for every p in [0, 1].
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    k0 = np.sqrt(p / 2) * np.array([[1, 1], [0, 0]], dtype=complex)
    k1 = np.sqrt(p / 2) * np.array([[0, 0], [-1, 1]], dtype=complex)
    k2 = np.sqrt(1 - p) * (T_GATE @ HADAMARD)
    return KrausChannel((k0, k1, k2))


def _qutrit_reset_rows(p: float, k2_variant: str) -> tuple:
    omega = np.exp(2j * np.pi / 3)
    zeta = np.exp(2j * np.pi / 9)
    sq = np.sqrt(p / 3)
    k0 = sq * zeta * np.array([[1, 1, 1], [0, 0, 0], [0, 0, 0]], dtype=complex)
    k1 = sq * np.array([[0, 0, 0], [1, omega, omega**2], [0, 0, 0]], dtype=complex)
    if k2_variant == "aligned":
        k2 = sq * zeta * np.array([[0, 0, 0], [0, 0, 0], [1, omega**2, omega]], dtype=complex)
    elif k2_variant == "cross":
        # Row-misaligned variant: the last two entries land in row 1 instead
        # of row 2, which breaks completeness for every p > 0.
        k2 = sq * zeta * np.array(
            [[0, 0, 0], [0, omega**2, omega], [1, 0, 0]], dtype=complex
        )
    else:
        raise ValueError(f"unknown k2_variant {k2_variant!r}")
    return k0, k1, k2


def qutrit_noisy_th_channel(p: float, k2_variant: str = "aligned") -> KrausChannel:
    """Qutrit analog of :func:`noisy_th_channel`.

    Weight ``p`` measures in the Fourier basis and records the outcome in the
    computational basis (three rank-1 Kraus rows); weight ``1 - p`` applies
    the qutrit T H unitary.  ``k2_variant`` selects the third reset row:
    "aligned" is the completeness-consistent set used everywhere, "cross" is
    the row-misaligned variant kept only so its failure is checkable (see
    :func:`qutrit_k2_variant_report`).
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    k0, k1, k2 = _qutrit_reset_rows(p, k2_variant)
    k3 = np.sqrt(1 - p) * (qutrit_t_gate() @ fourier_gate(3))
    return KrausChannel((k0, k1, k2, k3))


def qutrit_k2_variant_report(p: float = 0.5) -> dict:
    """Completeness residuals of both third-row variants at noise level ``p``.

    The "cross" variant fails completeness by O(p); "aligned" is exact and is
    the set every computation in this package uses.
    """
    report = {}
    for variant in ("aligned", "cross"):
        ch = qutrit_noisy_th_channel(p, k2_variant=variant)
        report[variant] = ch.completeness_residual()
    report["selected"] = "aligned"
    logger.info(
        "qutrit reset-row check at p=%g: aligned residual %.3e, cross residual %.3e",
        p,
        report["aligned"],
        report["cross"],
    )
    return report
