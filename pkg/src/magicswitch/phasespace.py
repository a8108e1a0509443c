"""Discrete phase space for odd prime dimensions.

Builds the boost/shift displacement operators and the phase-point operator
frame, and evaluates Wigner functions and mana for states and channels.
These are the non-stabilizerness monotones used in odd dimension, where the
free states are exactly those with a nonnegative Wigner function.

Mana is reported with log base 2; only its zero set matters for any
threshold in this package, so the base is a pure convention.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .channels import ChoiState, DensityOperator, KrausChannel, apply_kraus, choi_of_channel
from .config import DEFAULT_TOL
from .linalg import DimensionMismatchError, dagger, tensor

logger = logging.getLogger(__name__)

_CROSS_CHECK_TOL = 1e-10


def _require_odd_prime(d: int) -> None:
    if d < 3 or d % 2 == 0:
        raise ValueError(f"dimension d={d} must be an odd prime")
    if any(d % k == 0 for k in range(2, int(d**0.5) + 1)):
        raise ValueError(f"dimension d={d} must be prime")


@lru_cache(maxsize=None)
def heisenberg_weyl_operators(d: int) -> tuple:
    """Displacement operators T_u = tau^(-a1 a2) Z^a1 X^a2 over Z_d x Z_d.

    Returned as ((a1, a2), operator) pairs in row-major point order.
    """
    _require_odd_prime(d)
    omega = np.exp(2j * np.pi / d)
    tau = np.exp(1j * np.pi * (d + 1) / d)
    shift = np.zeros((d, d), dtype=complex)
    for j in range(d):
        shift[(j + 1) % d, j] = 1.0
    boost = np.diag([omega**j for j in range(d)]).astype(complex)
    out = []
    for a1 in range(d):
        for a2 in range(d):
            op = tau ** (-a1 * a2) * np.linalg.matrix_power(boost, a1) @ np.linalg.matrix_power(shift, a2)
            op.setflags(write=False)
            out.append(((a1, a2), op))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class PhaseSpaceFrame:
    """Phase-point operator frame A_u for one odd-prime dimension.

    The frame satisfies, numerically at build time: each A_u Hermitian with
    unit trace, Tr[A_u A_v] = d delta(u, v), and sum_u A_u / d = I.
    """

    d: int
    tau: complex
    boost: np.ndarray
    shift: np.ndarray
    points: tuple                 # ((a1, a2), ...) row-major
    heisenberg_weyl: np.ndarray   # (d^2, d, d)
    phase_points: np.ndarray      # (d^2, d, d)

    def point_index(self, u) -> int:
        a1, a2 = u
        return (a1 % self.d) * self.d + (a2 % self.d)


@lru_cache(maxsize=None)
def build_frame(d: int) -> PhaseSpaceFrame:
    """Construct and verify the phase-point frame for odd prime ``d``."""
    _require_odd_prime(d)
    hw = heisenberg_weyl_operators(d)
    points = tuple(u for u, _ in hw)
    t_ops = np.stack([op for _, op in hw])
    a0 = t_ops.sum(axis=0) / d
    a_ops = np.stack([T @ a0 @ dagger(T) for T in t_ops])

    eye = np.eye(d)
    for k, A in enumerate(a_ops):
        if np.abs(A - A.conj().T).max() > 1e-12:
            raise RuntimeError(f"A_{points[k]} not Hermitian")
        if abs(np.trace(A) - 1.0) > 1e-12:
            raise RuntimeError(f"A_{points[k]} trace != 1")
    if np.abs(a_ops.sum(axis=0) / d - eye).max() > 1e-12:
        raise RuntimeError("phase-point resolution of identity failed")
    gram = np.einsum("uij,vji->uv", a_ops, a_ops)
    if np.abs(gram - d * np.eye(d * d)).max() > 1e-10:
        raise RuntimeError("phase-point orthogonality failed")

    omega = np.exp(2j * np.pi / d)
    shift = np.zeros((d, d), dtype=complex)
    for j in range(d):
        shift[(j + 1) % d, j] = 1.0
    boost = np.diag([omega**j for j in range(d)]).astype(complex)
    t_ops.setflags(write=False)
    a_ops.setflags(write=False)
    return PhaseSpaceFrame(
        d=d,
        tau=complex(np.exp(1j * np.pi * (d + 1) / d)),
        boost=boost,
        shift=shift,
        points=points,
        heisenberg_weyl=t_ops,
        phase_points=a_ops,
    )


def wigner_of_operator(op: np.ndarray, frame: PhaseSpaceFrame) -> np.ndarray:
    """Wigner coefficients W(u) = Tr[A_u op] / d of a Hermitian operator.

    Returned as a (d, d) real array indexed [a1, a2].
    """
    op = np.asarray(op, dtype=complex)
    if op.shape != (frame.d, frame.d):
        raise DimensionMismatchError(f"operator shape {op.shape} != frame dim {frame.d}")
    vals = np.einsum("uij,ji->u", frame.phase_points, op) / frame.d
    if np.abs(vals.imag).max() > 1e-12:
        raise ValueError("Wigner function has a non-real component; operator not Hermitian?")
    return vals.real.reshape(frame.d, frame.d)


def wigner_of_state(rho: DensityOperator, frame: PhaseSpaceFrame) -> np.ndarray:
    """Wigner function of a normalized state; values sum to 1."""
    if not rho.normalized:
        raise ValueError("wigner_of_state expects a normalized state")
    wig = wigner_of_operator(rho.matrix, frame)
    if abs(wig.sum() - 1.0) > DEFAULT_TOL.eq:
        raise RuntimeError(f"Wigner normalization drifted: sum = {wig.sum()!r}")
    return wig


def _clamp_mana(value: float) -> float:
    # Values inside the zero band are rounding residue of log2(1 + eps).
    return 0.0 if value < DEFAULT_TOL.mana_zero else float(value)


def mana_state(rho: DensityOperator, frame: PhaseSpaceFrame) -> float:
    """Mana of a state: log2 of the Wigner l1 norm, zero exactly on the
    nonnegative-Wigner set.  Unnormalized inputs are renormalized first."""
    if not rho.normalized:
        rho, factor = rho.renormalized()
        logger.info("mana_state renormalized input by factor %.12g", factor)
    wig = wigner_of_state(rho, frame)
    return _clamp_mana(np.log2(np.abs(wig).sum()))


def wigner_of_channel(
    ch: KrausChannel,
    frame_in: PhaseSpaceFrame,
    frame_out: PhaseSpaceFrame | None = None,
) -> np.ndarray:
    """Conditional Wigner function W(v|u) = Tr[A_v N(A_u)] / d_out.

    Computed directly from the Kraus action and cross-checked against the
    Choi-state route; the two must agree to 1e-10.  Returned as a
    (d_out^2, d_in^2) array W[v, u] in row-major point order, so each column
    sums to 1 for a trace-preserving channel.
    """
    frame_out = frame_out or frame_in
    if ch.d_in != frame_in.d or ch.d_out != frame_out.d:
        raise DimensionMismatchError(
            f"channel dims ({ch.d_in},{ch.d_out}) != frames ({frame_in.d},{frame_out.d})"
        )
    n_in = frame_in.d**2
    n_out = frame_out.d**2
    direct = np.empty((n_out, n_in))
    for u in range(n_in):
        image = apply_kraus(ch.kraus_ops, frame_in.phase_points[u])
        col = np.einsum("vij,ji->v", frame_out.phase_points, image) / frame_out.d
        if np.abs(col.imag).max() > 1e-12:
            raise ValueError("channel Wigner function has a non-real component")
        direct[:, u] = col.real

    # Choi route: the stored Choi state carries a 1/d_in normalization, so a
    # compensating d_in appears here to match the direct formula.
    choi = choi_of_channel(ch)
    choi_route = np.empty_like(direct)
    for u in range(n_in):
        au_t = frame_in.phase_points[u].T
        for v in range(n_out):
            val = np.trace(tensor(au_t, frame_out.phase_points[v]) @ choi.matrix)
            choi_route[v, u] = (val * ch.d_in / frame_out.d).real
    gap = np.abs(direct - choi_route).max()
    if gap > _CROSS_CHECK_TOL:
        raise RuntimeError(f"channel Wigner cross-check failed: |direct - choi| = {gap:.3e}")
    return direct


def wigner_of_choi(choi: ChoiState, frame_in: PhaseSpaceFrame, frame_out: PhaseSpaceFrame) -> np.ndarray:
    """Plain two-system Wigner function of a Choi state (no transpose)."""
    d_in, d_out = frame_in.d, frame_out.d
    out = np.empty((d_in**2, d_out**2))
    for u in range(d_in**2):
        for v in range(d_out**2):
            val = np.trace(tensor(frame_in.phase_points[u], frame_out.phase_points[v]) @ choi.matrix)
            out[u, v] = (val / (d_in * d_out)).real
    return out


def mana_channel(ch: KrausChannel, frame: PhaseSpaceFrame) -> float:
    """Mana of a channel: log2 max_u sum_v |W(v|u)|; zero exactly when the
    channel preserves Wigner nonnegativity completely."""
    wig = wigner_of_channel(ch, frame)
    worst = np.abs(wig).sum(axis=0).max()
    return _clamp_mana(np.log2(worst))


def is_cpwp(
    ch: KrausChannel, frame: PhaseSpaceFrame, tol: float = DEFAULT_TOL.mana_zero
) -> tuple[bool, float]:
    """Whether the channel completely preserves Wigner positivity.

    Returns the verdict together with the minimum conditional Wigner value,
    which is what the verdict thresholds on.
    """
    wig = wigner_of_channel(ch, frame)
    min_val = float(wig.min())
    return min_val >= -tol, min_val
