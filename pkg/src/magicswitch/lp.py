"""Robustness monotones as l1-minimization linear programs.

Two programs share one solver contract: the state robustness (minimal l1
norm of quasiprobabilities decomposing a state over pure stabilizer
projectors) and the channel robustness (minimal 2p + 1 over differences of
completely stabilizer-preserving channels, parameterized by stabilizer
Choi atoms with explicit trace-preservation marginals).

All Hermitian data is expanded over the orthonormal Pauli basis, so the
solver sees exact real inputs and the trace-preservation rows stay sparse.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from ._simplex import (
    STATUS_INFEASIBLE,
    STATUS_OPTIMAL,
    solve_standard_form,
)
from .channels import DensityOperator, KrausChannel, choi_of_channel
from .config import DEFAULT_TOL
from .gates import PAULI_X, PAULI_Y, PAULI_Z
from .linalg import DimensionMismatchError, pauli_strings, pauli_vectorize

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ExtraEquality:
    """One extra equality row sum_i (plus_i a_i + minus_i b_i) = rhs over the
    split coefficient pair (a_i, b_i) of each atom."""

    plus_coeffs: np.ndarray
    minus_coeffs: np.ndarray
    rhs: float


@dataclass(frozen=True, eq=False)
class AffineL1Problem:
    """min ||q||_1 subject to sum_i q_i atom_i = target plus extra equalities.

    With ``sign_split`` the coefficients are free reals handled as
    q_i = a_i - b_i with a, b >= 0; otherwise the q_i themselves are
    constrained nonnegative.  ``atoms`` holds real vectorized operators,
    one row per atom.
    """

    atoms: np.ndarray
    target: np.ndarray
    extra_equalities: tuple = ()
    sign_split: bool = True

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=float)
        target = np.asarray(self.target, dtype=float)
        if atoms.ndim != 2:
            raise ValueError("atoms must be a 2-d array (one row per atom)")
        if target.shape != (atoms.shape[1],):
            raise DimensionMismatchError(
                f"target length {target.shape} != atom vector length {atoms.shape[1]}"
            )
        for eq in self.extra_equalities:
            if eq.plus_coeffs.shape != (atoms.shape[0],) or eq.minus_coeffs.shape != (atoms.shape[0],):
                raise DimensionMismatchError("extra equality coefficient length != atom count")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "target", target)

    @property
    def n_atoms(self) -> int:
        return self.atoms.shape[0]


@dataclass(frozen=True, eq=False)
class L1Solution:
    """Solver output.

    ``value`` is the optimal l1 norm (for the channel program this equals
    2p + 1 automatically, since the trace row forces sum a - sum b = 1).
    ``coefficients`` are the net per-atom weights a_i - b_i; the split parts
    are kept for consumers that need each side of a channel decomposition.
    """

    value: float
    coefficients: np.ndarray
    status: str
    residual: float
    plus: np.ndarray
    minus: np.ndarray
    dual_gap: float
    renorm_factor: float = 1.0


def _assemble_standard_form(problem: AffineL1Problem):
    A_atoms = problem.atoms.T  # (dim, n_atoms)
    n = problem.n_atoms
    if problem.sign_split:
        A = np.hstack([A_atoms, -A_atoms])
        extra_rows = [
            np.concatenate([eq.plus_coeffs, eq.minus_coeffs])
            for eq in problem.extra_equalities
        ]
    else:
        A = A_atoms.copy()
        extra_rows = [eq.plus_coeffs for eq in problem.extra_equalities]
    if extra_rows:
        A = np.vstack([A, np.array(extra_rows)])
    b = np.concatenate(
        [problem.target, [eq.rhs for eq in problem.extra_equalities]]
    )
    c = np.ones(A.shape[1])
    return A, b, c


def solve_l1(problem: AffineL1Problem, max_iter: int | None = None) -> L1Solution:
    """Solve the l1 program with the embedded simplex.

    Deterministic under the fixed atom ordering; the reconstruction residual
    and the duality gap of the returned basic solution are reported so
    callers can enforce their own floors.
    """
    A, b, c = _assemble_standard_form(problem)
    result = solve_standard_form(A, b, c, max_iter=max_iter)
    n = problem.n_atoms
    if result.status == STATUS_INFEASIBLE:
        status = "infeasible"
    elif result.status == STATUS_OPTIMAL:
        status = "optimal"
    else:
        status = "numerical_failure"
    if status != "optimal":
        nanvec = np.full(n, np.nan)
        return L1Solution(np.nan, nanvec, status, np.nan, nanvec, nanvec, np.nan)
    if problem.sign_split:
        plus, minus = result.x[:n], result.x[n:]
    else:
        plus, minus = result.x, np.zeros(n)
    coeffs = plus - minus
    residual = float(np.abs(A @ result.x - b).max())
    dual_gap = float(abs(result.objective - result.dual @ b))
    return L1Solution(
        value=float(result.objective),
        coefficients=coeffs,
        status=status,
        residual=residual,
        plus=plus,
        minus=minus,
        dual_gap=dual_gap,
    )


@lru_cache(maxsize=None)
def _cached_paulis(n_qubits: int):
    return pauli_strings(n_qubits)


@lru_cache(maxsize=None)
def _state_atom_matrix(dictionary_key):
    dictionary = dictionary_key
    paulis = _cached_paulis(dictionary.n_qubits)
    return np.array([pauli_vectorize(P, paulis) for P in dictionary.projectors])


def rom_state(rho: DensityOperator, dictionary, max_iter: int | None = None) -> L1Solution:
    """Robustness of a state over a stabilizer dictionary.

    Unnormalized inputs are renormalized first and the factor is logged and
    reported on the solution.  Faithful: the value is 1 exactly when the
    state lies in the stabilizer polytope.
    """
    factor = 1.0
    if not rho.normalized or abs(rho.trace - 1.0) > DEFAULT_TOL.psd:
        rho, factor = rho.renormalized()
        logger.info("rom_state renormalized input by factor %.12g", factor)
    if rho.dim != dictionary.dim:
        raise DimensionMismatchError(
            f"state dim {rho.dim} != dictionary dim {dictionary.dim}"
        )
    paulis = _cached_paulis(dictionary.n_qubits)
    atoms = _state_atom_matrix(dictionary)
    target = pauli_vectorize(rho.matrix, paulis)
    problem = AffineL1Problem(atoms=atoms, target=target)
    solution = solve_l1(problem, max_iter=max_iter)
    logger.info("rom_state status=%s value=%.12g", solution.status, solution.value)
    if solution.status == "infeasible":
        raise ValueError("robustness LP infeasible: input is not a valid state")
    return replace(solution, renorm_factor=factor)


@lru_cache(maxsize=None)
def _channel_atom_data(atoms_key):
    atoms = atoms_key
    paulis = _cached_paulis(2)
    atom_matrix = np.array([pauli_vectorize(a.projector, paulis) for a in atoms])
    marg_rows = []
    for pauli in (PAULI_X, PAULI_Y, PAULI_Z):
        marg_rows.append(
            np.array([np.trace(pauli @ a.marginal).real for a in atoms])
        )
    return atom_matrix, marg_rows


def channel_robustness(ch: KrausChannel, atoms, max_iter: int | None = None) -> L1Solution:
    """Channel robustness of a single-qubit channel over Choi atoms.

    The two sides of the decomposition are conic combinations of stabilizer
    Choi projectors; each side separately satisfies the trace-preservation
    marginal (its X, Y, Z components vanish), which together with the Choi
    reconstruction rows makes the optimal l1 norm equal 1 + 2p.
    """
    if ch.d_in != 2 or ch.d_out != 2:
        raise DimensionMismatchError("channel robustness is implemented for qubit channels")
    choi = choi_of_channel(ch)
    paulis = _cached_paulis(2)
    target = pauli_vectorize(choi.matrix, paulis)
    atom_matrix, marg_rows = _channel_atom_data(atoms)
    n = atom_matrix.shape[0]
    zeros = np.zeros(n)
    extras = []
    for row in marg_rows:
        extras.append(ExtraEquality(plus_coeffs=row, minus_coeffs=zeros, rhs=0.0))
        extras.append(ExtraEquality(plus_coeffs=zeros, minus_coeffs=row, rhs=0.0))
    problem = AffineL1Problem(atoms=atom_matrix, target=target, extra_equalities=tuple(extras))
    solution = solve_l1(problem, max_iter=max_iter)
    logger.info("channel_robustness status=%s value=%.12g", solution.status, solution.value)
    return solution


def problem_to_lp_text(problem: AffineL1Problem, name: str = "l1min") -> str:
    """Render the program in CPLEX LP text format for external cross-checks."""
    A, b, _ = _assemble_standard_form(problem)
    n_cols = A.shape[1]
    names = [f"x{j}" for j in range(n_cols)]
    lines = [f"\\ {name}: min l1 over {problem.n_atoms} atoms", "Minimize", " obj: " + " + ".join(names)]
    lines.append("Subject To")
    for i in range(A.shape[0]):
        terms = []
        for j in range(n_cols):
            coef = A[i, j]
            if coef != 0.0:
                terms.append(f"{'+' if coef >= 0 else '-'} {abs(coef):.17g} {names[j]}")
        row = " ".join(terms) if terms else "0 x0"
        lines.append(f" c{i}: {row} = {b[i]:.17g}")
    lines.append("Bounds")
    for nm in names:
        lines.append(f" 0 <= {nm}")
    lines.append("End")
    return "\n".join(lines) + "\n"
