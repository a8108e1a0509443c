"""Enumeration of pure stabilizer states for one and two qubits.

The dictionary of stabilizer projectors is the atom set for both robustness
linear programs and for membership tests.  States are produced as the orbit
of |0...0> under the generated Clifford group and stored phase-free as
projectors, labeled by canonical stabilizer-group generators so the ordering
is deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import DEFAULT_TOL
from .gates import CNOT_01, CNOT_10, HADAMARD, PHASE_S, basis_state
from .linalg import DimensionMismatchError, dagger, partial_trace, pauli_strings, tensor

_DEDUP_TOL = 1e-8


def _clifford_generators(n_qubits: int) -> list[np.ndarray]:
    if n_qubits == 1:
        return [HADAMARD, PHASE_S]
    eye = np.eye(2, dtype=complex)
    return [
        tensor(HADAMARD, eye),
        tensor(eye, HADAMARD),
        tensor(PHASE_S, eye),
        tensor(eye, PHASE_S),
        CNOT_01,
        CNOT_10,
    ]


def _orbit_of_zero(n_qubits: int) -> list[np.ndarray]:
    """Breadth-first orbit of |0..0><0..0| under the Clifford generators."""
    gens = _clifford_generators(n_qubits)
    start = basis_state(2**n_qubits, 0)
    seed = np.outer(start, start.conj())
    found = [seed]
    frontier = [seed]
    while frontier:
        fresh = []
        for proj in frontier:
            for g in gens:
                cand = g @ proj @ dagger(g)
                if not any(np.abs(cand - known).max() <= _DEDUP_TOL for known in found):
                    found.append(cand)
                    fresh.append(cand)
        frontier = fresh
    return found


def _generator_label(proj: np.ndarray, n_qubits: int) -> str:
    """Canonical label from the state's stabilizer-group generators.

    A pure stabilizer projector is (1/d) sum over its group, so the signed
    members are exactly the Pauli strings with overlap trace +-1.  Sorting
    the non-identity members by Pauli label and greedily taking independent
    ones yields a canonical generating set (for n <= 2 any distinct members
    are independent).
    """
    members = []
    for label, pauli in pauli_strings(n_qubits):
        if label == "I" * n_qubits:
            continue
        coeff = np.trace(proj @ pauli).real
        if abs(abs(coeff) - 1.0) <= 1e-8:
            members.append(("+" if coeff > 0 else "-") + label)
    members.sort(key=lambda s: s[1:] + s[0])
    gens = members[:n_qubits]
    if len(gens) != n_qubits:
        raise RuntimeError(f"projector yields {len(gens)} generators, expected {n_qubits}")
    return ",".join(gens)


@dataclass(frozen=True, eq=False)
class StabilizerDictionary:
    """All pure stabilizer projectors on ``n_qubits`` qubits.

    ``projectors[k]`` corresponds to ``labels[k]``; ordering is sorted by
    label, so LP atom order (and hence every LP answer) is reproducible.
    """

    n_qubits: int
    projectors: tuple
    labels: tuple

    def __len__(self) -> int:
        return len(self.projectors)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits


@lru_cache(maxsize=None)
def enumerate_stabilizer_states(n_qubits: int) -> StabilizerDictionary:
    """Build the complete stabilizer dictionary for ``n_qubits`` in {1, 2}.

    Counts follow 2^n prod_{k=1..n} (2^k + 1): 6 single-qubit states, 60
    two-qubit states.  The count is verified after enumeration.
    """
    if n_qubits not in (1, 2):
        raise ValueError(f"n_qubits={n_qubits} unsupported; only 1 and 2 are enumerated")
    projs = _orbit_of_zero(n_qubits)
    expected = 2**n_qubits
    for k in range(1, n_qubits + 1):
        expected *= 2**k + 1
    if len(projs) != expected:
        raise RuntimeError(f"enumerated {len(projs)} states, expected {expected}")
    labeled = sorted(
        ((_generator_label(P, n_qubits), P) for P in projs), key=lambda pair: pair[0]
    )
    labels = tuple(lbl for lbl, _ in labeled)
    ordered = tuple(P for _, P in labeled)
    for P in ordered:
        P.setflags(write=False)
    return StabilizerDictionary(n_qubits=n_qubits, projectors=ordered, labels=labels)


def is_stabilizer_state(rho, dictionary: StabilizerDictionary, tol: float = DEFAULT_TOL.lp_value) -> bool:
    """Membership test via the robustness LP: free iff the value is 1."""
    from .lp import rom_state

    solution = rom_state(rho, dictionary)
    if solution.status != "optimal":
        raise RuntimeError(f"robustness LP returned status {solution.status}")
    return solution.value <= 1.0 + tol


@dataclass(frozen=True, eq=False)
class ChoiAtom:
    """A two-qubit stabilizer projector viewed as a Choi-space atom.

    ``marginal`` is the partial trace over the output (second) factor; the
    channel-robustness LP constrains mixtures of these marginals to be
    proportional to the identity.
    """

    projector: np.ndarray
    marginal: np.ndarray
    label: str


@lru_cache(maxsize=None)
def cspo_choi_atoms(dictionary: StabilizerDictionary) -> tuple:
    """Pair each two-qubit stabilizer projector with its output marginal."""
    if dictionary.n_qubits != 2:
        raise DimensionMismatchError("Choi atoms need the two-qubit dictionary")
    atoms = []
    for proj, label in zip(dictionary.projectors, dictionary.labels):
        marginal = partial_trace(proj, [2, 2], keep=0)
        marginal.setflags(write=False)
        atoms.append(ChoiAtom(projector=proj, marginal=marginal, label=label))
    return tuple(atoms)


def dictionary_to_json(dictionary: StabilizerDictionary) -> str:
    """Serialize labels plus flattened complex entries for external checks."""
    states = []
    for label, proj in zip(dictionary.labels, dictionary.projectors):
        flat = [[float(z.real), float(z.imag)] for z in proj.reshape(-1)]
        states.append({"label": label, "entries": flat})
    payload = {"n_qubits": dictionary.n_qubits, "count": len(dictionary), "states": states}
    return json.dumps(payload, indent=2)


def dictionary_from_json(text: str) -> StabilizerDictionary:
    payload = json.loads(text)
    n = int(payload["n_qubits"])
    d = 2**n
    projs = []
    labels = []
    for entry in payload["states"]:
        flat = np.array([complex(re, im) for re, im in entry["entries"]])
        projs.append(flat.reshape(d, d))
        labels.append(entry["label"])
    return StabilizerDictionary(n_qubits=n, projectors=tuple(projs), labels=tuple(labels))
