"""Shannon and von Neumann entropies and the preparation/measurement bounds.

All entropies are in bits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError, ResourceCapError
from .statecore import (
    EIGEN_FLOOR,
    HERMITIAN_ATOL,
    MAX_FULL_MATRIX_QUBITS,
    DensityMatrix,
    FullMatrixGate,
    Gate,
    HadamardLayer,
    StateVector,
    apply_gate,
    basis_state,
    density_from_state,
    gate_matrix,
    haar_state,
    haar_unitary,
    outcome_distribution,
)

BOUND_SLACK = 1e-9


def shannon_entropy(dist: Sequence[float] | np.ndarray) -> float:
    p = np.asarray(dist, dtype=float).reshape(-1)
    if p.size == 0:
        raise ValueError("empty distribution")
    if np.any(p < 0):
        raise ValueError("probabilities must be non-negative")
    if abs(p.sum() - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {p.sum()!r}, expected 1")
    nz = p[p > 0]
    return float(max(0.0, -np.sum(nz * np.log2(nz))))


def von_neumann_entropy(rho: DensityMatrix | np.ndarray) -> float:
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError("density matrix must be square")
    if np.max(np.abs(m - m.conj().T)) > HERMITIAN_ATOL:
        raise ValueError("matrix is not Hermitian within tolerance")
    lam = np.linalg.eigvalsh(m)
    if lam.min() < EIGEN_FLOOR:
        raise ValueError(f"eigenvalue {lam.min()!r} below {EIGEN_FLOOR}")
    lam = lam[lam > 0]
    return float(max(0.0, -np.sum(lam * np.log2(lam))))


@dataclass(frozen=True)
class EntropyReport:
    shannon_bits: float
    von_neumann_bits: float
    bound_satisfied: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "bound_satisfied", self.shannon_bits >= self.von_neumann_bits - BOUND_SLACK
        )

    @property
    def slack(self) -> float:
        return self.shannon_bits - self.von_neumann_bits


@dataclass(frozen=True)
class Ensemble:
    """Preparation ensemble: state ``states[i]`` is prepared with ``probs[i]``."""

    probs: tuple[float, ...]
    states: tuple[StateVector, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        states = tuple(self.states)
        if len(probs) != len(states) or not probs:
            raise ValueError("need one probability per member and at least one member")
        if any(p < 0 for p in probs) or abs(sum(probs) - 1.0) > 1e-12:
            raise ValueError("ensemble probabilities must be non-negative and sum to 1")
        if len({s.num_qubits for s in states}) != 1:
            raise DimensionError("ensemble members have different qubit counts")
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "states", states)

    @classmethod
    def of(cls, members: Sequence[tuple[float, StateVector]]) -> "Ensemble":
        return cls(tuple(p for p, _ in members), tuple(s for _, s in members))

    def mixture(self) -> DensityMatrix:
        m = sum(p * np.outer(s.amps, s.amps.conj()) for p, s in zip(self.probs, self.states))
        return DensityMatrix._wrap(np.asarray(m, dtype=np.complex128))


def preparation_entropy(ensemble: Ensemble) -> EntropyReport:
    return EntropyReport(
        shannon_entropy(ensemble.probs), von_neumann_entropy(ensemble.mixture())
    )


def measurement_entropy(state: StateVector | DensityMatrix, basis: Gate) -> EntropyReport:
    """Outcome entropy of a full computational-basis readout after ``basis``.

    Mixed inputs are rotated as ``U rho U^dagger``, which needs the dense gate
    matrix and is therefore limited to small registers.
    """
    if isinstance(state, DensityMatrix):
        u = gate_matrix(basis, state.num_qubits)
        rotated = u @ state.matrix @ u.conj().T
        dist = np.clip(np.real(np.diag(rotated)), 0.0, None)
        return EntropyReport(shannon_entropy(dist / dist.sum()), von_neumann_entropy(state))
    rotated = apply_gate(state, basis)
    dist = outcome_distribution(rotated, range(state.num_qubits))
    return EntropyReport(shannon_entropy(dist), von_neumann_entropy(density_from_state(state)))


def random_product_basis(num_qubits: int, rng: np.random.Generator) -> FullMatrixGate:
    u = np.ones((1, 1), dtype=np.complex128)
    for _ in range(num_qubits):
        u = np.kron(u, haar_unitary(2, rng))
    return FullMatrixGate(u)


@dataclass(frozen=True)
class StorageBoundReport:
    n_qubits: int
    max_retrievable_bits: float
    battery_size: int
    exceeded: bool


def storage_retrieval_bound(
    n_qubits: int, seed: int = 0, random_states: int = 100
) -> StorageBoundReport:
    """Largest readout entropy over a fixed battery of pure states and bases.

    Battery: every computational basis state read in the computational basis,
    the uniform superposition read in the computational basis, and
    ``random_states`` Haar states read in random product bases.
    """
    if not 1 <= n_qubits <= MAX_FULL_MATRIX_QUBITS:
        raise ResourceCapError(f"n_qubits must be in 1..{MAX_FULL_MATRIX_QUBITS}")
    rng = np.random.default_rng(seed)
    identity = HadamardLayer(())
    values = []
    for k in range(1 << n_qubits):
        values.append(measurement_entropy(basis_state(n_qubits, k), identity).shannon_bits)
    uniform = apply_gate(basis_state(n_qubits, 0), HadamardLayer(range(n_qubits)))
    values.append(measurement_entropy(uniform, identity).shannon_bits)
    for _ in range(random_states):
        psi = haar_state(n_qubits, rng)
        values.append(measurement_entropy(psi, random_product_basis(n_qubits, rng)).shannon_bits)
    top = max(values)
    return StorageBoundReport(
        n_qubits=n_qubits,
        max_retrievable_bits=top,
        battery_size=len(values),
        exceeded=top > n_qubits + BOUND_SLACK,
    )


@dataclass(frozen=True)
class OutputParity:
    quantum_bits: float
    classical_bits: float


def deutsch_output_parity(x: int = 0) -> OutputParity:
    """Output entropy of one Deutsch run versus one classical query.

    Both are taken over the four 1-bit functions drawn uniformly: the quantum
    output is the measured bit of qubit a, the classical output is ``f(x)``.
    """
    from .algorithms import classical_single_query, deutsch_run
    from .oracle import BooleanFunction

    functions = [BooleanFunction(1, t) for t in ((0, 0), (0, 1), (1, 0), (1, 1))]
    q = np.zeros(2)
    c = np.zeros(2)
    for f in functions:
        p0 = deutsch_run(f).p_all_zero
        q += np.array([p0, 1.0 - p0]) / len(functions)
        c[classical_single_query(f, x)] += 1.0 / len(functions)
    return OutputParity(shannon_entropy(q), shannon_entropy(c))
