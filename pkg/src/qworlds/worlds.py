"""Computational-world decomposition and tracking.

A world is a register-A computational-basis label ``alpha`` together with the
normalized register-B state it is correlated with.  Its weight is the squared
norm of that component, i.e. the Born probability of reading ``alpha`` from
register A.  Phases are folded into the relative state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algorithms import StepTrace
from .errors import DimensionError, ResourceCapError
from .infometrics import shannon_entropy
from .statecore import (
    MAX_QUBITS,
    Gate,
    HadamardLayer,
    RegisterLayout,
    StateVector,
    apply_gate,
    outcome_distribution,
    zero_state,
)

DEFAULT_WORLD_THRESHOLD = 1e-10
DIAGONAL_ATOL = 1e-10


@dataclass(frozen=True)
class World:
    label: str
    weight: float
    relative_state: StateVector

    @property
    def index(self) -> int:
        return int(self.label, 2)


@dataclass(frozen=True)
class WorldDecomposition:
    layout: RegisterLayout
    worlds: tuple[World, ...]
    residual: float

    @property
    def world_count(self) -> int:
        return len(self.worlds)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(w.label for w in self.worlds)

    def world(self, label: str) -> World:
        for w in self.worlds:
            if w.label == label:
                return w
        raise KeyError(label)

    def world_vector(self, world: World) -> StateVector:
        """Full-space unit vector ``|label> ⊗ relative_state``."""
        a = np.zeros(1 << self.layout.n_a, dtype=np.complex128)
        a[world.index] = 1.0
        return StateVector._wrap(np.kron(a, world.relative_state.amps))

    def reconstruct(self) -> np.ndarray:
        """Sum of ``sqrt(weight) * world_vector``; omits sub-threshold mass."""
        out = np.zeros(1 << self.layout.num_qubits, dtype=np.complex128)
        for w in self.worlds:
            out += np.sqrt(w.weight) * self.world_vector(w).amps
        return out


def _label(index: int, width: int) -> str:
    return format(index, f"0{width}b")


def decompose(
    state: StateVector, layout: RegisterLayout, threshold: float = DEFAULT_WORLD_THRESHOLD
) -> WorldDecomposition:
    layout.check(state)
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie strictly between 0 and 1")
    block = state.amps.reshape(1 << layout.n_a, 1 << layout.n_b)
    weights = np.sum(np.abs(block) ** 2, axis=1)
    worlds = []
    residual = 0.0
    for alpha, w in enumerate(weights):
        w = float(w)
        if w > threshold:
            rel = StateVector._wrap(block[alpha] / np.sqrt(w))
            worlds.append(World(_label(alpha, layout.n_a), w, rel))
        else:
            residual += w
    return WorldDecomposition(layout, tuple(worlds), residual)


def world_count_after_hadamard1(n: int, threshold: float = DEFAULT_WORLD_THRESHOLD) -> int:
    if n < 1:
        raise DimensionError("register A needs at least one qubit")
    if n + 1 > MAX_QUBITS:
        raise ResourceCapError(f"n={n} needs {n + 1} qubits, cap is {MAX_QUBITS}")
    state = apply_gate(zero_state(n + 1), HadamardLayer(range(n)))
    return decompose(state, RegisterLayout(n, 1), threshold).world_count


@dataclass(frozen=True)
class InterferenceMatrix:
    """Label-subspace mass transfer of each world under a prospective gate.

    ``mass[i, j]`` is the squared norm that world ``labels[i]`` sends into label
    ``labels[j]``.  ``leakage[i]`` collects mass sent to labels that carry no
    world in the decomposition, so ``mass[i].sum() + leakage[i] == 1``.
    """

    labels: tuple[str, ...]
    mass: np.ndarray
    leakage: np.ndarray

    def off_diagonal(self) -> float:
        """Largest mass any world sends away from its own label."""
        if not self.labels:
            return 0.0
        return float(np.max(1.0 - np.diag(self.mass)))

    def is_diagonal(self, atol: float = DIAGONAL_ATOL) -> bool:
        off = self.mass - np.diag(np.diag(self.mass))
        return bool(np.all(off < atol) and np.all(self.leakage < atol))


def interference_matrix(decomp: WorldDecomposition, next_gate: Gate) -> InterferenceMatrix:
    if decomp.world_count < 1:
        raise ValueError("decomposition has no worlds")
    layout = decomp.layout
    next_gate.validate(layout.num_qubits)
    idx = [w.index for w in decomp.worlds]
    m = len(idx)
    mass = np.zeros((m, m))
    leakage = np.zeros(m)
    for i, w in enumerate(decomp.worlds):
        out = apply_gate(decomp.world_vector(w), next_gate).amps
        per_label = np.sum(np.abs(out.reshape(1 << layout.n_a, -1)) ** 2, axis=1)
        mass[i] = per_label[idx]
        leakage[i] = max(0.0, float(per_label.sum() - mass[i].sum()))
    return InterferenceMatrix(decomp.labels, mass, leakage)


@dataclass(frozen=True)
class StepWorlds:
    step_index: int
    stage: str
    world_count: int
    decomposition: WorldDecomposition


@dataclass(frozen=True)
class WorldEvent:
    step_index: int
    kind: str  # "split" | "merge" | "stable"
    count_before: int
    count_after: int


@dataclass(frozen=True)
class Reappearance:
    """A label that vanished below threshold and later came back.

    Counted as merge then split; identity across the gap is not asserted.
    """

    step_index: int
    label: str
    last_seen: int


@dataclass
class WorldTrace:
    per_step: list[StepWorlds] = field(default_factory=list)
    events: list[WorldEvent] = field(default_factory=list)
    reappearances: list[Reappearance] = field(default_factory=list)

    @property
    def counts(self) -> list[int]:
        return [s.world_count for s in self.per_step]

    def events_of(self, kind: str) -> list[WorldEvent]:
        return [e for e in self.events if e.kind == kind]


def track(
    trace: StepTrace, layout: RegisterLayout, threshold: float = DEFAULT_WORLD_THRESHOLD
) -> WorldTrace:
    if len(trace) == 0:
        raise ValueError("trace is empty")
    out = WorldTrace()
    last_seen: dict[str, int] = {}
    prev_labels: set[str] = set()
    for step in trace:
        d = decompose(step.state, layout, threshold)
        out.per_step.append(StepWorlds(step.step_index, step.stage, d.world_count, d))
        labels = set(d.labels)
        for lab in sorted(labels - prev_labels):
            if lab in last_seen:
                out.reappearances.append(Reappearance(step.step_index, lab, last_seen[lab]))
        for lab in labels:
            last_seen[lab] = step.step_index
        prev_labels = labels
    for before, after in zip(out.per_step, out.per_step[1:]):
        p, q = before.world_count, after.world_count
        kind = "split" if q > p else "merge" if q < p else "stable"
        out.events.append(WorldEvent(after.step_index, kind, p, q))
    return out


@dataclass(frozen=True)
class InformationAudit:
    worlds_max: int
    bits_per_world: int
    classical_bits_to_describe: int
    retrievable_bits: float


def audit_information(
    trace: StepTrace, layout: RegisterLayout, threshold: float = DEFAULT_WORLD_THRESHOLD
) -> InformationAudit:
    """Compare what the run holds in its worlds with what a readout can return.

    ``retrievable_bits`` is the Shannon entropy of the register-A distribution
    that the final measurement samples from (the last pre-measurement state).
    """
    if len(trace) == 0:
        raise ValueError("trace is empty")
    wt = track(trace, layout, threshold)
    steps = trace.steps
    readout = steps[-1]
    if readout.stage == "measurement" and len(steps) > 1:
        readout = steps[-2]
    dist = outcome_distribution(readout.state, layout.a_qubits)
    return InformationAudit(
        worlds_max=max(wt.counts),
        bits_per_world=layout.n_b,
        classical_bits_to_describe=2**layout.num_qubits,
        retrievable_bits=shannon_entropy(dist),
    )
