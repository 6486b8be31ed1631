"""Deutsch and Deutsch-Jozsa runs with a recorded state after every stage."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

from .errors import DimensionError, PromiseViolation, ResourceCapError
from .oracle import BooleanFunction, FunctionClass, OracleGate, classify
from .statecore import (
    MAX_QUBITS,
    Gate,
    HadamardLayer,
    RegisterLayout,
    StateVector,
    apply_gate,
    basis_state,
    measure_register,
    outcome_distribution,
)

Stage = Literal["init", "hadamard1", "manipulation", "hadamard2", "measurement"]
STAGES: tuple[str, ...] = ("init", "hadamard1", "manipulation", "hadamard2", "measurement")


@dataclass(frozen=True)
class TraceStep:
    step_index: int
    description: str
    stage: str
    state: StateVector
    # Unitary that produced this step from the previous one; None for the
    # initial state and for measurement.
    gate: Gate | None = None


@dataclass
class StepTrace:
    steps: list[TraceStep] = field(default_factory=list)

    def append(self, description: str, stage: str, state: StateVector, gate: Gate | None = None):
        if stage not in STAGES:
            raise ValueError(f"unknown stage {stage!r}")
        self.steps.append(TraceStep(len(self.steps), description, stage, state, gate))

    def stage(self, name: str) -> TraceStep:
        for s in self.steps:
            if s.stage == name:
                return s
        raise KeyError(name)

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)


@dataclass(frozen=True)
class DeutschResult:
    """Outcome of a Deutsch or Deutsch-Jozsa run.

    ``outcome`` is the sampled register-A value and ``outcome_bit`` is 0 iff it
    is all zeros.  ``outcome_probability`` is the exact probability of the
    sampled outcome class (all-zero versus anything else).
    """

    outcome_bit: int
    outcome_probability: float
    verdict: str
    trace: StepTrace
    outcome: int = 0
    p_all_zero: float = 1.0


def _run(f: BooleanFunction, rng_seed: int, names: tuple[str, str]) -> DeutschResult:
    n = f.n
    if n + 1 > MAX_QUBITS:
        raise ResourceCapError(f"n={n} needs {n + 1} qubits, cap is {MAX_QUBITS}")
    layout = RegisterLayout(n, 1)
    reg_a = layout.a_qubits
    trace = StepTrace()

    state = basis_state(n + 1, 1)
    trace.append(f"prepare |{'0' * n}>|1>", "init", state)

    h1 = HadamardLayer(range(n + 1))
    state = apply_gate(state, h1)
    trace.append("Hadamard on every qubit", "hadamard1", state, h1)

    uf = OracleGate(f, layout)
    state = apply_gate(state, uf)
    trace.append(f"apply U_f for f={f.text()}", "manipulation", state, uf)

    h2 = HadamardLayer(reg_a)
    state = apply_gate(state, h2)
    trace.append(f"Hadamard on {names[0]}", "hadamard2", state, h2)

    p_zero = float(outcome_distribution(state, reg_a)[0])
    outcome, _, post = measure_register(state, reg_a, rng_seed)
    trace.append(f"measure {names[1]}", "measurement", post)

    bit = 0 if outcome == 0 else 1
    verdict = FunctionClass.CONSTANT if p_zero > 0.5 else FunctionClass.BALANCED
    return DeutschResult(
        outcome_bit=bit,
        outcome_probability=p_zero if bit == 0 else 1.0 - p_zero,
        verdict=verdict.value,
        trace=trace,
        outcome=outcome,
        p_all_zero=p_zero,
    )


def deutsch_run(f: BooleanFunction, rng_seed: int = 0) -> DeutschResult:
    if f.n != 1:
        raise DimensionError(f"Deutsch's algorithm takes a 1-bit function, got n={f.n}")
    return _run(f, rng_seed, ("qubit a", "qubit a"))


def pipeline_run(f: BooleanFunction, rng_seed: int = 0) -> DeutschResult:
    """Hadamard-1, oracle, Hadamard-2 and joint readout of register A.

    Raises :class:`PromiseViolation` unless ``f`` is constant or balanced.
    """
    cls = classify(f)
    if cls is FunctionClass.NEITHER:
        raise PromiseViolation(f"function {f.text()} is neither constant nor balanced")
    return _run(f, rng_seed, ("register A", "register A"))


class ClassicalOracle:
    """Table lookup that counts how often it has been consulted."""

    def __init__(self, f: BooleanFunction):
        self.f = f
        self.queries = 0

    def query(self, x: int) -> int:
        if not 0 <= x < len(self.f.table):
            raise DimensionError(f"query point {x} outside 0..{len(self.f.table) - 1}")
        self.queries += 1
        return self.f(x)


def classical_single_query(f: BooleanFunction, x: int) -> int:
    return ClassicalOracle(f).query(x)


def classical_trace(f: BooleanFunction, x: int) -> StepTrace:
    """One-query classical evaluation written as basis-state steps.

    The register holds ``|x>|0>`` then ``|x>|f(x)>``; nothing is ever in
    superposition, so any world decomposition of it has a single world.
    """
    n = f.n
    bit = classical_single_query(f, x)
    trace = StepTrace()
    trace.append(f"load x={x}", "init", basis_state(n + 1, x << 1))
    trace.append("evaluate f(x) into register B", "manipulation", basis_state(n + 1, (x << 1) | bit))
    trace.append("read register B", "measurement", basis_state(n + 1, (x << 1) | bit))
    return trace
