"""Dephasing and system-environment entanglement.

Two models of losing interference terms in the system's computational
(decoherence) basis:

* ``dephase``: off-diagonals shrink by ``exp(-gamma)`` per step.
* ``entangle_environment``: environment qubit ``k`` starts in ``|0>`` and at
  every step is rotated by ``R_y(angles[k])`` conditioned on system qubit
  ``k mod m``.  Branches of the system that differ on that qubit drive the
  environment qubit apart, so their coherence is multiplied by
  ``|cos(t * angle / 2)|`` after ``t`` steps.  A finite environment is
  periodic and therefore revives coherence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError, ResourceCapError
from .statecore import (
    MAX_QUBITS,
    ControlledGate,
    DensityMatrix,
    StateVector,
    apply_gate,
    reduced_density,
    ry,
    zero_state,
)

DEFAULT_BRANCH_THRESHOLD = 1e-6
DEFAULT_WINDOW_FRACTION = 0.25


def dephase(rho: DensityMatrix, gamma: float, steps: int) -> list[DensityMatrix]:
    """Iterate the dephasing channel; entry ``t`` is the state after ``t`` steps."""
    if gamma < 0 or not math.isfinite(gamma):
        raise ValueError("gamma must be finite and non-negative")
    if steps < 0:
        raise ValueError("steps must be non-negative")
    factor = math.exp(-gamma)
    off = ~np.eye(rho.dim, dtype=bool)
    out = [rho]
    m = rho.matrix
    for _ in range(steps):
        m = m.copy()
        m[off] *= factor
        out.append(DensityMatrix._wrap(m))
    return out


@dataclass(frozen=True)
class EnvironmentModel:
    coupling_angles: tuple[float, ...]
    rng_seed: int = 0
    env_qubits: int = field(default=-1)

    def __post_init__(self):
        angles = tuple(float(a) for a in self.coupling_angles)
        if not all(math.isfinite(a) for a in angles):
            raise ValueError("coupling angles must be finite")
        if self.env_qubits == -1:
            object.__setattr__(self, "env_qubits", len(angles))
        elif self.env_qubits != len(angles):
            raise ValueError("env_qubits must equal the number of coupling angles")
        object.__setattr__(self, "coupling_angles", angles)

    @classmethod
    def random(
        cls, env_qubits: int, rng_seed: int, low: float = 0.0, high: float = math.pi
    ) -> "EnvironmentModel":
        rng = np.random.default_rng(rng_seed)
        return cls(tuple(rng.uniform(low, high, size=env_qubits)), rng_seed)


@dataclass(frozen=True)
class EnvironmentStep:
    t: int
    joint: StateVector
    reduced: DensityMatrix


def entangle_environment(
    system: StateVector, env: EnvironmentModel, steps: int
) -> list[EnvironmentStep]:
    """Entry ``t`` holds the joint state and the system's reduced state after ``t`` steps."""
    m = system.num_qubits
    if m < 1:
        raise DimensionError("system needs at least one qubit")
    if m + env.env_qubits > MAX_QUBITS:
        raise ResourceCapError(
            f"{m} system + {env.env_qubits} environment qubits exceeds cap of {MAX_QUBITS}"
        )
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if env.env_qubits:
        joint = system.tensor(zero_state(env.env_qubits))
    else:
        joint = system
    gates = [
        ControlledGate(ry(theta), control=k % m, target=m + k)
        for k, theta in enumerate(env.coupling_angles)
    ]
    keep = range(m)
    out = [EnvironmentStep(0, joint, reduced_density(joint, keep))]
    for t in range(1, steps + 1):
        for g in gates:
            joint = apply_gate(joint, g)
        out.append(EnvironmentStep(t, joint, reduced_density(joint, keep)))
    return out


@dataclass(frozen=True)
class CoherenceSample:
    t: int
    offdiag_norm: float


@dataclass(frozen=True)
class CoherenceSeries:
    samples: tuple[CoherenceSample, ...]

    @property
    def values(self) -> np.ndarray:
        return np.array([s.offdiag_norm for s in self.samples])

    def __len__(self):
        return len(self.samples)


def offdiag_norm(rho: DensityMatrix) -> float:
    """Largest off-diagonal magnitude in the computational basis."""
    a = np.abs(rho.matrix)
    if a.shape[0] == 1:
        return 0.0
    return float(np.max(a[~np.eye(a.shape[0], dtype=bool)]))


def coherence_series(states: Sequence[DensityMatrix | EnvironmentStep]) -> CoherenceSeries:
    samples = []
    for t, s in enumerate(states):
        rho = s.reduced if isinstance(s, EnvironmentStep) else s
        samples.append(CoherenceSample(t, offdiag_norm(rho)))
    return CoherenceSeries(tuple(samples))


@dataclass(frozen=True)
class BranchReport:
    classification: str  # "branch" | "world_point_in_time" | "coherent"
    series: CoherenceSeries
    threshold: float
    window: int
    # True when threshold/window were not chosen by the caller.
    defaults_used: bool = False


def default_window(length: int) -> int:
    return max(1, math.ceil(DEFAULT_WINDOW_FRACTION * length))


def branch_stability(
    series: CoherenceSeries, threshold: float | None = None, window: int | None = None
) -> BranchReport:
    """Branch: suppressed for the whole final window.  World: suppressed at
    some sample but not persistently.  Coherent: never suppressed."""
    if len(series) == 0:
        raise ValueError("coherence series is empty")
    defaults = threshold is None or window is None
    threshold = DEFAULT_BRANCH_THRESHOLD if threshold is None else threshold
    window = default_window(len(series)) if window is None else window
    if not 1 <= window <= len(series):
        raise ValueError(f"window must be in 1..{len(series)}")
    below = series.values < threshold
    if np.all(below[-window:]):
        kind = "branch"
    elif np.any(below):
        kind = "world_point_in_time"
    else:
        kind = "coherent"
    return BranchReport(kind, series, threshold, window, defaults)


def cat_state() -> StateVector:
    """``(|00> + |11>)/sqrt(2)``: qubit 0 is the microsystem, qubit 1 the cat."""
    s = 1.0 / math.sqrt(2.0)
    return StateVector([s, 0.0, 0.0, s])


def predicted_offdiag(angles: Sequence[float], t: int) -> float:
    """Closed-form reduced coherence of a single system qubit after ``t`` steps."""
    return 0.5 * float(np.prod([abs(math.cos(t * a / 2.0)) for a in angles]))


def dyadic_angles(k: int) -> tuple[float, ...]:
    """Angles ``pi, pi/2, ..., pi/2**(k-1)``.

    At every step ``1 <= t < 2**k`` some environment qubit sits at exactly
    ``pi/2`` rotation, so the coherence is zero for that whole stretch and
    first revives at ``t = 2**k``.
    """
    return tuple(math.pi / 2**j for j in range(k))
