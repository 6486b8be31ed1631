"""Dense state-vector and density-matrix kernel.

Bit convention: qubit 0 is the most significant bit of a basis index, so for
``n`` qubits the basis index of bits ``b0 b1 ... b(n-1)`` is
``sum(b_k << (n - 1 - k))``.  Registers are laid out with register A first.

All public functions have value semantics: they never modify their inputs and
never return arrays that alias them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, NotUnitaryError, ResourceCapError

MAX_QUBITS = 24
MAX_FULL_MATRIX_QUBITS = 8
# Eigenvalue validation of density matrices is skipped above this dimension.
MAX_EIGEN_CHECK_DIM = 2**8

UNITARY_ATOL = 1e-12
NORM_ATOL = 1e-10
HERMITIAN_ATOL = 1e-12
TRACE_ATOL = 1e-10
EIGEN_FLOOR = -1e-10

_SQRT1_2 = 1.0 / np.sqrt(2.0)
HADAMARD = np.array([[_SQRT1_2, _SQRT1_2], [_SQRT1_2, -_SQRT1_2]], dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
IDENTITY_2 = np.eye(2, dtype=np.complex128)


def ry(theta: float) -> np.ndarray:
    """Real rotation about Y: ``|0> -> cos(t/2)|0> + sin(t/2)|1>``."""
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def _num_qubits_for(dim: int) -> int:
    if dim < 1 or dim & (dim - 1):
        raise DimensionError(f"dimension {dim} is not a power of two")
    return dim.bit_length() - 1


def _check_cap(num_qubits: int) -> None:
    if num_qubits > MAX_QUBITS:
        raise ResourceCapError(f"{num_qubits} qubits exceeds cap of {MAX_QUBITS}")


class StateVector:
    """Unit-norm complex amplitude array over ``2**num_qubits`` basis states.

    A zero-qubit state (a single unit amplitude) is permitted; it is what a
    world's relative state looks like when register B is empty.
    """

    __slots__ = ("_amps", "num_qubits")

    def __init__(self, amps: Iterable[complex] | np.ndarray, *, atol: float = NORM_ATOL):
        a = np.array(amps, dtype=np.complex128).reshape(-1)
        n = _num_qubits_for(a.size)
        _check_cap(n)
        if not np.all(np.isfinite(a)):
            raise ValueError("amplitudes must be finite")
        norm2 = float(np.vdot(a, a).real)
        if abs(norm2 - 1.0) > atol:
            raise ValueError(f"state is not normalized (squared norm {norm2!r})")
        a.flags.writeable = False
        self._amps = a
        self.num_qubits = n

    @classmethod
    def _wrap(cls, a: np.ndarray) -> "StateVector":
        # Trusted construction for kernel outputs; caller owns ``a``.
        obj = cls.__new__(cls)
        a.flags.writeable = False
        obj._amps = a
        obj.num_qubits = a.size.bit_length() - 1
        return obj

    @classmethod
    def from_unnormalized(cls, amps: Iterable[complex] | np.ndarray) -> "StateVector":
        a = np.array(amps, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(a)
        if norm == 0.0 or not np.isfinite(norm):
            raise ValueError("cannot normalize a zero or non-finite vector")
        return cls(a / norm)

    @property
    def amps(self) -> np.ndarray:
        return self._amps

    @property
    def dim(self) -> int:
        return self._amps.size

    def norm(self) -> float:
        return float(np.linalg.norm(self._amps))

    def tensor(self, other: "StateVector") -> "StateVector":
        """``self ⊗ other``; ``self`` occupies the high-order qubits."""
        _check_cap(self.num_qubits + other.num_qubits)
        return StateVector._wrap(np.kron(self._amps, other._amps))

    def __len__(self) -> int:
        return self._amps.size

    def __repr__(self) -> str:
        return f"StateVector(num_qubits={self.num_qubits}, amps={np.array2string(self._amps, precision=4)})"


class DensityMatrix:
    """Hermitian, trace-one, positive semidefinite operator."""

    __slots__ = ("_m", "num_qubits")

    def __init__(self, matrix: np.ndarray | Sequence[Sequence[complex]]):
        m = np.array(matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"density matrix must be square, got shape {m.shape}")
        n = _num_qubits_for(m.shape[0])
        if not np.all(np.isfinite(m)):
            raise ValueError("density matrix entries must be finite")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_ATOL:
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_ATOL:
            raise ValueError(f"density matrix trace is {tr!r}, expected 1")
        if m.shape[0] <= MAX_EIGEN_CHECK_DIM:
            lo = np.linalg.eigvalsh(m).min()
            if lo < EIGEN_FLOOR:
                raise ValueError(f"density matrix has negative eigenvalue {lo!r}")
        m.flags.writeable = False
        self._m = m
        self.num_qubits = n

    @classmethod
    def _wrap(cls, m: np.ndarray) -> "DensityMatrix":
        obj = cls.__new__(cls)
        m.flags.writeable = False
        obj._m = m
        obj.num_qubits = m.shape[0].bit_length() - 1
        return obj

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    @property
    def dim(self) -> int:
        return self._m.shape[0]

    def purity(self) -> float:
        return float(np.real(np.trace(self._m @ self._m)))

    def __repr__(self) -> str:
        return f"DensityMatrix(num_qubits={self.num_qubits})"


@dataclass(frozen=True)
class RegisterLayout:
    """Split of the qubits into register A (world labels) and register B.

    Register A holds the high-order qubits ``0 .. n_a - 1``.
    """

    n_a: int
    n_b: int

    def __post_init__(self):
        if self.n_a < 1:
            raise DimensionError("register A needs at least one qubit")
        if self.n_b < 0:
            raise DimensionError("register B cannot have negative size")

    @property
    def num_qubits(self) -> int:
        return self.n_a + self.n_b

    @property
    def a_qubits(self) -> tuple[int, ...]:
        return tuple(range(self.n_a))

    @property
    def b_qubits(self) -> tuple[int, ...]:
        return tuple(range(self.n_a, self.n_a + self.n_b))

    def check(self, state: StateVector) -> None:
        if state.num_qubits != self.num_qubits:
            raise DimensionError(
                f"layout covers {self.num_qubits} qubits but state has {state.num_qubits}"
            )


# --------------------------------------------------------------------------- gates


def _check_unitary(u: np.ndarray) -> None:
    if not np.all(np.isfinite(u)):
        raise NotUnitaryError("gate matrix has non-finite entries")
    err = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if err > UNITARY_ATOL:
        raise NotUnitaryError(f"gate matrix deviates from unitarity by {err:.3g}")


def _as_2x2(matrix) -> np.ndarray:
    u = np.array(matrix, dtype=np.complex128)
    if u.shape != (2, 2):
        raise DimensionError(f"expected a 2x2 matrix, got shape {u.shape}")
    _check_unitary(u)
    u.flags.writeable = False
    return u


def _check_qubit(q: int, n: int) -> None:
    if not isinstance(q, (int, np.integer)) or not 0 <= q < n:
        raise DimensionError(f"qubit index {q!r} out of range for {n} qubits")


def _apply_1q(psi: np.ndarray, u: np.ndarray, q: int, n: int) -> np.ndarray:
    # View the amplitude array as (high bits, target bit, low bits) strides.
    t = psi.reshape(1 << q, 2, 1 << (n - q - 1))
    return np.einsum("ij,ajb->aib", u, t).reshape(-1)


class Gate:
    """Base for gate specifications understood by :func:`apply_gate`."""

    def validate(self, num_qubits: int) -> None:
        raise NotImplementedError

    def _apply(self, psi: np.ndarray, n: int) -> np.ndarray:
        raise NotImplementedError


class SingleQubitGate(Gate):
    def __init__(self, matrix, target: int):
        self.matrix = _as_2x2(matrix)
        self.target = target

    def validate(self, num_qubits):
        _check_qubit(self.target, num_qubits)

    def _apply(self, psi, n):
        return _apply_1q(psi, self.matrix, self.target, n)

    def __repr__(self):
        return f"SingleQubitGate(target={self.target})"


class ControlledGate(Gate):
    """Applies ``matrix`` to ``target`` on the control-is-1 subspace."""

    def __init__(self, matrix, control: int, target: int):
        if control == target:
            raise DimensionError("control and target must differ")
        self.matrix = _as_2x2(matrix)
        self.control = control
        self.target = target

    def validate(self, num_qubits):
        _check_qubit(self.control, num_qubits)
        _check_qubit(self.target, num_qubits)

    def _apply(self, psi, n):
        c, t = self.control, self.target
        out = psi.reshape(1 << c, 2, 1 << (n - c - 1)).copy()
        sub = out[:, 1, :]
        # Inside the control=1 slice the target moves down one position if it
        # sat below the control.
        t_sub = t if t < c else t - 1
        out[:, 1, :] = _apply_1q(sub.reshape(-1), self.matrix, t_sub, n - 1).reshape(sub.shape)
        return out.reshape(-1)

    def __repr__(self):
        return f"ControlledGate(control={self.control}, target={self.target})"


class HadamardLayer(Gate):
    def __init__(self, targets: Iterable[int]):
        self.targets = tuple(targets)
        if len(set(self.targets)) != len(self.targets):
            raise DimensionError("duplicate Hadamard targets")

    def validate(self, num_qubits):
        for q in self.targets:
            _check_qubit(q, num_qubits)

    def _apply(self, psi, n):
        for q in self.targets:
            psi = _apply_1q(psi, HADAMARD, q, n)
        return psi

    def __repr__(self):
        return f"HadamardLayer(targets={list(self.targets)})"


class FullMatrixGate(Gate):
    """Explicit ``2**n x 2**n`` unitary over the whole register (n <= 8)."""

    def __init__(self, matrix):
        u = np.array(matrix, dtype=np.complex128)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise DimensionError(f"full-matrix gate must be square, got {u.shape}")
        n = _num_qubits_for(u.shape[0])
        if n > MAX_FULL_MATRIX_QUBITS:
            raise ResourceCapError(
                f"full-matrix gates are limited to {MAX_FULL_MATRIX_QUBITS} qubits"
            )
        _check_unitary(u)
        u.flags.writeable = False
        self.matrix = u
        self.num_qubits = n

    def validate(self, num_qubits):
        if num_qubits != self.num_qubits:
            raise DimensionError(
                f"gate acts on {self.num_qubits} qubits, state has {num_qubits}"
            )

    def _apply(self, psi, n):
        return self.matrix @ psi

    def __repr__(self):
        return f"FullMatrixGate(num_qubits={self.num_qubits})"


def hadamard(target: int) -> SingleQubitGate:
    return SingleQubitGate(HADAMARD, target)


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Return ``gate`` applied to ``state``; the input is left untouched."""
    gate.validate(state.num_qubits)
    out = gate._apply(state.amps, state.num_qubits)
    if out is state.amps or np.shares_memory(out, state.amps):
        out = out.copy()
    return StateVector._wrap(np.ascontiguousarray(out, dtype=np.complex128))


def apply_gates(state: StateVector, gates: Iterable[Gate]) -> StateVector:
    for g in gates:
        state = apply_gate(state, g)
    return state


def gate_matrix(gate: Gate, num_qubits: int) -> np.ndarray:
    """Materialize ``gate`` as a dense matrix (small registers only)."""
    if num_qubits > MAX_FULL_MATRIX_QUBITS:
        raise ResourceCapError("refusing to materialize a gate above 8 qubits")
    gate.validate(num_qubits)
    dim = 1 << num_qubits
    cols = [gate._apply(np.eye(dim, dtype=np.complex128)[:, k], num_qubits) for k in range(dim)]
    return np.stack(cols, axis=1)


# ------------------------------------------------------------------ construction


def zero_state(num_qubits: int) -> StateVector:
    return basis_state(num_qubits, 0)


def basis_state(num_qubits: int, index: int) -> StateVector:
    if num_qubits < 1:
        raise DimensionError("need at least one qubit")
    _check_cap(num_qubits)
    dim = 1 << num_qubits
    if not 0 <= index < dim:
        raise DimensionError(f"basis index {index} out of range for {num_qubits} qubits")
    a = np.zeros(dim, dtype=np.complex128)
    a[index] = 1.0
    return StateVector._wrap(a)


def haar_state(num_qubits: int, rng: np.random.Generator) -> StateVector:
    """Haar-random pure state."""
    dim = 1 << num_qubits
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return StateVector._wrap(v / np.linalg.norm(v))


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


# ------------------------------------------------------------------ measurement


@dataclass(frozen=True)
class MeasurementRecord:
    qubit: int
    outcome: int
    probability: float
    post_state: StateVector


def _check_qubit_set(qubits: Sequence[int], n: int) -> tuple[int, ...]:
    qs = tuple(int(q) for q in qubits)
    if not qs:
        raise DimensionError("qubit set must be non-empty")
    for q in qs:
        _check_qubit(q, n)
    if len(set(qs)) != len(qs):
        raise DimensionError("duplicate qubit indices")
    return qs


def outcome_distribution(state: StateVector, qubits: Sequence[int]) -> np.ndarray:
    """Exact Born probabilities for the joint outcome of ``qubits``.

    Outcome ``k`` encodes the measured bits with ``qubits[0]`` most significant.
    """
    n = state.num_qubits
    qs = _check_qubit_set(qubits, n)
    p = (np.abs(state.amps) ** 2).reshape((2,) * n)
    rest = tuple(q for q in range(n) if q not in qs)
    marg = p.sum(axis=rest) if rest else p
    # Remaining axes are in ascending qubit order; permute to the requested one.
    kept = sorted(qs)
    marg = np.transpose(marg, [kept.index(q) for q in qs])
    return np.ascontiguousarray(marg).reshape(-1)


def _project(state: StateVector, qs: tuple[int, ...], outcome: int) -> np.ndarray:
    n = state.num_qubits
    t = state.amps.reshape((2,) * n).copy()
    k = len(qs)
    for pos, q in enumerate(qs):
        bit = (outcome >> (k - 1 - pos)) & 1
        idx = [slice(None)] * n
        idx[q] = 1 - bit
        t[tuple(idx)] = 0.0
    return t.reshape(-1)


def _sample(probs: np.ndarray, rng_seed: int) -> int:
    rng = np.random.default_rng(rng_seed)
    cdf = np.cumsum(probs)
    k = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    if k >= probs.size:
        k = int(np.flatnonzero(probs)[-1])
    return k


def measure_register(
    state: StateVector, qubits: Sequence[int], rng_seed: int
) -> tuple[int, float, StateVector]:
    """Jointly measure ``qubits``; returns (outcome, probability, post_state)."""
    qs = _check_qubit_set(qubits, state.num_qubits)
    probs = outcome_distribution(state, qs)
    k = _sample(probs, rng_seed)
    post = _project(state, qs, k)
    post /= np.linalg.norm(post)
    return k, float(probs[k]), StateVector._wrap(post)


def measure_qubit(state: StateVector, qubit: int, rng_seed: int) -> MeasurementRecord:
    outcome, prob, post = measure_register(state, (qubit,), rng_seed)
    return MeasurementRecord(qubit=qubit, outcome=outcome, probability=prob, post_state=post)


# ------------------------------------------------------------------ products


def inner_product(a: StateVector, b: StateVector) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    if a.num_qubits != b.num_qubits:
        raise DimensionError("states have different qubit counts")
    return complex(np.vdot(a.amps, b.amps))


def fidelity(a: StateVector, b: StateVector) -> float:
    """``|<a|b>|``; equals 1 exactly when the states agree up to global phase."""
    return abs(inner_product(a, b))


def density_from_state(state: StateVector) -> DensityMatrix:
    a = state.amps
    return DensityMatrix._wrap(np.outer(a, a.conj()))


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Trace out every qubit not in ``keep``; kept qubits stay in ascending order."""
    n = rho.num_qubits
    kept = sorted(_check_qubit_set(tuple(keep), n))
    t = rho.matrix.reshape((2,) * (2 * n))
    cur = n
    for q in reversed([q for q in range(n) if q not in kept]):
        t = np.trace(t, axis1=q, axis2=q + cur)
        cur -= 1
    d = 1 << len(kept)
    return DensityMatrix._wrap(np.ascontiguousarray(t).reshape(d, d))


def reduced_density(state: StateVector, keep: Iterable[int]) -> DensityMatrix:
    """Reduced density matrix of a pure state without forming the full projector."""
    n = state.num_qubits
    kept = sorted(_check_qubit_set(tuple(keep), n))
    rest = [q for q in range(n) if q not in kept]
    t = np.transpose(state.amps.reshape((2,) * n), kept + rest)
    m = t.reshape(1 << len(kept), -1)
    return DensityMatrix._wrap(m @ m.conj().T)
