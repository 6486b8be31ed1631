"""Boolean functions and the bit-flip oracle ``|x, y> -> |x, y XOR f(x)>``."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionError, TruthTableError
from .statecore import Gate, RegisterLayout, StateVector


class FunctionClass(str, enum.Enum):
    CONSTANT = "constant"
    BALANCED = "balanced"
    NEITHER = "neither"


@dataclass(frozen=True)
class BooleanFunction:
    """Truth table of ``f: {0,1}^n -> {0,1}``, indexed by ``x`` read big-endian."""

    n: int
    table: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError("a boolean function needs at least one input bit")
        table = tuple(int(v) for v in self.table)
        if len(table) != 1 << self.n:
            raise DimensionError(f"table has {len(table)} entries, expected {1 << self.n}")
        if any(v not in (0, 1) for v in table):
            raise ValueError("table entries must be 0 or 1")
        object.__setattr__(self, "table", table)

    @classmethod
    def from_table(cls, table) -> "BooleanFunction":
        table = tuple(int(v) for v in table)
        size = len(table)
        if size < 2 or size & (size - 1):
            raise DimensionError(f"table length {size} is not a power of two >= 2")
        return cls(size.bit_length() - 1, table)

    @classmethod
    def constant(cls, n: int, value: int) -> "BooleanFunction":
        return cls(n, (value,) * (1 << n))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "BooleanFunction":
        return cls(n, tuple(int(v) for v in rng.integers(0, 2, size=1 << n)))

    @classmethod
    def random_balanced(cls, n: int, rng: np.random.Generator) -> "BooleanFunction":
        size = 1 << n
        table = np.zeros(size, dtype=int)
        table[rng.permutation(size)[: size // 2]] = 1
        return cls(n, tuple(int(v) for v in table))

    def __call__(self, x: int) -> int:
        return self.table[x]

    def text(self) -> str:
        return "".join(str(v) for v in self.table)


def classify(f: BooleanFunction) -> FunctionClass:
    ones = sum(f.table)
    if ones in (0, len(f.table)):
        return FunctionClass.CONSTANT
    if 2 * ones == len(f.table):
        return FunctionClass.BALANCED
    return FunctionClass.NEITHER


def parse_truth_table(text: str) -> BooleanFunction:
    """Parse a single line of ``2**n`` characters from ``{0, 1}``."""
    line = text.strip()
    if "\n" in line or "\r" in line:
        raise TruthTableError("invalid truth table: expected a single line")
    bad = sorted(set(line) - {"0", "1"})
    if bad:
        raise TruthTableError(f"invalid truth table: unexpected character(s) {''.join(bad)!r}")
    size = len(line)
    if size < 2 or size & (size - 1):
        raise TruthTableError(f"invalid truth table: length {size} is not a power of two >= 2")
    return BooleanFunction(size.bit_length() - 1, tuple(int(c) for c in line))


def load_truth_table(path: str | Path) -> BooleanFunction:
    return parse_truth_table(Path(path).read_text(encoding="utf-8"))


def _check_arity(state: StateVector, f: BooleanFunction, layout: RegisterLayout) -> None:
    if layout.n_a != f.n or layout.n_b != 1:
        raise DimensionError(
            f"oracle needs n_a={f.n}, n_b=1; got n_a={layout.n_a}, n_b={layout.n_b}"
        )
    layout.check(state)


def apply_uf(state: StateVector, f: BooleanFunction, layout: RegisterLayout) -> StateVector:
    """Permute amplitudes so that ``(x, y)`` lands on ``(x, y ^ f(x))``."""
    _check_arity(state, f, layout)
    return StateVector._wrap(_permute(state.amps, np.asarray(f.table, dtype=bool)))


def _permute(amps: np.ndarray, flip: np.ndarray) -> np.ndarray:
    out = amps.reshape(-1, 2).copy()
    out[flip] = out[flip, ::-1]
    return out.reshape(-1)


def brute_force_uf(state: StateVector, f: BooleanFunction, layout: RegisterLayout) -> StateVector:
    """Reference oracle: one explicit index computation per basis state."""
    _check_arity(state, f, layout)
    src = state.amps
    out = np.zeros_like(src)
    for index in range(len(src)):
        x = index >> 1
        y = index & 1
        target = (x << 1) | (y ^ f.table[x])
        out[target] = src[index]
    return StateVector._wrap(out)


class OracleGate(Gate):
    """``U_f`` as a gate specification for :func:`qworlds.statecore.apply_gate`."""

    def __init__(self, f: BooleanFunction, layout: RegisterLayout):
        if layout.n_a != f.n or layout.n_b != 1:
            raise DimensionError("oracle layout must have n_a = f.n and n_b = 1")
        self.f = f
        self.layout = layout
        self._flip = np.asarray(f.table, dtype=bool)

    def validate(self, num_qubits):
        if num_qubits != self.layout.num_qubits:
            raise DimensionError(
                f"oracle acts on {self.layout.num_qubits} qubits, state has {num_qubits}"
            )

    def _apply(self, psi, n):
        return _permute(psi, self._flip)

    def __repr__(self):
        return f"OracleGate(f={self.f.text()})"
