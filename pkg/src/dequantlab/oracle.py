"""Boolean functions and their quantum black-box forms.

A truth table over n-bit inputs is the object every black box wraps.  The
box comes in two faithful forms: the (n+1)-qubit XOR gate
|x>|y> -> |x>|y xor f(x)>, and its n-qubit phase reduction
|x> -> (-1)**f(x) |x>, valid on the span of the |-> ancilla.  Solvers use the
phase form by default; the XOR form exists to validate that reduction.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .qstate import StateVector


class FunctionKind(enum.Enum):
    CONSTANT = "constant"
    BALANCED = "balanced"
    INVALID = "invalid"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class BooleanFunction:
    """Truth table of f : {0,1}^n -> {0,1}.

    ``table[i]`` is f(x) for the big-endian n-bit string x encoded by i.
    """

    table: tuple

    def __post_init__(self):
        size = len(self.table)
        n = size.bit_length() - 1
        if size < 2 or size != 1 << n:
            raise ValueError(f"truth table length {size} is not a power of two >= 2")
        if any(bit not in (0, 1) for bit in self.table):
            raise ValueError("truth table entries must be 0 or 1")
        object.__setattr__(self, "table", tuple(int(b) for b in self.table))

    @classmethod
    def from_int(cls, n: int, value: int) -> "BooleanFunction":
        """Unpack a table from an integer whose top bit is table[0]."""
        size = 1 << n
        if not 0 <= value < (1 << size):
            raise ValueError(f"table integer {value} out of range for n={n}")
        return cls(tuple((value >> (size - 1 - i)) & 1 for i in range(size)))

    @property
    def n(self) -> int:
        return len(self.table).bit_length() - 1

    @property
    def ones_count(self) -> int:
        return sum(self.table)

    def as_int(self) -> int:
        """Pack the table into an integer, table[0] as the top bit."""
        value = 0
        for bit in self.table:
            value = (value << 1) | bit
        return value

    def signs(self) -> np.ndarray:
        """(-1)**f(x) per basis index, as an int8 vector."""
        return np.where(np.asarray(self.table, dtype=np.int8) == 0, 1, -1).astype(np.int8)

    def __call__(self, x: int) -> int:
        return self.table[x]

    def __str__(self) -> str:
        return "".join(str(b) for b in self.table)


@dataclass(frozen=True)
class Classification:
    kind: FunctionKind
    ones_count: int

    @property
    def is_valid(self) -> bool:
        return self.kind is not FunctionKind.INVALID


def classify(f: BooleanFunction) -> Classification:
    """Constant, balanced, or invalid, by counting ones."""
    ones = f.ones_count
    size = len(f.table)
    if ones in (0, size):
        kind = FunctionKind.CONSTANT
    elif 2 * ones == size:
        kind = FunctionKind.BALANCED
    else:
        kind = FunctionKind.INVALID
    return Classification(kind=kind, ones_count=ones)


def negate(f: BooleanFunction) -> BooleanFunction:
    """f'(x) = f(x) xor 1."""
    return BooleanFunction(tuple(1 - b for b in f.table))


def parse_truth_table(text: str, n: int | None = None) -> BooleanFunction:
    """Parse '0011'-style binary or '0x..' hex into a truth table.

    Hex digits expand to four table bits each, so the digit count carries the
    length; pass ``n`` to cross-check the arity either way.
    """
    text = text.strip()
    if not text:
        raise ValueError("empty truth table")
    if text.lower().startswith("0x"):
        digits = text[2:]
        if not digits or any(c not in "0123456789abcdefABCDEF" for c in digits):
            raise ValueError(f"bad hex truth table {text!r}")
        size = 4 * len(digits)
        value = int(digits, 16)
        arity = size.bit_length() - 1
        if size != 1 << arity:
            raise ValueError(
                f"hex table {text!r} has {size} bits, not a power of two"
            )
        f = BooleanFunction.from_int(arity, value)
    else:
        if any(c not in "01" for c in text):
            raise ValueError(f"truth table {text!r} has characters other than 0/1")
        size = len(text)
        if size < 2 or size != 1 << (size.bit_length() - 1):
            raise ValueError(f"truth table length {size} is not a power of two >= 2")
        f = BooleanFunction(tuple(int(c) for c in text))
    if n is not None and f.n != n:
        raise ValueError(f"table {text!r} encodes arity {f.n}, expected n={n}")
    return f


def apply_phase_oracle(f: BooleanFunction, s: StateVector) -> StateVector:
    """Multiply amplitude i by (-1)**f(i); the n-qubit reduced black box."""
    if s.n != f.n:
        raise ValueError(f"state has {s.n} qubits but the function arity is {f.n}")
    return s.with_signs_applied(f.signs())


def apply_xor_oracle(f: BooleanFunction, s: StateVector) -> StateVector:
    """|x>|y> -> |x>|y xor f(x)> on n+1 qubits; a permutation of amplitudes."""
    if s.n != f.n + 1:
        raise ValueError(
            f"XOR oracle needs {f.n + 1} qubits (inputs plus ancilla), state has {s.n}"
        )
    idx = np.arange(s.dim, dtype=np.int64)
    flips = np.asarray(f.table, dtype=np.int64)[idx >> 1]
    return s.permuted(idx ^ flips)


class PhaseOracle:
    """Counting wrapper around the phase black box.

    The counter is plain and not thread-safe; share one wrapper per thread.
    """

    def __init__(self, f: BooleanFunction):
        self.f = f
        self.calls = 0

    def apply(self, s: StateVector) -> StateVector:
        self.calls += 1
        return apply_phase_oracle(self.f, s)


class XorOracle:
    """Counting wrapper around the (n+1)-qubit XOR black box."""

    def __init__(self, f: BooleanFunction):
        self.f = f
        self.calls = 0

    def apply(self, s: StateVector) -> StateVector:
        self.calls += 1
        return apply_xor_oracle(self.f, s)
