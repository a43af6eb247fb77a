"""N-qubit state vectors with an exact integer fast path.

States are stored either as a vector of dyadic integers ``d`` with an implicit
scale, amplitude[i] = d[i] * 2**(-scale2/2), or as plain complex doubles.  The
integer form is closed under the Hadamard butterfly, tensor products and sign
flips, so every state reachable from a basis state through those operations
keeps exact amplitudes.  Sign states (all amplitudes +-2**(-n/2)), which every
phase black box produces from the equal superposition, are the special case
d[i] in {+1, -1}, scale2 = n; separability decisions on them never touch a
float.

Index convention: basis index i spells the bit string big-endian, qubit 0 is
the most significant bit (|00> -> 0, |01> -> 1, |10> -> 2, |11> -> 3).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

DEFAULT_MAX_QUBITS = 24
MAX_QUBITS_ENV = "DEQUANTLAB_MAX_QUBITS"

NORM_TOL = 1e-12


class ResourceLimitError(RuntimeError):
    """Requested state exceeds the configured qubit ceiling."""


def max_qubits() -> int:
    """State-size ceiling; override with the DEQUANTLAB_MAX_QUBITS env var."""
    raw = os.environ.get(MAX_QUBITS_ENV)
    if raw is None:
        return DEFAULT_MAX_QUBITS
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{MAX_QUBITS_ENV} must be an integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"{MAX_QUBITS_ENV} must be >= 1, got {value}")
    return value


def _check_qubit_count(n: int) -> None:
    if n < 1:
        raise ValueError(f"qubit count must be >= 1, got {n}")
    limit = max_qubits()
    if n > limit:
        raise ResourceLimitError(
            f"{n} qubits exceeds the ceiling of {limit} "
            f"(set {MAX_QUBITS_ENV} to raise it)"
        )


class StateVector:
    """Immutable n-qubit pure state.

    Use :meth:`from_amplitudes`, :meth:`from_signs` or :func:`make_basis_state`
    to construct one; arithmetic lives in module-level functions.
    """

    __slots__ = ("n", "_ints", "_scale2", "_amps")

    def __init__(self, n, ints=None, scale2=None, amps=None):
        # Internal; go through the classmethod constructors.
        self.n = n
        self._ints = ints
        self._scale2 = scale2
        self._amps = amps

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_amplitudes(cls, amplitudes) -> "StateVector":
        """Build a general-complex state from 2**n amplitudes (unit norm)."""
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1).copy()
        size = amps.size
        n = size.bit_length() - 1
        if size < 2 or size != 1 << n:
            raise ValueError(f"amplitude count {size} is not a power of two >= 2")
        _check_qubit_count(n)
        norm2 = float(np.sum(amps.real * amps.real + amps.imag * amps.imag))
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized: |amplitudes|^2 sums to {norm2!r}")
        amps.flags.writeable = False
        return cls(n, amps=amps)

    @classmethod
    def from_signs(cls, signs) -> "StateVector":
        """Build the exact sign state with amplitudes signs[i] * 2**(-n/2)."""
        d = np.asarray(signs, dtype=np.int64).reshape(-1).copy()
        size = d.size
        n = size.bit_length() - 1
        if size < 2 or size != 1 << n:
            raise ValueError(f"sign count {size} is not a power of two >= 2")
        if not np.all(np.abs(d) == 1):
            raise ValueError("signs must all be +1 or -1")
        _check_qubit_count(n)
        d.flags.writeable = False
        return cls(n, ints=d, scale2=n)

    @classmethod
    def _exact(cls, ints, scale2: int) -> "StateVector":
        """Reduced, validated dyadic-integer state (internal)."""
        d = np.asarray(ints, dtype=np.int64)
        size = d.size
        n = size.bit_length() - 1
        if size != 1 << n or n < 1:
            raise ValueError(f"integer vector length {size} is not a power of two >= 2")
        # Strip shared factors of two so equal states compare equal.
        while scale2 >= 2 and not np.any(d & 1):
            d = d >> 1
            scale2 -= 2
        peak = int(np.max(np.abs(d))) if size else 0
        if peak >= 1 << 31:
            raise ResourceLimitError("exact amplitudes exceed the supported integer range")
        norm2 = int(np.sum(d * d))
        if scale2 < 0 or norm2 != 1 << scale2:
            raise ValueError("exact state is not normalized")
        d = d.copy()
        d.flags.writeable = False
        return cls(n, ints=d, scale2=scale2)

    # -- inspection ------------------------------------------------------

    @property
    def dim(self) -> int:
        return 1 << self.n

    @property
    def is_exact(self) -> bool:
        """True when amplitudes are held as exact dyadic integers."""
        return self._ints is not None

    @property
    def representation(self) -> str:
        """'exact-sign' for +-2**(-n/2) sign states, else 'general-complex'."""
        if (
            self.is_exact
            and self._scale2 == self.n
            and bool(np.all(np.abs(self._ints) == 1))
        ):
            return "exact-sign"
        return "general-complex"

    @property
    def int_data(self):
        """Integer amplitude numerators, or None on the float path."""
        return self._ints

    @property
    def scale2(self):
        """Exponent e with amplitude = int_data * 2**(-e/2); None if float."""
        return self._scale2

    @property
    def amplitudes(self) -> np.ndarray:
        """Amplitudes as a read-only complex array."""
        if self._amps is None:
            amps = self._ints * (2.0 ** (-self._scale2 / 2)) + 0j
            amps.flags.writeable = False
            self._amps = amps
        return self._amps

    def signs(self) -> np.ndarray:
        """The +-1 vector of an exact-sign state."""
        if self.representation != "exact-sign":
            raise ValueError("state is not in the exact-sign representation")
        return self._ints

    def probabilities(self) -> np.ndarray:
        """Basis-outcome probabilities; exact dyadics on the integer path."""
        if self.is_exact:
            return (self._ints * self._ints) * (2.0 ** (-self._scale2))
        a = self._amps
        return a.real * a.real + a.imag * a.imag

    # -- transformed copies (used by the oracle layer) --------------------

    def with_signs_applied(self, signs) -> "StateVector":
        """New state with amplitude[i] multiplied by signs[i] in {+1, -1}."""
        s = np.asarray(signs)
        if s.size != self.dim:
            raise ValueError("sign vector length does not match the state")
        if self.is_exact:
            return StateVector._exact(self._ints * s.astype(np.int64), self._scale2)
        amps = self._amps * s
        amps.flags.writeable = False
        return StateVector(self.n, amps=amps)

    def permuted(self, source_index) -> "StateVector":
        """New state with amplitude[i] = old amplitude[source_index[i]]."""
        src = np.asarray(source_index)
        if src.size != self.dim:
            raise ValueError("permutation length does not match the state")
        if self.is_exact:
            return StateVector._exact(self._ints[src], self._scale2)
        amps = self._amps[src].copy()
        amps.flags.writeable = False
        return StateVector(self.n, amps=amps)

    # -- dunder ------------------------------------------------------------

    def __repr__(self) -> str:
        return f"StateVector(n={self.n}, representation={self.representation!r})"


@dataclass(frozen=True)
class MeasurementDistribution:
    """Probabilities over computational-basis outcomes of measured qubits.

    No collapse is modeled; the full marginal distribution is returned.
    Zero-probability outcomes are omitted from ``outcomes``.
    """

    bits: int
    outcomes: dict = field(default_factory=dict)

    def __post_init__(self):
        total = 0.0
        for outcome, p in self.outcomes.items():
            if not 0 <= outcome < (1 << self.bits):
                raise ValueError(f"outcome {outcome} out of range for {self.bits} bits")
            if p < -NORM_TOL or p > 1 + NORM_TOL:
                raise ValueError(f"probability {p} outside [0, 1]")
            total += p
        if abs(total - 1.0) > NORM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")

    def probability(self, outcome: int) -> float:
        return self.outcomes.get(outcome, 0.0)

    def sample(self, rng: np.random.Generator) -> int:
        """Draw one outcome with a seeded generator (demo helper)."""
        keys = sorted(self.outcomes)
        probs = np.array([self.outcomes[k] for k in keys])
        return int(rng.choice(keys, p=probs / probs.sum()))


def make_basis_state(n: int, i: int) -> StateVector:
    """|i> on n qubits: amplitude 1 at basis index i, 0 elsewhere."""
    _check_qubit_count(n)
    if not 0 <= i < (1 << n):
        raise ValueError(f"basis index {i} out of range for {n} qubits")
    d = np.zeros(1 << n, dtype=np.int64)
    d[i] = 1
    return StateVector._exact(d, 0)


def _butterfly(data):
    """Unnormalized in-place Walsh-Hadamard transform, O(n * 2**n)."""
    out = data.copy()
    size = out.size
    h = 1
    while h < size:
        view = out.reshape(-1, 2, h)
        lower = view[:, 0, :] - view[:, 1, :]
        view[:, 0, :] += view[:, 1, :]
        view[:, 1, :] = lower
        h *= 2
    return out


def hadamard_all(s: StateVector) -> StateVector:
    """Apply the Hadamard gate to every qubit (H tensor n)."""
    if s.is_exact:
        return StateVector._exact(_butterfly(s.int_data), s.scale2 + s.n)
    amps = _butterfly(s.amplitudes) * (2.0 ** (-s.n / 2))
    amps.flags.writeable = False
    return StateVector(s.n, amps=amps)


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Tensor product; index layout i * 2**n_b + j for amplitudes a_i b_j."""
    n = a.n + b.n
    limit = max_qubits()
    if n > limit:
        raise ResourceLimitError(
            f"tensor product needs {n} qubits, above the ceiling of {limit} "
            f"(set {MAX_QUBITS_ENV} to raise it)"
        )
    if a.is_exact and b.is_exact:
        return StateVector._exact(np.kron(a.int_data, b.int_data), a.scale2 + b.scale2)
    amps = np.kron(a.amplitudes, b.amplitudes)
    amps.flags.writeable = False
    return StateVector(n, amps=amps)


def equal_up_to_global_phase(a: StateVector, b: StateVector, tol: float = 1e-9) -> bool:
    """True when a = lambda * b for some unit-modulus scalar lambda.

    lambda is fixed by the first amplitude of b whose magnitude exceeds tol.
    Exact integer states short-circuit to an errorless comparison.
    """
    if a.n != b.n:
        raise ValueError(f"qubit counts differ: {a.n} != {b.n}")
    if a.is_exact and b.is_exact and a.scale2 == b.scale2:
        if np.array_equal(a.int_data, b.int_data):
            return True
        if np.array_equal(a.int_data, -b.int_data):
            return True
    av, bv = a.amplitudes, b.amplitudes
    mags = np.abs(bv)
    above = np.nonzero(mags > tol)[0]
    if above.size == 0:
        return False
    j = above[0]
    lam = av[j] / bv[j]
    scale = abs(lam)
    if scale < tol:
        return False
    lam /= scale
    return bool(np.linalg.norm(av - lam * bv) < tol)


def measure_distribution(s: StateVector, qubits) -> MeasurementDistribution:
    """Marginal outcome distribution of the listed qubits, in listed order."""
    qubits = list(qubits)
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"duplicate qubit indices in {qubits}")
    if not qubits:
        raise ValueError("at least one qubit must be measured")
    for q in qubits:
        if not 0 <= q < s.n:
            raise ValueError(f"qubit index {q} out of range for {s.n} qubits")
    probs = s.probabilities()
    idx = np.arange(s.dim, dtype=np.int64)
    outcome = np.zeros(s.dim, dtype=np.int64)
    m = len(qubits)
    for pos, q in enumerate(qubits):
        bit = (idx >> (s.n - 1 - q)) & 1
        outcome |= bit << (m - 1 - pos)
    merged = np.bincount(outcome, weights=probs, minlength=1 << m)
    outcomes = {int(k): float(p) for k, p in enumerate(merged) if p != 0.0}
    return MeasurementDistribution(bits=m, outcomes=outcomes)
