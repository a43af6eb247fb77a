"""Separability structure of pure n-qubit states.

Two independent decision routes are implemented on purpose:

* the pair-product test: amplitudes must satisfy
  alpha[i] * alpha[K-1-i] = c_k for each level k = 2..n (K = 2**k), checking
  only the leading K amplitudes per level, with the level constants free;
* direct factorization: peel qubits left to right by rank-1 splits of the
  2 x 2**(n-1) amplitude matrix.

On states with no zero amplitude the two must agree (the census and the
acceptance suite cross-check them exhaustively at small n).  Every test runs
in exact integer arithmetic whenever the state carries the dyadic-integer
representation, so no separability verdict hinges on floating error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .oracle import BooleanFunction
from .qstate import StateVector, make_basis_state, tensor

RANK_TOL = 1e-10
ZERO_AMPLITUDE_TOL = 1e-12


@dataclass(frozen=True)
class PairProductLevel:
    """Outcome of one level of the pair-product test.

    ``span`` = 2**k is the number of leading amplitudes the level constrains;
    the pairs are (i, span-1-i) for i < span/2.  ``constant`` holds the common
    product when the level is consistent, otherwise ``violation`` names the
    first two pair indices (a, b) whose products differ.
    """

    k: int
    span: int
    constant: complex | None
    violation: tuple | None

    @property
    def consistent(self) -> bool:
        return self.violation is None


@dataclass(frozen=True)
class PairProductReport:
    """Verdict and per-level constants of the pair-product test."""

    invariant: bool
    precondition_met: bool
    levels: tuple

    @property
    def first_violation(self) -> tuple | None:
        """(k, a, b) of the first failing level, or None."""
        for level in self.levels:
            if not level.consistent:
                return (level.k, *level.violation)
        return None


@dataclass(frozen=True)
class ProductFactorization:
    """Single-qubit factors whose tensor product rebuilds a state.

    Factors are unit 2-vectors with their first nonzero component real and
    positive; the removed phases are collected in ``global_phase``.
    """

    factors: tuple
    global_phase: complex

    def reconstruct(self) -> StateVector:
        """Tensor the factors back together, exactly when they are dyadic."""
        parts = []
        exact = _phase_as_exact_sign(self.global_phase) is not None
        for qubit_state in self.factors:
            part = _factor_as_exact(qubit_state) if exact else None
            if part is None:
                exact = False
                break
            parts.append(part)
        if exact:
            sign = _phase_as_exact_sign(self.global_phase)
            state = parts[0].with_signs_applied(np.full(2, sign, dtype=np.int64))
            for part in parts[1:]:
                state = tensor(state, part)
            return state
        amps = np.array([self.global_phase], dtype=np.complex128)
        for qubit_state in self.factors:
            amps = np.kron(amps, np.asarray(qubit_state, dtype=np.complex128))
        return StateVector.from_amplitudes(amps)


@dataclass(frozen=True)
class Entangled:
    """Non-product verdict; ``qubit`` is the first index whose cut fails."""

    qubit: int


def _phase_as_exact_sign(phase):
    if phase == 1 or phase == 1.0 + 0j:
        return 1
    if phase == -1 or phase == -1.0 + 0j:
        return -1
    return None


def _factor_as_exact(qubit_state):
    """Map a dyadic single-qubit factor to an exact StateVector, else None."""
    a, b = complex(qubit_state[0]), complex(qubit_state[1])
    if a.imag != 0 or b.imag != 0:
        return None
    root_half = 2.0 ** (-0.5)
    for ints, scale2 in (
        ((1, 0), 0),
        ((0, 1), 0),
        ((1, 1), 1),
        ((1, -1), 1),
    ):
        expect = np.array(ints) * (root_half if scale2 else 1.0)
        if a.real == expect[0] and b.real == expect[1]:
            return StateVector._exact(np.array(ints, dtype=np.int64), scale2)
    return None


def pair_product_invariant(s: StateVector, tol: float = RANK_TOL) -> PairProductReport:
    """Run the pair-product test level by level.

    The separability equivalence needs every amplitude nonzero; when that
    precondition fails the mechanical test still runs but the report flags it
    and callers should fall back to :func:`factor_product_state`.
    """
    if s.n < 2:
        raise ValueError(f"pair-product test needs n >= 2, got n={s.n}")
    if s.is_exact:
        data = s.int_data
        precondition = bool(np.all(data != 0))
    else:
        data = s.amplitudes
        precondition = bool(np.all(np.abs(data) >= ZERO_AMPLITUDE_TOL))
    scale = 2.0 ** (-s.scale2) if s.is_exact else 1.0

    levels = []
    invariant = True
    for k in range(2, s.n + 1):
        span = 1 << k
        half = span >> 1
        products = data[:half] * data[span - 1 : half - 1 : -1]
        if s.is_exact:
            mismatch = np.nonzero(products != products[0])[0]
        else:
            mismatch = np.nonzero(np.abs(products - products[0]) > tol)[0]
        if mismatch.size:
            violation = (0, int(mismatch[0]))
            constant = None
            invariant = False
        else:
            violation = None
            constant = complex(products[0] * scale)
        levels.append(
            PairProductLevel(k=k, span=span, constant=constant, violation=violation)
        )
    return PairProductReport(
        invariant=invariant, precondition_met=precondition, levels=tuple(levels)
    )


def _split_rows(data: np.ndarray, n: int, qubit: int):
    """The two half-vectors of amplitudes with the given qubit at 0 and 1."""
    blocks = data.reshape(1 << qubit, 2, 1 << (n - 1 - qubit))
    return blocks[:, 0, :].reshape(-1), blocks[:, 1, :].reshape(-1)


def _exact_two_row_ratio(r0, r1):
    """For unit-norm dyadic states, rank 1 forces r1 = lam * r0 with
    lam in {0, +1, -1} or r0 = 0; returns lam ('inf' for r0 = 0) or None."""
    if not r0.any():
        return "inf"
    if not r1.any():
        return 0
    if np.array_equal(r0, r1):
        return 1
    if np.array_equal(r0, -r1):
        return -1
    return None


def qubit_separable(s: StateVector, i: int, tol: float = RANK_TOL) -> bool:
    """True when qubit i factors out of the state (rank-1 split along i)."""
    if not 0 <= i < s.n:
        raise ValueError(f"qubit index {i} out of range for {s.n} qubits")
    if s.n == 1:
        return True
    if s.is_exact:
        r0, r1 = _split_rows(s.int_data, s.n, i)
        return _exact_two_row_ratio(r0, r1) is not None
    r0, r1 = _split_rows(s.amplitudes, s.n, i)
    m0 = np.abs(r0).max()
    m1 = np.abs(r1).max()
    if m0 <= tol or m1 <= tol:
        return True
    if m0 >= m1:
        pivot, other = r0, r1
    else:
        pivot, other = r1, r0
    j = int(np.argmax(np.abs(pivot)))
    lam = other[j] / pivot[j]
    return bool(np.abs(other - lam * pivot).max() <= tol)


def _matrix_rank_is_one(matrix: np.ndarray, exact: bool, tol: float) -> bool:
    """Rank-1 test by cross products against the largest pivot entry."""
    absm = np.abs(matrix)
    flat = int(np.argmax(absm))
    pr, pc = divmod(flat, matrix.shape[1])
    if exact:
        if matrix[pr, pc] == 0:
            return False
        cross = matrix * matrix[pr, pc] - np.outer(matrix[:, pc], matrix[pr, :])
        return bool(np.all(cross == 0))
    peak = absm[pr, pc]
    if peak <= tol:
        return False
    ratios = matrix[:, pc] / matrix[pr, pc]
    residual = matrix - np.outer(ratios, matrix[pr, :])
    return bool(np.abs(residual).max() <= tol)


def bipartition_separable(s: StateVector, subset, tol: float = RANK_TOL) -> bool:
    """True when the state is a product across the (subset, rest) cut."""
    subset = sorted(set(subset))
    if not subset:
        raise ValueError("subset must be nonempty")
    if len(subset) >= s.n:
        raise ValueError("subset must be a proper subset of the qubits")
    for q in subset:
        if not 0 <= q < s.n:
            raise ValueError(f"qubit index {q} out of range for {s.n} qubits")
    rest = [q for q in range(s.n) if q not in subset]
    data = s.int_data if s.is_exact else s.amplitudes
    cube = data.reshape([2] * s.n)
    matrix = cube.transpose(subset + rest).reshape(1 << len(subset), -1)
    return _matrix_rank_is_one(matrix, s.is_exact, tol)


def _canonical_factor(vec: np.ndarray, tol: float):
    """(unit factor with leading component real positive, removed phase)."""
    norm = np.linalg.norm(vec)
    if norm <= tol:
        raise ValueError("zero-norm quotient: malformed input state")
    unit = vec / norm
    lead = unit[0] if abs(unit[0]) > tol else unit[1]
    phase = lead / abs(lead)
    return unit / phase, phase


def _factor_exact(data, scale2, n):
    """Peel an exact dyadic state; returns (factors, phase) or failing qubit."""
    factors = []
    for q in range(n - 1):
        half = data.size >> 1
        r0, r1 = data[:half], data[half:]
        lam = _exact_two_row_ratio(r0, r1)
        if lam is None:
            return None, None, q
        if lam == "inf":
            factors.append(np.array([0.0, 1.0], dtype=np.complex128))
            data = r1
        elif lam == 0:
            factors.append(np.array([1.0, 0.0], dtype=np.complex128))
            data = r0
        else:
            root_half = 2.0 ** (-0.5)
            factors.append(np.array([root_half, lam * root_half], dtype=np.complex128))
            data = r0
            scale2 -= 1
    # Last qubit: whatever remains, with its sign pulled out as the phase.
    a, b = data
    lead = a if a != 0 else b
    sign = 1 if lead > 0 else -1
    vec = data * (sign * 2.0 ** (-scale2 / 2))
    factors.append(vec.astype(np.complex128))
    return tuple(factors), complex(sign), None


def factor_product_state(s: StateVector, tol: float = RANK_TOL):
    """Factor a state into single-qubit tensor factors, or report Entangled.

    Qubits are peeled left to right; the first failing rank-1 cut names the
    entangled qubit.  Entangled is an ordinary result, not an error.
    """
    if s.n == 1:
        factor, phase = _canonical_factor(s.amplitudes.copy(), tol)
        return ProductFactorization(factors=(factor,), global_phase=complex(phase))
    if s.is_exact:
        factors, phase, failed = _factor_exact(s.int_data, s.scale2, s.n)
        if failed is None:
            return ProductFactorization(factors=factors, global_phase=phase)
        return Entangled(qubit=failed)

    data = s.amplitudes.copy()
    factors = []
    for q in range(s.n - 1):
        matrix = data.reshape(2, -1)
        norms = np.linalg.norm(matrix, axis=1)
        if norms[0] <= tol or norms[1] <= tol:
            keep = int(norms[1] > norms[0])
            qubit_vec = np.zeros(2, dtype=np.complex128)
            qubit_vec[keep] = 1.0
            quotient = matrix[keep]
            removed = 1.0 + 0j
        else:
            j = int(np.argmax(np.abs(matrix[0]) ** 2 + np.abs(matrix[1]) ** 2))
            column = matrix[:, j]
            qubit_vec = column / np.linalg.norm(column)
            quotient = qubit_vec.conj() @ matrix
            residual = matrix - np.outer(qubit_vec, quotient)
            if np.abs(residual).max() > tol:
                return Entangled(qubit=q)
            qubit_vec, removed = _canonical_factor(qubit_vec, tol)
        factors.append(qubit_vec)
        quot_norm = np.linalg.norm(quotient)
        if quot_norm <= tol:
            raise ValueError("zero-norm quotient: malformed input state")
        # The phase removed from the factor rides along on the quotient so
        # that factor (x) quotient keeps rebuilding the original block pair.
        data = quotient * (removed / quot_norm)
    factor, removed = _canonical_factor(data, tol)
    factors.append(factor)
    return ProductFactorization(factors=tuple(factors), global_phase=complex(removed))


def n2_separability_condition(f: BooleanFunction) -> bool:
    """The 2-qubit black-box product test: f(00)+f(11) = f(01)+f(10) mod 2."""
    if f.n != 2:
        raise ValueError(f"condition applies to arity 2 only, got n={f.n}")
    t = f.table
    return (t[0] ^ t[3]) == (t[1] ^ t[2])


def oracle_output_state(f: BooleanFunction) -> StateVector:
    """Phase black-box output on the equal superposition, as an exact state."""
    from .oracle import apply_phase_oracle
    from .qstate import hadamard_all

    plus = hadamard_all(make_basis_state(f.n, 0))
    return apply_phase_oracle(f, plus)
