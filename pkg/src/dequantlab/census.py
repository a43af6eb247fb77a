"""Counting and enumerating the functions whose black box never entangles.

For arity n there are C(2**n, 2**(n-1)) + 2 constant-or-balanced functions,
but only 2**(n+1) of them produce a product state out of the phase black box.
The separable set is built recursively: the lower half of a child table
copies a separable parent, and the top pair-product level then leaves exactly
one free bit for the upper half.  A brute-force scan over all 2**(2**n)
tables (n <= 4) double-checks both counts, and an explicit witness family
shows the entangled functions get as bad as possible: no qubit of the
witness state is separable.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .oracle import BooleanFunction, classify
from .qstate import StateVector
from .separability import Entangled, factor_product_state

MAX_ENUMERATION_ARITY = 20
MAX_FORMULA_ARITY = 30
MAX_BRUTE_FORCE_ARITY = 4


@dataclass(frozen=True)
class CensusReport:
    """Separable and valid counts for one arity, with their exact ratio."""

    n: int
    separable_count: int
    valid_count: int
    fraction: Fraction
    method: str
    separable_set: tuple | None = None


def count_valid(n: int) -> int:
    """Number of constant-or-balanced functions: C(2**n, 2**(n-1)) + 2."""
    if n < 1:
        raise ValueError(f"arity must be >= 1, got {n}")
    if n > MAX_FORMULA_ARITY:
        raise ValueError(f"arity {n} is impractical (limit {MAX_FORMULA_ARITY})")
    size = 1 << n
    return math.comb(size, size // 2) + 2


def count_separable(n: int) -> int:
    """Number of valid functions with a product-state black-box output."""
    if n < 1:
        raise ValueError(f"arity must be >= 1, got {n}")
    return 1 << (n + 1)


def _children(table: tuple):
    """The two separable extensions of a separable table, by free bit."""
    size = len(table)
    reversed_table = table[::-1]
    for free_bit in (0, 1):
        parity = free_bit ^ table[size - 1]
        yield table + tuple(bit ^ parity for bit in reversed_table)


def enumerate_separable_functions(n: int):
    """Yield the 2**(n+1) separable functions of arity n, no duplicates.

    Order is deterministic: depth-first by (parent function, free bit), with
    the four arity-1 tables in lexicographic order at the root.
    """
    if n < 1:
        raise ValueError(f"arity must be >= 1, got {n}")
    if n > MAX_ENUMERATION_ARITY:
        raise ValueError(
            f"arity {n} would need 2**{n}-entry tables (limit {MAX_ENUMERATION_ARITY})"
        )

    def walk(table: tuple, level: int):
        if level == n:
            yield BooleanFunction(table)
            return
        for child in _children(table):
            yield from walk(child, level + 1)

    for base in ((0, 0), (0, 1), (1, 0), (1, 1)):
        yield from walk(base, 1)


def oracle_state_is_separable(f: BooleanFunction) -> bool:
    """Factorization verdict on the phase black-box output of f."""
    state = StateVector.from_signs(f.signs())
    return not isinstance(factor_product_state(state), Entangled)


def _scan_chunk(args):
    """Scan truth-table integers [lo, hi); returns (valid, separable tables)."""
    n, lo, hi = args
    size = 1 << n
    shifts = np.arange(size - 1, -1, -1, dtype=np.uint32)
    values = np.arange(lo, hi, dtype=np.uint32)
    bits = (values[:, None] >> shifts[None, :]) & 1
    ones = bits.sum(axis=1)
    valid_mask = (ones == 0) | (ones == size) | (2 * ones == size)
    separable = []
    for row in np.nonzero(valid_mask)[0]:
        signs = 1 - 2 * bits[row].astype(np.int64)
        state = StateVector._exact(signs, n)
        if not isinstance(factor_product_state(state), Entangled):
            separable.append(int(values[row]))
    return int(valid_mask.sum()), separable


def brute_force_census(n: int, jobs: int = 1) -> CensusReport:
    """Exhaustively classify and factor all 2**(2**n) truth tables (n <= 4).

    The index space splits into chunks that scan independently; ``jobs`` > 1
    runs them in a process pool and merges the tallies.
    """
    if n < 1:
        raise ValueError(f"arity must be >= 1, got {n}")
    if n > MAX_BRUTE_FORCE_ARITY:
        raise ValueError(
            f"brute force is limited to n <= {MAX_BRUTE_FORCE_ARITY} "
            f"(2**{1 << n} tables); use count_valid/count_separable instead"
        )
    total = 1 << (1 << n)
    chunks = max(1, min(jobs * 4, total // 16)) if jobs > 1 else 1
    bounds = np.linspace(0, total, chunks + 1, dtype=np.int64)
    tasks = [(n, int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if lo < hi]

    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_scan_chunk, tasks))
    else:
        results = [_scan_chunk(task) for task in tasks]

    valid = sum(r[0] for r in results)
    separable_values = [v for r in results for v in r[1]]
    separable_values.sort()
    separable = tuple(BooleanFunction.from_int(n, v) for v in separable_values)
    return CensusReport(
        n=n,
        separable_count=len(separable),
        valid_count=valid,
        fraction=Fraction(len(separable), valid),
        method="brute-force",
        separable_set=separable,
    )


def formula_census(n: int, include_set: bool = False) -> CensusReport:
    """Census by closed formulas, optionally materializing the separable set."""
    separable_set = None
    if include_set:
        separable_set = tuple(enumerate_separable_functions(n))
    a, b = count_separable(n), count_valid(n)
    return CensusReport(
        n=n,
        separable_count=a,
        valid_count=b,
        fraction=Fraction(a, b),
        method="formula",
        separable_set=separable_set,
    )


def proposition_witness(n: int) -> BooleanFunction:
    """A balanced function whose black-box output has no separable qubit.

    Defined for n >= 3: f(a) = 0 for a in {0, ..., 2**(n-1) - 2} and for
    a = 2**n - 2, f(a) = 1 elsewhere.
    """
    if n < 3:
        raise ValueError(f"witness construction needs n >= 3, got {n}")
    if n > MAX_ENUMERATION_ARITY:
        raise ValueError(
            f"arity {n} would need a 2**{n}-entry table (limit {MAX_ENUMERATION_ARITY})"
        )
    size = 1 << n
    half = size >> 1
    table = [1] * size
    for a in range(half - 1):
        table[a] = 0
    table[size - 2] = 0
    return BooleanFunction(tuple(table))


def n3_entangled_example() -> BooleanFunction:
    """The smallest stock example of an entangling balanced function.

    Its truth table (0,0,0,1,1,1,1,0) breaks the k=2 pair-product level:
    the function is balanced yet its black-box output is entangled.  It is a
    different function from proposition_witness(3), which additionally has
    every single qubit entangled.
    """
    return BooleanFunction((0, 0, 0, 1, 1, 1, 1, 0))
