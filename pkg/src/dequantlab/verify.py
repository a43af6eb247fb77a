"""Self-verification suite: every headline claim, checked end to end.

Each criterion function returns a :class:`CriterionResult`; ``run_all``
executes them in order.  The checks deliberately pit independent code paths
against each other: formulas against exhaustive scans, the pair-product test
against rank factorization, per-qubit vector flows against full state-vector
simulation, and optics against the quantum route.  Tolerances are fixed here
and nowhere else.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .census import (
    brute_force_census,
    count_separable,
    count_valid,
    enumerate_separable_functions,
    n3_entangled_example,
    proposition_witness,
)
from .oracle import (
    BooleanFunction,
    FunctionKind,
    apply_phase_oracle,
    apply_xor_oracle,
    classify,
    negate,
)
from .optical import (
    alignment_residual,
    decompose_su2,
    optical_deutsch,
    optical_deutsch_distribution,
    optical_dj2,
    optical_dj2_distribution,
    plate_reconstruction,
)
from .qstate import (
    MeasurementDistribution,
    StateVector,
    equal_up_to_global_phase,
    hadamard_all,
    make_basis_state,
    measure_distribution,
    tensor,
)
from .separability import (
    Entangled,
    bipartition_separable,
    factor_product_state,
    pair_product_invariant,
    qubit_separable,
)
from .solver import (
    OracleQuery,
    QubitGate,
    dj_steps,
    distribution_distance,
    extract_product_oracle,
    quantum_output_distribution,
    deutsch_readout,
    dj2_readout,
    run_dequantised,
    solve_deutsch_classical,
    solve_dj2_classical,
    solve_dj_quantum,
)

TV_TOL = 1e-9
FIDELITY_SLACK = 1e-9
INVOLUTION_TOL = 1e-12
PLATE_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class CriterionResult:
    index: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} criterion {self.index}: {self.name} ({self.detail}) [{self.seconds:.2f}s]"


def _result(index, name, passed, detail, t0) -> CriterionResult:
    return CriterionResult(
        index=index,
        name=name,
        passed=bool(passed),
        detail=detail,
        seconds=time.perf_counter() - t0,
    )


# -- sampling helpers -------------------------------------------------------


def random_unitary(rng: np.random.Generator) -> np.ndarray:
    """Haar-like 2x2 unitary from a QR-decomposed Gaussian matrix."""
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(g)
    return q @ np.diag(r.diagonal() / np.abs(r.diagonal()))


def random_special_unitary(rng: np.random.Generator) -> np.ndarray:
    u = random_unitary(rng)
    return u / np.sqrt(np.linalg.det(u))


def random_state(rng: np.random.Generator, n: int, min_amplitude: float = 0.0) -> StateVector:
    """A normalized random state, optionally with all amplitudes bounded away from 0."""
    size = 1 << n
    while True:
        amps = rng.normal(size=size) + 1j * rng.normal(size=size)
        amps /= np.linalg.norm(amps)
        if min_amplitude == 0.0 or np.abs(amps).min() > min_amplitude:
            return StateVector.from_amplitudes(amps)


def random_product_state(rng: np.random.Generator, n: int, min_component: float = 0.2) -> StateVector:
    """Tensor of random single-qubit states with both components sizeable."""
    state = None
    for _ in range(n):
        while True:
            pair = rng.normal(size=2) + 1j * rng.normal(size=2)
            pair /= np.linalg.norm(pair)
            if np.abs(pair).min() > min_component:
                break
        qubit = StateVector.from_amplitudes(pair)
        state = qubit if state is None else tensor(state, qubit)
    return state


def random_sign_state(rng: np.random.Generator, n: int) -> StateVector:
    return StateVector.from_signs(rng.choice([-1, 1], size=1 << n))


def random_function(rng: np.random.Generator, n: int) -> BooleanFunction:
    return BooleanFunction(tuple(int(b) for b in rng.integers(0, 2, size=1 << n)))


def all_valid_functions(n: int):
    """Every constant-or-balanced function of arity n (exhaustive)."""
    for value in range(1 << (1 << n)):
        f = BooleanFunction.from_int(n, value)
        if classify(f).is_valid:
            yield f


def reference_flow(factors, steps):
    """Full state-vector run of a per-qubit flow; the independent referee.

    Builds the joint 2**n operators by Kronecker products and multiplies them
    into a dense state.  Returns (distribution, query count).
    """
    n = len(factors)
    state = np.zeros(1 << n, dtype=np.complex128)
    state[0] = 1.0
    box_full = factors[0]
    for mat in factors[1:]:
        box_full = np.kron(box_full, mat)
    queries = 0
    for step in steps:
        if isinstance(step, OracleQuery):
            state = box_full @ state
            queries += 1
        elif isinstance(step, QubitGate):
            full = step.matrix_for(0)
            for k in range(1, n):
                full = np.kron(full, step.matrix_for(k))
            state = full @ state
        else:
            raise TypeError(f"unknown flow step {step!r}")
    probs = np.abs(state) ** 2
    outcomes = {i: float(p) for i, p in enumerate(probs) if p > 0.0}
    return MeasurementDistribution(bits=n, outcomes=outcomes), queries


# -- criteria ---------------------------------------------------------------


def criterion_1(max_n: int = 4) -> CriterionResult:
    """Arity-1 quantum route: deterministic, one call, under a millisecond."""
    t0 = time.perf_counter()
    failures = []
    worst_time = 0.0
    functions = [BooleanFunction.from_int(1, v) for v in range(4)]
    for f in functions:
        solve_dj_quantum(f)  # warm-up
    for f in functions:
        result = solve_dj_quantum(f)
        p0 = quantum_output_distribution(f).probability(0)
        expected = (
            FunctionKind.CONSTANT if classify(f).kind is FunctionKind.CONSTANT
            else FunctionKind.BALANCED
        )
        if result.verdict is not expected:
            failures.append(f"{f}: verdict {result.verdict}")
        if p0 not in (0.0, 1.0):
            failures.append(f"{f}: P(0) = {p0!r} not exactly 0 or 1")
        if result.oracle_calls != 1:
            failures.append(f"{f}: {result.oracle_calls} calls")
        best = min(
            _timed(lambda: solve_dj_quantum(f)) for _ in range(3)
        )
        worst_time = max(worst_time, best)
    if worst_time >= 1e-3:
        failures.append(f"slowest solve {worst_time * 1e3:.3f} ms")
    detail = f"4 functions, slowest solve {worst_time * 1e6:.0f} us"
    if failures:
        detail = "; ".join(failures)
    return _result(1, "arity-1 quantum route is deterministic", not failures, detail, t0)


def _timed(thunk) -> float:
    start = time.perf_counter()
    thunk()
    return time.perf_counter() - start


def criterion_2(max_n: int = 4) -> CriterionResult:
    """Arity-1 complex-bit route: exact readouts, exact identification."""
    t0 = time.perf_counter()
    expected = {
        (0, 0): 1j,
        (1, 1): -1j,
        (0, 1): 1 + 0j,
        (1, 0): -1 + 0j,
    }
    failures = []
    seen = []
    for table, want in expected.items():
        f = BooleanFunction(table)
        w = deutsch_readout(f)
        result = solve_deutsch_classical(f)
        seen.append(w.value)
        if w.value != want:
            failures.append(f"{f}: readout {w.value} != {want}")
        if result.identified_function != f:
            failures.append(f"{f}: identified {result.identified_function}")
        if result.oracle_calls != 1:
            failures.append(f"{f}: {result.oracle_calls} calls")
    if sorted(seen, key=lambda z: (z.real, z.imag)) != [-1 + 0j, -1j, 1 + 0j, 1j]:
        failures.append(f"outputs {seen} are not exactly {{+-1, +-i}}")
    detail = "; ".join(failures) if failures else "readouts exactly {+i, -i, +1, -1}"
    return _result(2, "arity-1 complex-bit readouts are exact", not failures, detail, t0)


def criterion_3(max_n: int = 4) -> CriterionResult:
    """Arity 2: separable boxes, exact case display, exact identification."""
    t0 = time.perf_counter()
    failures = []
    count = 0
    for f in all_valid_functions(2):
        count += 1
        state = StateVector.from_signs(f.signs())
        if isinstance(factor_product_state(state), Entangled):
            failures.append(f"{f}: box output not separable")
            continue
        f00 = f(0b00)
        d1 = f(0b00) ^ f(0b10)
        d2 = f(0b10) ^ f(0b11)
        sign = -1 if f00 else 1
        want1 = sign * (1j if d1 == 0 else 1 + 0j)
        want2 = 1j if d2 == 0 else 1 + 0j
        w1, w2 = dj2_readout(f)
        if (w1.value, w2.value) != (want1, want2):
            failures.append(f"{f}: readout ({w1.value}, {w2.value}) != ({want1}, {want2})")
        result = solve_dj2_classical(f)
        if result.identified_function != f:
            failures.append(f"{f}: identified {result.identified_function}")
        if result.verdict is not solve_dj_quantum(f).verdict:
            failures.append(f"{f}: classical and quantum verdicts differ")
    if count != 8:
        failures.append(f"expected 8 valid functions, saw {count}")
    detail = "; ".join(failures) if failures else "8 functions, display and identity exact"
    return _result(3, "arity-2 route matches the case display", not failures, detail, t0)


def criterion_4(max_n: int = 4) -> CriterionResult:
    """The stock arity-3 function breaks pair products at level 2, pair (0, 1)."""
    t0 = time.perf_counter()
    f = n3_entangled_example()
    state = StateVector.from_signs(f.signs())
    report = pair_product_invariant(state)
    ok = (
        classify(f).kind is FunctionKind.BALANCED
        and not report.invariant
        and report.precondition_met
        and report.first_violation == (2, 0, 1)
    )
    detail = (
        f"f = {f}, first violation {report.first_violation}"
        if ok
        else f"report: invariant={report.invariant}, violation={report.first_violation}"
    )
    return _result(4, "entangled arity-3 example fails level 2", ok, detail, t0)


def criterion_5(max_n: int = 4) -> CriterionResult:
    """Brute-force census equals the closed formulas, within time budgets."""
    t0 = time.perf_counter()
    expected_a = {1: 4, 2: 8, 3: 16, 4: 32}
    expected_b = {1: 4, 2: 8, 3: 72, 4: 12872}
    failures = []
    top = min(4, max_n)
    for n in range(1, top + 1):
        start = time.perf_counter()
        report = brute_force_census(n)
        elapsed = time.perf_counter() - start
        if report.separable_count != expected_a[n] or report.separable_count != count_separable(n):
            failures.append(f"n={n}: separable {report.separable_count}")
        if report.valid_count != expected_b[n] or report.valid_count != count_valid(n):
            failures.append(f"n={n}: valid {report.valid_count}")
        if report.fraction != Fraction(expected_a[n], expected_b[n]):
            failures.append(f"n={n}: fraction {report.fraction}")
        if n == 4 and elapsed >= 60.0:
            failures.append(f"n=4 single-threaded scan took {elapsed:.1f}s")
        if n == 4:
            start = time.perf_counter()
            parallel = brute_force_census(4, jobs=4)
            elapsed_par = time.perf_counter() - start
            if parallel.separable_count != expected_a[4] or parallel.valid_count != expected_b[4]:
                failures.append("n=4 parallel scan disagrees")
            if elapsed_par >= 15.0:
                failures.append(f"n=4 four-way scan took {elapsed_par:.1f}s")
    detail = "; ".join(failures) if failures else f"n = 1..{top} counts and fractions exact"
    return _result(5, "census formulas match brute force", not failures, detail, t0)


def criterion_6(max_n: int = 4) -> CriterionResult:
    """Witness family: balanced, no qubit separable; no cut separable, n <= 6."""
    t0 = time.perf_counter()
    failures = []
    for n in range(3, 13):
        f = proposition_witness(n)
        if classify(f).kind is not FunctionKind.BALANCED:
            failures.append(f"n={n}: witness not balanced")
        state = StateVector.from_signs(f.signs())
        if any(qubit_separable(state, i) for i in range(n)):
            failures.append(f"n={n}: some qubit separable")
        if n <= 6:
            for size in range(1, n):
                for subset in combinations(range(n), size):
                    if bipartition_separable(state, subset):
                        failures.append(f"n={n}: cut {subset} separable")
                        break
    elapsed = time.perf_counter() - t0
    if elapsed >= 10.0:
        failures.append(f"witness scan took {elapsed:.1f}s")
    detail = "; ".join(failures) if failures else "n = 3..12 single cuts, n <= 6 all cuts"
    return _result(6, "witness family is maximally entangled", not failures, detail, t0)


def criterion_7(max_n: int = 4) -> CriterionResult:
    """Per-qubit vector flows reproduce full simulation, query for query."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(0x5EED7)
    failures = []
    worst = 0.0
    from .solver import ClassicalVectorOracle

    for trial in range(100):
        n = int(rng.integers(1, 7))
        factors = [random_unitary(rng) for _ in range(n)]
        steps = [QubitGate(tuple(random_unitary(rng) for _ in range(n)))]
        for _ in range(int(rng.integers(1, 3))):
            steps.append(OracleQuery())
            steps.append(QubitGate(tuple(random_unitary(rng) for _ in range(n))))
        box = ClassicalVectorOracle(factors)
        got = run_dequantised(box, steps)
        want, queries = reference_flow(factors, steps)
        tv = distribution_distance(got, want)
        worst = max(worst, tv)
        if tv >= TV_TOL:
            failures.append(f"trial {trial}: TV = {tv:.2e}")
        if box.calls != queries:
            failures.append(f"trial {trial}: {box.calls} calls vs {queries}")
    detail = "; ".join(failures) if failures else f"100 random boxes, worst TV {worst:.1e}"
    return _result(7, "product-box flows replay full simulation", not failures, detail, t0)


def criterion_8(max_n: int = 4) -> CriterionResult:
    """Optics agrees with the quantum route; plate synthesis hits 1e-8."""
    t0 = time.perf_counter()
    failures = []
    for f in all_valid_functions(1):
        if optical_deutsch(f).verdict is not solve_dj_quantum(f).verdict:
            failures.append(f"{f}: optical verdict differs")
        tv = distribution_distance(
            optical_deutsch_distribution(f), quantum_output_distribution(f)
        )
        if tv >= TV_TOL:
            failures.append(f"{f}: TV = {tv:.2e}")
    for f in all_valid_functions(2):
        if optical_dj2(f).verdict is not solve_dj_quantum(f).verdict:
            failures.append(f"{f}: optical verdict differs")
        tv = distribution_distance(
            optical_dj2_distribution(f), quantum_output_distribution(f)
        )
        if tv >= TV_TOL:
            failures.append(f"{f}: TV = {tv:.2e}")
    rng = np.random.default_rng(0x0107)
    worst = 0.0
    for trial in range(100):
        u = random_special_unitary(rng)
        try:
            angles = decompose_su2(u, tol=PLATE_RESIDUAL_TOL)
        except ValueError as exc:
            failures.append(f"trial {trial}: {exc}")
            continue
        residual = alignment_residual(plate_reconstruction(angles), u)
        worst = max(worst, residual)
        if residual >= PLATE_RESIDUAL_TOL:
            failures.append(f"trial {trial}: residual {residual:.2e}")
    elapsed = time.perf_counter() - t0
    if elapsed >= 30.0:
        failures.append(f"took {elapsed:.1f}s")
    detail = "; ".join(failures) if failures else f"12 functions, 100 plates, worst residual {worst:.1e}"
    return _result(8, "optical equivalence and plate synthesis", not failures, detail, t0)


def criterion_9(max_n: int = 4) -> CriterionResult:
    """Pair-product and factorization verdicts coincide, twice over."""
    t0 = time.perf_counter()
    failures = []
    checked = 0
    for n in range(2, min(4, max_n) + 1):
        for f in all_valid_functions(n):
            state = StateVector.from_signs(f.signs())
            ppi = pair_product_invariant(state).invariant
            product = not isinstance(factor_product_state(state), Entangled)
            checked += 1
            if ppi != product:
                failures.append(f"box state of {f}: ppi={ppi} product={product}")
    rng = np.random.default_rng(0xC0FFEE)
    for trial in range(1000):
        n = int(rng.integers(2, 6))
        if trial % 2 == 0:
            state = random_product_state(rng, n)
        else:
            state = random_state(rng, n, min_amplitude=1e-3)
        report = pair_product_invariant(state)
        if not report.precondition_met:
            failures.append(f"trial {trial}: precondition unexpectedly unmet")
            continue
        product = not isinstance(factor_product_state(state), Entangled)
        checked += 1
        if report.invariant != product:
            failures.append(f"trial {trial} (n={n}): ppi={report.invariant} product={product}")
    detail = "; ".join(failures[:5]) if failures else f"{checked} states agree"
    return _result(9, "pair-product and factorization agree", not failures, detail, t0)


def criterion_10(max_n: int = 4) -> CriterionResult:
    """Property bundle: involution, norms, box equivalence, phases, roundtrip."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(0xFEED)
    failures = []

    # Hadamard involution, float and exact paths.
    for _ in range(40):
        n = int(rng.integers(1, 9))
        s = random_state(rng, n)
        back = hadamard_all(hadamard_all(s))
        if np.abs(back.amplitudes - s.amplitudes).max() >= INVOLUTION_TOL:
            failures.append("involution drift on float path")
    for _ in range(20):
        n = int(rng.integers(1, 9))
        s = random_sign_state(rng, n)
        back = hadamard_all(hadamard_all(s))
        if not (back.is_exact and back.scale2 == s.scale2 and np.array_equal(back.int_data, s.int_data)):
            failures.append("involution not exact on sign path")

    # Normalization preservation through H and tensor.
    for _ in range(40):
        n = int(rng.integers(1, 7))
        s = random_state(rng, n)
        h = hadamard_all(s)
        if abs(np.linalg.norm(h.amplitudes) - 1.0) >= INVOLUTION_TOL:
            failures.append("norm drift under H")
        other = random_state(rng, int(rng.integers(1, 4)))
        t = tensor(s, other)
        if abs(np.linalg.norm(t.amplitudes) - 1.0) >= INVOLUTION_TOL:
            failures.append("norm drift under tensor")

    # Phase and XOR boxes act identically on |x>|->, exactly.
    minus = StateVector.from_signs([1, -1])
    for n in range(1, 7):
        if n <= 2:
            function_pool = [BooleanFunction.from_int(n, v) for v in range(1 << (1 << n))]
        else:
            function_pool = [random_function(rng, n) for _ in range(10)]
        for f in function_pool:
            signs = f.signs()
            for x in range(1 << n):
                joint = tensor(make_basis_state(n, x), minus)
                via_xor = apply_xor_oracle(f, joint)
                expected = joint.int_data * int(signs[x])
                if not (via_xor.is_exact and np.array_equal(via_xor.int_data, expected)):
                    failures.append(f"xor/phase mismatch at n={n}, f={f}, x={x}")
                    break

    # Negating the function only flips the global sign of the box output.
    for _ in range(30):
        n = int(rng.integers(1, 7))
        f = random_function(rng, n)
        s = random_state(rng, n)
        flipped = apply_phase_oracle(negate(f), s)
        direct = apply_phase_oracle(f, s)
        if np.abs(flipped.amplitudes + direct.amplitudes).max() >= INVOLUTION_TOL:
            failures.append("negation phase law drift")

    # Factorization roundtrip fidelity.
    for _ in range(40):
        n = int(rng.integers(2, 7))
        s = random_product_state(rng, n)
        factored = factor_product_state(s)
        if isinstance(factored, Entangled):
            failures.append("product state reported entangled")
            continue
        rebuilt = factored.reconstruct()
        fidelity = abs(np.vdot(rebuilt.amplitudes, s.amplitudes)) ** 2
        if fidelity <= 1 - FIDELITY_SLACK:
            failures.append(f"roundtrip fidelity {fidelity}")
    for f in all_valid_functions(2):
        s = StateVector.from_signs(f.signs())
        factored = factor_product_state(s)
        rebuilt = factored.reconstruct()
        if not (rebuilt.is_exact and equal_up_to_global_phase(rebuilt, s, 1e-12)):
            failures.append(f"exact roundtrip failed for {f}")

    detail = "; ".join(sorted(set(failures))) if failures else "all property families hold"
    return _result(10, "property suite", not failures, detail, t0)


CRITERIA = (
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
)


def run_all(max_n: int = 4):
    """Run every criterion at the given exhaustive-scan ceiling."""
    if max_n < 1:
        raise ValueError(f"max_n must be >= 1, got {max_n}")
    return [criterion(max_n=max_n) for criterion in CRITERIA]
