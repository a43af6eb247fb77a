"""Deutsch-Jozsa simulation, classical de-quantisation, and entanglement census.

The library answers, exactly and at desk scale, when the one-call quantum
solution of the constant-or-balanced problem can be replayed by classical
means: complex bits for arities 1 and 2, independent photons in Jones
calculus, and per-qubit vector simulation whenever the black box never
entangles.  A pair-product test and a rank-based factorizer decide
separability in exact integer arithmetic, and a census counts how rare the
separable black boxes become as the arity grows.
"""

from .census import (
    CensusReport,
    brute_force_census,
    count_separable,
    count_valid,
    enumerate_separable_functions,
    formula_census,
    n3_entangled_example,
    oracle_state_is_separable,
    proposition_witness,
)
from .oracle import (
    BooleanFunction,
    Classification,
    FunctionKind,
    PhaseOracle,
    XorOracle,
    apply_phase_oracle,
    apply_xor_oracle,
    classify,
    negate,
    parse_truth_table,
)
from .optical import (
    JonesVector,
    WavePlate,
    alignment_residual,
    decompose_su2,
    optical_deutsch,
    optical_deutsch_distribution,
    optical_dj2,
    optical_dj2_distribution,
    plate_reconstruction,
    rotate_polarisation,
    waveplate_matrix,
)
from .qstate import (
    MeasurementDistribution,
    ResourceLimitError,
    StateVector,
    equal_up_to_global_phase,
    hadamard_all,
    make_basis_state,
    max_qubits,
    measure_distribution,
    tensor,
)
from .separability import (
    Entangled,
    PairProductLevel,
    PairProductReport,
    ProductFactorization,
    bipartition_separable,
    factor_product_state,
    n2_separability_condition,
    oracle_output_state,
    pair_product_invariant,
    qubit_separable,
)
from .solver import (
    ClassicalVectorOracle,
    ComplexBit,
    ComplexBitOracle,
    ComplexPairOracle,
    EntangledOracleError,
    OracleQuery,
    PromiseViolationError,
    QubitGate,
    SolveResult,
    deutsch_readout,
    dj2_readout,
    dj_steps,
    distribution_distance,
    extract_product_oracle,
    quantum_output_distribution,
    run_dequantised,
    solve_deutsch_classical,
    solve_dj2_classical,
    solve_dj_dequantised,
    solve_dj_quantum,
)

__version__ = "0.1.0"
