"""Classical polarization optics that replays the one-call solvers.

A photon's polarization is a 2-component Jones vector with the basis
{x-pol = logical 0, y-pol = logical 1}.  Quarter- and half-wave plates give
2x2 unitaries, and the sequence quarter-half-quarter reaches every special
unitary, so the black box of a product-form problem can be built from plates.
The protocol per photon: prepare y-polarization, rotate by 45 degrees, pass
the black box, rotate by 45 degrees again, and read the y-intensity.  Two
photons never interact; the arity-2 run is literally two independent arity-1
runs against the per-photon factors of the box.

Plate convention: retardance r is applied along the fast axis, giving
R(theta) @ diag(1, r) @ R(-theta) with r = i (quarter) or r = -1 (half);
global phases are discarded throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .oracle import BooleanFunction, FunctionKind
from .qstate import MeasurementDistribution
from .solver import (
    ClassicalVectorOracle,
    Entangled,
    PromiseViolationError,
    SolveResult,
    extract_product_oracle,
)

QUARTER = "quarter"
HALF = "half"
_RETARDANCE = {QUARTER: 1j, HALF: -1.0 + 0j}

PROBABILITY_TOL = 1e-9
DECOMPOSITION_TOL = 1e-8
_GRID_POINTS = 8
_REFINE_STARTS = 6


@dataclass(frozen=True)
class JonesVector:
    """Unit polarization state (E_x, E_y); x-pol is 0, y-pol is 1."""

    ex: complex
    ey: complex

    def __post_init__(self):
        norm2 = abs(self.ex) ** 2 + abs(self.ey) ** 2
        if abs(norm2 - 1.0) > 1e-12:
            raise ValueError(f"Jones vector is not unit norm: |E|^2 = {norm2!r}")

    @classmethod
    def x_pol(cls) -> "JonesVector":
        return cls(1.0 + 0j, 0j)

    @classmethod
    def y_pol(cls) -> "JonesVector":
        return cls(0j, 1.0 + 0j)

    @classmethod
    def from_array(cls, vec) -> "JonesVector":
        return cls(complex(vec[0]), complex(vec[1]))

    def as_array(self) -> np.ndarray:
        return np.array([self.ex, self.ey], dtype=np.complex128)

    @property
    def y_probability(self) -> float:
        return abs(self.ey) ** 2


@dataclass(frozen=True)
class WavePlate:
    """A quarter- or half-wave plate with fast axis at ``angle`` radians."""

    kind: str
    angle: float

    def __post_init__(self):
        if self.kind not in _RETARDANCE:
            raise ValueError(f"plate kind must be {QUARTER!r} or {HALF!r}, got {self.kind!r}")
        object.__setattr__(self, "angle", self.angle % math.pi)


def _plate_entries(theta: float, retardance: complex):
    """Row-major entries of R(theta) diag(1, r) R(-theta)."""
    c = math.cos(theta)
    s = math.sin(theta)
    off = (1.0 - retardance) * c * s
    return (c * c + retardance * s * s, off, off, s * s + retardance * c * c)


def waveplate_matrix(plate: WavePlate) -> np.ndarray:
    """The plate's 2x2 Jones matrix."""
    a, b, c, d = _plate_entries(plate.angle, _RETARDANCE[plate.kind])
    return np.array([[a, b], [c, d]], dtype=np.complex128)


def rotate_polarisation(v: JonesVector, phi: float) -> JonesVector:
    """Rotate the polarization anti-clockwise in the xy-plane by phi."""
    c = math.cos(phi)
    s = math.sin(phi)
    return JonesVector(c * v.ex - s * v.ey, s * v.ex + c * v.ey)


def _photon_pass(box_output: np.ndarray) -> float:
    """Final y-intensity after the closing 45-degree rotation."""
    v = rotate_polarisation(JonesVector.from_array(box_output / np.linalg.norm(box_output)), math.pi / 4)
    return v.y_probability


def _prepared_photon() -> np.ndarray:
    return rotate_polarisation(JonesVector.y_pol(), math.pi / 4).as_array()


def reduced_phase_box(f: BooleanFunction) -> ClassicalVectorOracle:
    """The arity-1 black box as a single optical element, diag of +-1."""
    if f.n != 1:
        raise ValueError(f"reduced optical box takes arity 1, got n={f.n}")
    signs = f.signs().astype(np.complex128)
    return ClassicalVectorOracle([np.diag(signs)])


def optical_deutsch(f: BooleanFunction) -> SolveResult:
    """Single-photon protocol for arity 1; deterministic in one box pass."""
    if f.n != 1:
        raise ValueError(f"optical protocol takes arity 1, got n={f.n}")
    box = reduced_phase_box(f)
    (out,) = box.apply((_prepared_photon(),))
    p_y = _photon_pass(out)
    verdict = FunctionKind.CONSTANT if p_y < PROBABILITY_TOL else FunctionKind.BALANCED
    return SolveResult(
        verdict=verdict, identified_function=None, oracle_calls=box.calls, trace=None
    )


def optical_deutsch_distribution(f: BooleanFunction) -> MeasurementDistribution:
    """Outcome distribution of the single-photon run (y-pol reads as 1)."""
    box = reduced_phase_box(f)
    (out,) = box.apply((_prepared_photon(),))
    p_y = _photon_pass(out)
    outcomes = {k: p for k, p in ((0, 1.0 - p_y), (1, p_y)) if p != 0.0}
    return MeasurementDistribution(bits=1, outcomes=outcomes)


def _two_photon_intensities(f: BooleanFunction):
    if f.n != 2:
        raise ValueError(f"two-photon protocol takes arity 2, got n={f.n}")
    box = extract_product_oracle(f)
    if isinstance(box, Entangled):
        raise PromiseViolationError(
            f"promise violated: function {f} gives an entangling box; "
            "independent photons cannot carry it"
        )
    outputs = box.apply((_prepared_photon(), _prepared_photon()))
    return box, [_photon_pass(out) for out in outputs]


def optical_dj2(f: BooleanFunction) -> SolveResult:
    """Two independent photons decide arity 2; the plate pair is one call."""
    box, intensities = _two_photon_intensities(f)
    bits = [1 if p > 0.5 else 0 for p in intensities]
    verdict = FunctionKind.CONSTANT if bits == [0, 0] else FunctionKind.BALANCED
    return SolveResult(
        verdict=verdict, identified_function=None, oracle_calls=box.calls, trace=None
    )


def optical_dj2_distribution(f: BooleanFunction) -> MeasurementDistribution:
    """Joint outcome distribution; a product, the photons never interact."""
    _, (p1, p2) = _two_photon_intensities(f)
    joint = np.kron(np.array([1.0 - p1, p1]), np.array([1.0 - p2, p2]))
    outcomes = {k: float(p) for k, p in enumerate(joint) if p != 0.0}
    return MeasurementDistribution(bits=2, outcomes=outcomes)


# -- quarter-half-quarter decomposition ------------------------------------


def _mul2(x, y):
    return (
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    )


def _triple_product(theta1: float, theta2: float, theta3: float):
    """Entries of quarter(theta1) @ half(theta2) @ quarter(theta3)."""
    q1 = _plate_entries(theta1, 1j)
    h2 = _plate_entries(theta2, -1.0)
    q3 = _plate_entries(theta3, 1j)
    return _mul2(_mul2(q1, h2), q3)


def plate_reconstruction(angles) -> np.ndarray:
    """Matrix of the quarter-half-quarter stack at the given angles."""
    a, b, c, d = _triple_product(*angles)
    return np.array([[a, b], [c, d]], dtype=np.complex128)


def alignment_residual(candidate: np.ndarray, target: np.ndarray) -> float:
    """Frobenius distance between the matrices after global-phase alignment."""
    overlap = np.sum(candidate * target.conj())
    mag = abs(overlap)
    lam = overlap / mag if mag > 0 else 1.0
    return float(np.linalg.norm(candidate - lam * target))


def _check_special_unitary(u: np.ndarray) -> np.ndarray:
    mat = np.asarray(u, dtype=np.complex128)
    if mat.shape != (2, 2):
        raise ValueError("input must be a 2x2 matrix")
    defect = np.abs(mat.conj().T @ mat - np.eye(2)).max()
    if defect > 1e-10:
        raise ValueError(f"matrix is not unitary (defect {defect:.2e})")
    det = mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]
    if abs(det - 1.0) > 1e-10:
        raise ValueError(f"matrix is not special (det = {det})")
    return mat


def decompose_su2(u, tol: float = DECOMPOSITION_TOL):
    """Angles (theta1, theta2, theta3) of a quarter-half-quarter stack for u.

    Matches u up to global phase with phase-aligned Frobenius residual below
    ``tol``.  Solutions are not unique; any triple meeting the bound is
    returned.  Search: a coarse grid over [0, pi)^3 ranked by overlap, then
    derivative-free simplex refinement of the best starts and a final
    least-squares polish.  Raises if every start stalls above the bound.
    """
    mat = _check_special_unitary(u)
    target = (mat[0, 0], mat[0, 1], mat[1, 0], mat[1, 1])
    conj_target = tuple(t.conjugate() for t in target)

    def residual2(theta):
        entries = _triple_product(theta[0] % math.pi, theta[1] % math.pi, theta[2] % math.pi)
        overlap = sum(e * ct for e, ct in zip(entries, conj_target))
        mag = abs(overlap)
        lam = overlap / mag if mag > 1e-300 else 1.0
        return sum(abs(e - lam * t) ** 2 for e, t in zip(entries, target))

    def residual_vector(theta):
        entries = _triple_product(theta[0] % math.pi, theta[1] % math.pi, theta[2] % math.pi)
        overlap = sum(e * ct for e, ct in zip(entries, conj_target))
        mag = abs(overlap)
        lam = overlap / mag if mag > 1e-300 else 1.0
        diffs = [e - lam * t for e, t in zip(entries, target)]
        return np.array(
            [d.real for d in diffs] + [d.imag for d in diffs], dtype=np.float64
        )

    centers = (np.arange(_GRID_POINTS) + 0.5) * (math.pi / _GRID_POINTS)
    grid = [
        (t1, t2, t3)
        for t1 in centers
        for t2 in centers
        for t3 in centers
    ]
    ranked = sorted(grid, key=residual2)

    best = None
    for start in ranked[:_REFINE_STARTS]:
        sol = optimize.minimize(
            residual2,
            np.array(start),
            method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-24, "maxiter": 4000},
        )
        polish = optimize.least_squares(
            residual_vector, sol.x, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15
        )
        value = math.sqrt(residual2(polish.x))
        if best is None or value < best[0]:
            best = (value, polish.x)
        if value < tol:
            angles = tuple(float(t % math.pi) for t in polish.x)
            return angles
    raise ValueError(
        f"no quarter-half-quarter stack found within residual {tol}; "
        f"best residual {best[0]:.3e}"
    )
