"""Exact qubit linear algebra: Bloch maps, Born rule, trace norm, validity checks.

States are 2x2 complex numpy arrays; Bloch vectors are length-3 float arrays.
All validity checks use a single absolute tolerance of 1e-12 (every quantity
handled here is O(1), so double precision leaves ample headroom), and 2x2
Hermitian eigenvalues come from the closed-form quadratic rather than an
iterative solver.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InvalidArgument, InvalidBlochVector, InvalidDensity, InvalidMeasurement

ATOL = 1e-12

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])


def _as_matrix(value, err) -> np.ndarray:
    mat = np.asarray(value, dtype=complex)
    if mat.shape != (2, 2):
        raise err(f"expected a 2x2 matrix, got shape {mat.shape}")
    if not np.all(np.isfinite(mat.real)) or not np.all(np.isfinite(mat.imag)):
        raise err("matrix has non-finite entries")
    return mat


def hermitian_eigenvalues(mat: np.ndarray) -> tuple[float, float]:
    """Closed-form (low, high) eigenvalues of a 2x2 Hermitian matrix."""
    return _kernels.herm2_eigvals(
        mat[0, 0].real, mat[0, 1].real, mat[0, 1].imag, mat[1, 1].real
    )


def validate_density(rho) -> np.ndarray:
    """Check Hermiticity, unit trace, and positivity to within 1e-12."""
    mat = _as_matrix(rho, InvalidDensity)
    dev = np.max(np.abs(mat - mat.conj().T))
    if dev > ATOL:
        raise InvalidDensity(f"not Hermitian: max deviation {dev:g}")
    tr = mat[0, 0].real + mat[1, 1].real
    if abs(tr - 1.0) > ATOL:
        raise InvalidDensity(f"trace {tr!r} differs from 1 by more than {ATOL:g}")
    lo, _ = hermitian_eigenvalues(mat)
    if lo < -ATOL:
        raise InvalidDensity(f"negative eigenvalue {lo!r}")
    return mat


@dataclass(frozen=True)
class BinaryMeasurement:
    """Two-outcome POVM stored as the outcome-0 effect; outcome 1 is its complement."""

    effect0: np.ndarray

    def __post_init__(self):
        mat = _as_matrix(self.effect0, InvalidMeasurement)
        dev = np.max(np.abs(mat - mat.conj().T))
        if dev > ATOL:
            raise InvalidMeasurement(f"effect not Hermitian: max deviation {dev:g}")
        lo, hi = hermitian_eigenvalues(mat)
        if lo < -ATOL or hi > 1.0 + ATOL:
            raise InvalidMeasurement(f"effect eigenvalues [{lo!r}, {hi!r}] outside [0, 1]")
        mat.setflags(write=False)
        object.__setattr__(self, "effect0", mat)

    @property
    def effect1(self) -> np.ndarray:
        return IDENTITY - self.effect0

    def effect(self, outcome: int) -> np.ndarray:
        if outcome == 0:
            return self.effect0
        if outcome == 1:
            return self.effect1
        raise InvalidArgument(f"outcome must be 0 or 1, got {outcome!r}")


def validate_bloch(r) -> np.ndarray:
    vec = np.asarray(r, dtype=float)
    if vec.shape != (3,) or not np.all(np.isfinite(vec)):
        raise InvalidBlochVector(f"expected a finite 3-vector, got {r!r}")
    norm = float(np.linalg.norm(vec))
    if norm > 1.0 + ATOL:
        raise InvalidBlochVector(f"norm {norm!r} exceeds 1")
    return vec


def bloch_to_density(r) -> np.ndarray:
    """rho = (I + r . sigma) / 2; pure exactly when |r| = 1."""
    vec = validate_bloch(r)
    return 0.5 * (IDENTITY + vec[0] * SIGMA_X + vec[1] * SIGMA_Y + vec[2] * SIGMA_Z)


def density_to_bloch(rho) -> np.ndarray:
    """Pauli expectation values of a valid density operator."""
    mat = validate_density(rho)
    return np.array(
        [
            2.0 * mat[0, 1].real,
            -2.0 * mat[0, 1].imag,
            (mat[0, 0] - mat[1, 1]).real,
        ]
    )


def projector(axis) -> BinaryMeasurement:
    """Projective measurement along a Bloch axis; outcome 0 is the +axis eigenstate."""
    vec = np.asarray(axis, dtype=float)
    if vec.shape != (3,) or not np.all(np.isfinite(vec)):
        raise InvalidMeasurement(f"expected a finite 3-vector axis, got {axis!r}")
    norm = float(np.linalg.norm(vec))
    if norm < 1e-9:
        raise InvalidMeasurement("measurement axis must be nonzero")
    vec = vec / norm
    effect = 0.5 * (IDENTITY + vec[0] * SIGMA_X + vec[1] * SIGMA_Y + vec[2] * SIGMA_Z)
    return BinaryMeasurement(effect)


def measurement_axis(m: BinaryMeasurement, tol: float = 1e-9) -> np.ndarray:
    """Bloch axis of a projective measurement; rejects non-projective effects."""
    eff = m.effect0
    vec = np.array(
        [2.0 * eff[0, 1].real, -2.0 * eff[0, 1].imag, (eff[0, 0] - eff[1, 1]).real]
    )
    rebuilt = 0.5 * (IDENTITY + vec[0] * SIGMA_X + vec[1] * SIGMA_Y + vec[2] * SIGMA_Z)
    if abs(np.linalg.norm(vec) - 1.0) > tol or np.max(np.abs(rebuilt - eff)) > tol:
        raise InvalidMeasurement("effect is not a rank-1 projector; no axis representation")
    return vec


def born_probability(rho, m: BinaryMeasurement, outcome: int) -> float:
    """Tr(rho . E_outcome), clamped to [0, 1]."""
    mat = validate_density(rho)
    if not isinstance(m, BinaryMeasurement):
        raise InvalidMeasurement(f"expected a BinaryMeasurement, got {type(m).__name__}")
    p = float(np.trace(mat @ m.effect(outcome)).real)
    return min(max(p, 0.0), 1.0)


def trace_distance(rho_a, rho_b) -> float:
    """Tr|rho_a - rho_b| via the closed-form 2x2 eigenvalues of the difference."""
    a = validate_density(rho_a)
    b = validate_density(rho_b)
    diff = a - b
    return _kernels.trace_norm_herm2(
        diff[0, 0].real, diff[0, 1].real, diff[0, 1].imag, diff[1, 1].real
    )
