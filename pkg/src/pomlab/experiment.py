"""Emulation of a photon-counting run: preparation noise, finite-count
sampling, linear-inversion tomography, and the two-photon parity-leakage
model.

Every stochastic operation takes an explicit 64-bit seed and derives one
Philox stream per sampled unit, so records are bit-reproducible regardless of
evaluation order or thread count.  Count tables accept float entries as well
as integers: exact probability tables can be fed straight into the estimators.
"""

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .bits import bit_table, check_mask, check_n, format_bits, parity, parse_bits
from .errors import (
    IncompleteRecord,
    InsufficientData,
    InvalidArgument,
)
from .parallel import parallel_map
from .protocol import (
    QuantumProtocol,
    outcome_probabilities,
    parity_mixture,
    standard_protocol,
    success_probability,
)
from .qubit import (
    bloch_to_density,
    density_to_bloch,
    measurement_axis,
    projector,
    trace_distance,
)
from .rng import (
    PURPOSE_BOOTSTRAP,
    PURPOSE_COUNTS,
    PURPOSE_NOISE,
    PURPOSE_TOMOGRAPHY,
    check_seed,
    stream,
)

AXES = ("x", "y", "z")
DEFAULT_BOOTSTRAP_REPLICATES = 200


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing strength on preparations, Gaussian jitter (radians) on
    measurement axes, and the relative weight of two-photon events."""

    depolarizing_strength: float = 0.0
    axis_jitter: float = 0.0
    two_photon_ratio: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.depolarizing_strength <= 1.0:
            raise InvalidArgument(
                f"depolarizing strength must lie in [0, 1], got {self.depolarizing_strength!r}"
            )
        if self.axis_jitter < 0.0 or not math.isfinite(self.axis_jitter):
            raise InvalidArgument(f"axis jitter must be >= 0, got {self.axis_jitter!r}")
        if self.two_photon_ratio < 0.0 or not math.isfinite(self.two_photon_ratio):
            raise InvalidArgument(f"two-photon ratio must be >= 0, got {self.two_photon_ratio!r}")


@dataclass(frozen=True)
class EstimateWithError:
    value: float
    std_error: float

    def __post_init__(self):
        if not math.isfinite(self.std_error) or self.std_error < 0.0:
            raise InvalidArgument(f"standard error must be finite and >= 0, got {self.std_error!r}")


@dataclass(frozen=True)
class CountRecord:
    """Outcome counts per (input, question) setting."""

    n: int
    counts0: np.ndarray  # (2**n, n)
    counts1: np.ndarray  # (2**n, n)

    def __post_init__(self):
        check_n(self.n)
        c0 = np.asarray(self.counts0, dtype=float)
        c1 = np.asarray(self.counts1, dtype=float)
        shape = (2**self.n, self.n)
        if c0.shape != shape or c1.shape != shape:
            raise IncompleteRecord(f"count tables must both have shape {shape}")
        if np.any(c0 < 0) or np.any(c1 < 0) or not (
            np.all(np.isfinite(c0)) and np.all(np.isfinite(c1))
        ):
            raise IncompleteRecord("counts must be finite and nonnegative")
        c0.setflags(write=False)
        c1.setflags(write=False)
        object.__setattr__(self, "counts0", c0)
        object.__setattr__(self, "counts1", c1)

    @property
    def totals(self) -> np.ndarray:
        return self.counts0 + self.counts1


@dataclass(frozen=True)
class TomographyRecord:
    """Counts along the x, y, z axes for each preparation: shape (2**n, 3, 2)."""

    n: int
    counts: np.ndarray

    def __post_init__(self):
        check_n(self.n)
        counts = np.asarray(self.counts, dtype=float)
        if counts.shape != (2**self.n, 3, 2):
            raise IncompleteRecord(
                f"tomography counts must have shape ({2**self.n}, 3, 2), got {counts.shape}"
            )
        if np.any(counts < 0) or not np.all(np.isfinite(counts)):
            raise IncompleteRecord("counts must be finite and nonnegative")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)


def apply_noise(p: QuantumProtocol, nm: NoiseModel, seed: int) -> QuantumProtocol:
    """Depolarize every preparation and tilt every measurement axis.

    Depolarizing shrinks Bloch vectors by (1 - strength); jitter rotates each
    axis by a Gaussian angle about a uniformly random perpendicular direction.
    The jitter draws are consumed even at zero strength so a run's stream
    positions do not depend on the noise parameters.
    """
    check_seed(seed)
    eps = nm.depolarizing_strength
    preps = np.empty_like(p.preparations)
    for x in range(2**p.n):
        vec = density_to_bloch(p.preparations[x])
        preps[x] = bloch_to_density((1.0 - eps) * vec)
    measurements = []
    for y in range(p.n):
        axis = measurement_axis(p.measurements[y])
        rng = stream(seed, PURPOSE_NOISE, index=y)
        phase = rng.uniform(0.0, 2.0 * math.pi)
        tilt = rng.normal(0.0, nm.axis_jitter)
        helper = np.array([1.0, 0.0, 0.0]) if abs(axis[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        e1 = helper - np.dot(helper, axis) * axis
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(axis, e1)
        perp = math.cos(phase) * e1 + math.sin(phase) * e2
        tilted = math.cos(tilt) * axis + math.sin(tilt) * perp
        measurements.append(projector(tilted))
    return QuantumProtocol(p.n, preps, tuple(measurements))


def sample_counts(p: QuantumProtocol, counts_per_setting: int, seed: int) -> CountRecord:
    """Binomial outcome counts for every (input, question) setting."""
    if not isinstance(counts_per_setting, (int, np.integer)) or counts_per_setting < 1:
        raise InvalidArgument(
            f"counts per setting must be a positive integer, got {counts_per_setting!r}"
        )
    check_seed(seed)
    probs = outcome_probabilities(p)
    settings = [(x, y) for x in range(2**p.n) for y in range(p.n)]

    def draw(setting):
        x, y = setting
        rng = stream(seed, PURPOSE_COUNTS, index=x * p.n + y)
        return int(rng.binomial(counts_per_setting, probs[x, y]))

    drawn = parallel_map(draw, settings)
    counts0 = np.array(drawn, dtype=np.int64).reshape(2**p.n, p.n)
    counts1 = counts_per_setting - counts0
    return CountRecord(p.n, counts0, counts1)


def estimate_success(c: CountRecord) -> EstimateWithError:
    """Empirical success probability with binomial error propagation.

    Settings are independent and equally weighted, so the variance is the
    weighted sum of per-setting binomial variances of the observed frequency.
    """
    totals = c.totals
    if np.any(totals <= 0):
        raise IncompleteRecord("every setting needs at least one count")
    freq0 = c.counts0 / totals
    asked = bit_table(c.n)
    correct = np.where(asked == 0, freq0, 1.0 - freq0)
    weight = 1.0 / correct.size
    value = float(correct.mean())
    variance = float(np.sum(weight**2 * correct * (1.0 - correct) / totals))
    return EstimateWithError(value, math.sqrt(variance))


def sample_tomography(p: QuantumProtocol, counts_per_axis: int, seed: int) -> TomographyRecord:
    """Counts along sigma_x, sigma_y, sigma_z for every preparation."""
    if not isinstance(counts_per_axis, (int, np.integer)) or counts_per_axis < 1:
        raise InvalidArgument(
            f"counts per axis must be a positive integer, got {counts_per_axis!r}"
        )
    check_seed(seed)
    blochs = np.array([density_to_bloch(p.preparations[x]) for x in range(2**p.n)])
    units = [(x, axis) for x in range(2**p.n) for axis in range(3)]

    def draw(unit):
        x, axis = unit
        prob0 = min(max(0.5 * (1.0 + blochs[x, axis]), 0.0), 1.0)
        rng = stream(seed, PURPOSE_TOMOGRAPHY, index=x * 3 + axis)
        return int(rng.binomial(counts_per_axis, prob0))

    drawn = parallel_map(draw, units)
    counts = np.empty((2**p.n, 3, 2))
    for (x, axis), n0 in zip(units, drawn):
        counts[x, axis, 0] = n0
        counts[x, axis, 1] = counts_per_axis - n0
    return TomographyRecord(p.n, counts)


def tomography(settings) -> np.ndarray:
    """Linear-inversion state reconstruction from per-axis outcome counts.

    settings is a (3, 2) array of [outcome-0, outcome-1] counts along the x,
    y, z axes.  The raw Bloch estimate (n0 - n1) / (n0 + n1) per axis is
    projected radially onto the Bloch ball when finite-sample noise pushes it
    outside.
    """
    table = np.asarray(settings, dtype=float)
    if table.shape != (3, 2) or np.any(table < 0) or not np.all(np.isfinite(table)):
        raise InsufficientData(f"expected nonnegative counts of shape (3, 2), got {settings!r}")
    totals = table.sum(axis=1)
    if np.any(totals <= 0):
        raise InsufficientData("every axis needs at least one count")
    vec = (table[:, 0] - table[:, 1]) / totals
    norm = float(np.linalg.norm(vec))
    if norm > 1.0:
        vec = vec / norm
    return bloch_to_density(vec)


def _reconstructed_leakage(counts: np.ndarray, n: int, mask: int) -> float:
    states = [tomography(counts[x]) for x in range(2**n)]
    members0 = [x for x in range(2**n) if parity(x, mask) == 0]
    members1 = [x for x in range(2**n) if parity(x, mask) == 1]
    mix0 = np.mean([states[x] for x in members0], axis=0)
    mix1 = np.mean([states[x] for x in members1], axis=0)
    return 0.5 + 0.25 * trace_distance(mix0, mix1)


def estimate_parity_leakage_tomographic(
    c: TomographyRecord,
    mask: int,
    seed: int = 0,
    replicates: int = DEFAULT_BOOTSTRAP_REPLICATES,
) -> EstimateWithError:
    """Parity discrimination probability from reconstructed states, with a
    parametric bootstrap standard error.

    Each replicate redraws every axis count from a binomial at the observed
    frequency and repeats the full reconstruction; replicates = 0 skips the
    bootstrap and reports a zero standard error.
    """
    check_mask(mask, c.n)
    check_seed(seed)
    if replicates < 0:
        raise InvalidArgument(f"replicates must be >= 0, got {replicates!r}")
    value = _reconstructed_leakage(c.counts, c.n, mask)
    if replicates == 0:
        return EstimateWithError(value, 0.0)
    totals = c.counts.sum(axis=2)
    if np.any(totals <= 0):
        raise InsufficientData("every axis needs at least one count")
    freq0 = c.counts[:, :, 0] / totals
    rounded = np.maximum(np.rint(totals).astype(np.int64), 1)

    def replicate(index):
        rng = stream(seed, PURPOSE_BOOTSTRAP, index=index)
        redraw0 = rng.binomial(rounded, freq0)
        redraw = np.stack([redraw0, rounded - redraw0], axis=2).astype(float)
        return _reconstructed_leakage(redraw, c.n, mask)

    samples = np.array(parallel_map(replicate, range(replicates)))
    return EstimateWithError(value, float(samples.std(ddof=1)) if replicates > 1 else 0.0)


def _hermitian_trace_norm(matrix: np.ndarray) -> float:
    re = np.ascontiguousarray(matrix.real)
    im = np.ascontiguousarray(matrix.imag)
    return float(sum(abs(v) for v in _kernels.hermitian_eigvals(re, im)))


def discrimination_probabilities(p: QuantumProtocol, mask: int) -> tuple[float, float]:
    """Best single-photon and two-photon parity discrimination probabilities.

    The two-photon case replaces each preparation by its tensor square, so the
    opposing mixtures live in the 4x4 space and their trace norm comes from
    the small-matrix Jacobi eigensolver.
    """
    check_mask(mask, p.n)
    mix0 = parity_mixture(p, mask, 0)
    mix1 = parity_mixture(p, mask, 1)
    single = 0.5 + 0.25 * trace_distance(mix0, mix1)
    members0 = [x for x in range(2**p.n) if parity(x, mask) == 0]
    members1 = [x for x in range(2**p.n) if parity(x, mask) == 1]
    pair0 = np.mean([np.kron(p.preparations[x], p.preparations[x]) for x in members0], axis=0)
    pair1 = np.mean([np.kron(p.preparations[x], p.preparations[x]) for x in members1], axis=0)
    double = 0.5 + 0.25 * _hermitian_trace_norm(pair0 - pair1)
    return single, double


def two_photon_leakage(p: QuantumProtocol, mask: int, two_photon_ratio: float) -> float:
    """Parity leakage averaged over single- and two-photon events.

    Two-photon events occur with the given probability relative to single
    events, so the weighted discrimination probability is
    (D1 + ratio * D2) / (1 + ratio).
    """
    if not 0.0 <= two_photon_ratio <= 1.0:
        raise InvalidArgument(
            f"two-photon ratio must lie in [0, 1], got {two_photon_ratio!r}"
        )
    single, double = discrimination_probabilities(p, mask)
    return (single + two_photon_ratio * double) / (1.0 + two_photon_ratio)


def estimate_to_dict(estimate: EstimateWithError, method: str, seed: int | None) -> dict:
    """Interchange form for estimates: value, error, how it was obtained, and the seed."""
    return {
        "value": estimate.value,
        "std_error": estimate.std_error,
        "method": method,
        "seed": seed,
    }


def calibrate_depolarizing(n: int, target_success: float) -> float:
    """Depolarizing strength that moves the canonical protocol to a target success.

    Born probabilities are affine in the Bloch vector, so shrinking every
    preparation by (1 - eps) moves the success linearly between its ideal
    value and 1/2.
    """
    ideal = success_probability(standard_protocol(n)).overall
    if not 0.5 <= target_success <= ideal:
        raise InvalidArgument(
            f"target success must lie in [0.5, {ideal}], got {target_success!r}"
        )
    return 1.0 - (target_success - 0.5) / (ideal - 0.5)


def counts_to_csv(c: CountRecord) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["x", "y", "n0", "n1"])
    for x in range(2**c.n):
        for y in range(c.n):
            writer.writerow(
                [format_bits(x, c.n), y + 1, _csv_number(c.counts0[x, y]), _csv_number(c.counts1[x, y])]
            )
    return buffer.getvalue()


def counts_from_csv(text: str) -> CountRecord:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["x", "y", "n0", "n1"]:
        raise IncompleteRecord("expected header x,y,n0,n1")
    if len(rows) < 2:
        raise IncompleteRecord("no count rows present")
    n = check_n(len(rows[1][0]))
    counts0 = np.full((2**n, n), np.nan)
    counts1 = np.full((2**n, n), np.nan)
    for row in rows[1:]:
        x, width = parse_bits(row[0])
        if width != n:
            raise IncompleteRecord(f"inconsistent bit width in row {row!r}")
        y = int(row[1])
        counts0[x, y - 1] = float(row[2])
        counts1[x, y - 1] = float(row[3])
    if np.isnan(counts0).any() or np.isnan(counts1).any():
        raise IncompleteRecord("count table is missing settings")
    return CountRecord(n, counts0, counts1)


def tomography_to_csv(rec: TomographyRecord) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["x", "axis", "n0", "n1"])
    for x in range(2**rec.n):
        for axis in range(3):
            writer.writerow(
                [
                    format_bits(x, rec.n),
                    AXES[axis],
                    _csv_number(rec.counts[x, axis, 0]),
                    _csv_number(rec.counts[x, axis, 1]),
                ]
            )
    return buffer.getvalue()


def tomography_from_csv(text: str) -> TomographyRecord:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["x", "axis", "n0", "n1"]:
        raise IncompleteRecord("expected header x,axis,n0,n1")
    if len(rows) < 2:
        raise IncompleteRecord("no tomography rows present")
    n = check_n(len(rows[1][0]))
    counts = np.full((2**n, 3, 2), np.nan)
    for row in rows[1:]:
        x, width = parse_bits(row[0])
        if width != n:
            raise IncompleteRecord(f"inconsistent bit width in row {row!r}")
        axis = AXES.index(row[1])
        counts[x, axis, 0] = float(row[2])
        counts[x, axis, 1] = float(row[3])
    if np.isnan(counts).any():
        raise IncompleteRecord("tomography table is missing settings")
    return TomographyRecord(n, counts)


def _csv_number(value) -> str:
    number = float(value)
    if number.is_integer():
        return str(int(number))
    return repr(number)
