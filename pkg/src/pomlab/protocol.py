"""Multiplexing protocols: success probability, parity mixtures, leakage, and
the search for maximal violation of the noncontextual bound.

A protocol maps every n-bit input to a qubit preparation and every question
y in {1..n} to a binary measurement whose outcome is the answer bit.  The
canonical protocols encode inputs as sign patterns on the Bloch sphere:
equatorial square for n = 2, cube for n = 3, with bit value 0 mapped to the
positive axis direction and the positive measurement outcome to answer 0.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import _kernels
from .bits import (
    bit,
    bit_table,
    check_mask,
    check_n,
    format_bits,
    mask_sign_table,
    parity,
    parity_masks,
    parse_bits,
    xsign_table,
)
from .errors import InvalidArgument, MalformedProtocol, UnsupportedN
from .parallel import parallel_map
from .rng import PURPOSE_OPTIMIZER, stream
from .qubit import (
    BinaryMeasurement,
    bloch_to_density,
    density_to_bloch,
    measurement_axis,
    projector,
    validate_density,
)

PENALTY_WEIGHT = 10.0
DEFAULT_RESTARTS = 20
DEFAULT_ITERATIONS = 25
_CONTINUATION_EPS = (1e-1, 1e-2, 1e-4, 1e-6, 1e-8, 0.0)


@dataclass(frozen=True)
class QuantumProtocol:
    n: int
    preparations: np.ndarray  # (2**n, 2, 2) complex, indexed by the input as integer
    measurements: tuple[BinaryMeasurement, ...]  # index y-1 answers question y

    def __post_init__(self):
        n = check_n(self.n)
        preps = np.asarray(self.preparations, dtype=complex)
        if preps.shape != (2**n, 2, 2):
            raise MalformedProtocol(
                f"preparation table must cover all {2**n} inputs, got shape {preps.shape}"
            )
        for x in range(2**n):
            validate_density(preps[x])
        if len(self.measurements) != n:
            raise MalformedProtocol(
                f"measurement table must cover questions 1..{n}, got {len(self.measurements)}"
            )
        for m in self.measurements:
            if not isinstance(m, BinaryMeasurement):
                raise MalformedProtocol("measurements must be BinaryMeasurement instances")
        preps.setflags(write=False)
        object.__setattr__(self, "preparations", preps)
        object.__setattr__(self, "measurements", tuple(self.measurements))


@dataclass(frozen=True)
class SuccessReport:
    overall: float
    per_pair: np.ndarray  # (2**n, n) probability of the correct answer
    nc_bound: float
    violation_margin: float


@dataclass(frozen=True)
class LeakageReport:
    per_parity: dict[int, float]  # mask -> best discrimination probability
    max_leakage: float


def nc_bound(n: int) -> float:
    """Noncontextual ceiling (n+1)/(2n) on the success probability."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidArgument(f"n must be a positive integer, got {n!r}")
    return (n + 1) / (2 * n)


def standard_protocol(n: int) -> QuantumProtocol:
    """The known optimal single-qubit protocols for n = 2 and n = 3.

    Input x maps to the pure state with Bloch vector ((-1)^x1, ..., (-1)^xn)
    / sqrt(n); question y is measured along the y-th coordinate axis.
    """
    if n not in (2, 3):
        raise UnsupportedN(f"standard protocols exist for n in {{2, 3}}, got {n!r}")
    scale = 1.0 / math.sqrt(n)
    preps = np.empty((2**n, 2, 2), dtype=complex)
    for x in range(2**n):
        vec = np.zeros(3)
        for i in range(1, n + 1):
            vec[i - 1] = scale * (1.0 - 2.0 * bit(x, i))
        preps[x] = bloch_to_density(vec)
    axes = np.eye(3)
    measurements = tuple(projector(axes[y]) for y in range(n))
    return QuantumProtocol(n, preps, measurements)


def outcome_probabilities(p: QuantumProtocol) -> np.ndarray:
    """(2**n, n) Born probabilities of outcome 0 for every setting."""
    effects = np.stack([m.effect0 for m in p.measurements])
    table = np.einsum("xij,yji->xy", p.preparations, effects).real
    return np.clip(table, 0.0, 1.0)


def success_probability(p: QuantumProtocol) -> SuccessReport:
    """Average probability that the measurement outcome matches the asked bit."""
    p0 = outcome_probabilities(p)
    asked = bit_table(p.n)
    per_pair = np.where(asked == 0, p0, 1.0 - p0)
    overall = float(per_pair.mean())
    bound = nc_bound(p.n)
    return SuccessReport(overall, per_pair, bound, overall - bound)


def parity_mixture(p: QuantumProtocol, mask: int, value: int) -> np.ndarray:
    """Average preparation over inputs whose mask-parity equals value."""
    check_mask(mask, p.n)
    if value not in (0, 1):
        raise InvalidArgument(f"parity value must be 0 or 1, got {value!r}")
    members = [x for x in range(2**p.n) if parity(x, mask) == value]
    return p.preparations[members].mean(axis=0)


def parity_leakage(p: QuantumProtocol) -> LeakageReport:
    """Best discrimination probability 1/2 + Tr|rho0 - rho1|/4 for every parity."""
    per = {}
    for mask in parity_masks(p.n):
        mix0 = parity_mixture(p, mask, 0)
        mix1 = parity_mixture(p, mask, 1)
        diff = mix0 - mix1
        dist = _kernels.trace_norm_herm2(
            diff[0, 0].real, diff[0, 1].real, diff[0, 1].imag, diff[1, 1].real
        )
        per[mask] = 0.5 + 0.25 * dist
    return LeakageReport(per, max(per.values()))


def _angles_to_protocol(n: int, angles: np.ndarray) -> QuantumProtocol:
    preps = np.empty((2**n, 2, 2), dtype=complex)
    for x in range(2**n):
        th, ph = angles[2 * x], angles[2 * x + 1]
        vec = np.array(
            [math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)]
        )
        preps[x] = bloch_to_density(vec)
    base = 2 * 2**n
    measurements = []
    for y in range(n):
        th, ph = angles[base + 2 * y], angles[base + 2 * y + 1]
        axis = np.array(
            [math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)]
        )
        measurements.append(projector(axis))
    return QuantumProtocol(n, preps, tuple(measurements))


def _optimize_one_restart(n, restart, iterations, mu, xsign, msign):
    count = 2 * 2**n + 2 * n
    angles = stream(restart, PURPOSE_OPTIMIZER, index=n).uniform(0.0, 2.0 * math.pi, count)
    if iterations > 0:
        for eps in _CONTINUATION_EPS:
            res = minimize(
                lambda a: -_kernels.pom_objective(a, xsign, msign, mu, eps),
                angles,
                method="Powell",
                options={"maxiter": iterations, "xtol": 1e-12, "ftol": 1e-14},
            )
            angles = res.x
    value = _kernels.pom_objective(angles, xsign, msign, mu, 0.0)
    return value, angles


def optimize_protocol(
    n: int,
    seeds: int = DEFAULT_RESTARTS,
    iterations: int = DEFAULT_ITERATIONS,
) -> tuple[QuantumProtocol, SuccessReport]:
    """Search pure-state protocols for maximal success under a leakage penalty.

    Preparations are parameterized by two Bloch angles each and measurements by
    two axis angles each.  Each restart runs Powell's direction-set descent on
    success - PENALTY_WEIGHT * (total parity trace distance), annealing a
    hyperbolic smoothing of the penalty to zero so the search can travel along
    the leakage-free manifold instead of stalling at its first point of
    contact.  Restarts are independent Philox streams; the best exact-penalty
    objective wins, with ties broken toward the lower restart index.
    Best-effort: iterations = 0 returns the best unoptimized restart.
    """
    if n not in (2, 3):
        raise UnsupportedN(f"optimizer supports n in {{2, 3}}, got {n!r}")
    if not isinstance(seeds, (int, np.integer)) or seeds < 1:
        raise InvalidArgument(f"seeds must be a positive integer, got {seeds!r}")
    if not isinstance(iterations, (int, np.integer)) or iterations < 0:
        raise InvalidArgument(f"iterations must be a nonnegative integer, got {iterations!r}")
    xsign = xsign_table(n)
    msign = mask_sign_table(n, parity_masks(n))
    runs = parallel_map(
        lambda r: _optimize_one_restart(n, r, iterations, PENALTY_WEIGHT, xsign, msign),
        range(seeds),
    )
    best_value, best_angles = runs[0]
    for value, angles in runs[1:]:
        if value > best_value:
            best_value, best_angles = value, angles
    protocol = _angles_to_protocol(n, best_angles)
    return protocol, success_probability(protocol)


def protocol_to_dict(p: QuantumProtocol) -> dict:
    """JSON-ready form: Bloch vectors for states, axes for projective measurements."""
    return {
        "n": p.n,
        "preparations": [
            {
                "x": format_bits(x, p.n),
                "bloch": [float(v) for v in density_to_bloch(p.preparations[x])],
            }
            for x in range(2**p.n)
        ],
        "measurements": [
            {
                "y": y + 1,
                "axis": [float(v) for v in measurement_axis(m)],
            }
            for y, m in enumerate(p.measurements)
        ],
    }


def protocol_from_dict(data: dict) -> QuantumProtocol:
    try:
        n = int(data["n"])
        prep_entries = data["preparations"]
        meas_entries = data["measurements"]
    except (KeyError, TypeError) as exc:
        raise MalformedProtocol(f"missing protocol field: {exc}") from exc
    check_n(n)
    preps = np.full((2**n, 2, 2), np.nan, dtype=complex)
    for entry in prep_entries:
        x, width = parse_bits(entry["x"])
        if width != n:
            raise MalformedProtocol(f"input {entry['x']!r} does not have {n} bits")
        vec = np.asarray(entry["bloch"], dtype=float)
        norm = float(np.linalg.norm(vec))
        # rounding to 12 significant digits in reports can push a unit vector
        # marginally outside the ball; project those back
        if 1.0 < norm <= 1.0 + 1e-9:
            vec = vec / norm
        preps[x] = bloch_to_density(vec)
    if np.isnan(preps).any():
        raise MalformedProtocol("preparation table is incomplete")
    slots: list[BinaryMeasurement | None] = [None] * n
    for entry in meas_entries:
        y = int(entry["y"])
        if not 1 <= y <= n:
            raise MalformedProtocol(f"question index {y} outside 1..{n}")
        slots[y - 1] = projector(np.asarray(entry["axis"], dtype=float))
    if any(m is None for m in slots):
        raise MalformedProtocol("measurement table is incomplete")
    return QuantumProtocol(n, preps, tuple(slots))
