"""Acceptance suite: every release criterion at its stated tolerance.

Each test prints one PASS/FAIL line (visible with pytest -s or in the summary
of a failing run) and then asserts, so the suite doubles as a human-readable
checklist.  Run with: pytest tests/test_acceptance.py -s
"""

import json
import math
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from pomlab import classical, experiment, hvmodel, protocol, qubit
from pomlab.bits import parity_masks
from pomlab.errors import NotParityOblivious

COS2_PI8 = math.cos(math.pi / 8) ** 2
N3_SUCCESS = 0.5 * (1.0 + 1.0 / math.sqrt(3.0))


def report(number: int, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {number:2d} {status}: {detail}")
    assert ok, f"criterion {number}: {detail}"


def test_criterion_01_exact_quantum_values():
    start = time.perf_counter()
    got2 = protocol.success_probability(protocol.standard_protocol(2)).overall
    got3 = protocol.success_probability(protocol.standard_protocol(3)).overall
    elapsed = time.perf_counter() - start
    ok = (
        abs(got2 - COS2_PI8) < 1e-12
        and abs(got3 - N3_SUCCESS) < 1e-12
        and elapsed < 1.0
    )
    report(
        1,
        ok,
        f"success(2)={got2:.12f} vs cos^2(pi/8)={COS2_PI8:.12f}, "
        f"success(3)={got3:.12f} vs (1+1/sqrt(3))/2={N3_SUCCESS:.12f}, {elapsed:.3f}s",
    )


def test_criterion_02_bounds_and_margins():
    start = time.perf_counter()
    bound2 = protocol.nc_bound(2)
    bound3 = protocol.nc_bound(3)
    margin2 = protocol.success_probability(protocol.standard_protocol(2)).violation_margin
    margin3 = protocol.success_probability(protocol.standard_protocol(3)).violation_margin
    elapsed = time.perf_counter() - start
    ok = (
        bound2 == 0.75
        and bound3 == 2 / 3
        and abs(margin2 - (COS2_PI8 - 0.75)) < 1e-9
        and abs(margin3 - (N3_SUCCESS - 2 / 3)) < 1e-9
        and elapsed < 1.0
    )
    report(
        2,
        ok,
        f"bounds=({bound2}, {bound3:.12f}), margins=({margin2:.6f}, {margin3:.6f}), "
        f"{elapsed:.3f}s",
    )


def test_criterion_03_quantum_parity_obliviousness():
    worst_distance = 0.0
    worst_entry = 0.0
    for n in (2, 3):
        p = protocol.standard_protocol(n)
        for mask in parity_masks(n):
            mix0 = protocol.parity_mixture(p, mask, 0)
            mix1 = protocol.parity_mixture(p, mask, 1)
            worst_distance = max(worst_distance, qubit.trace_distance(mix0, mix1))
            worst_entry = max(
                worst_entry,
                float(np.max(np.abs(mix0 - np.eye(2) / 2))),
                float(np.max(np.abs(mix1 - np.eye(2) / 2))),
            )
    ok = worst_distance < 1e-12 and worst_entry < 1e-12
    report(
        3,
        ok,
        f"max trace distance {worst_distance:.2e}, max deviation from I/2 {worst_entry:.2e}",
    )


@pytest.mark.slow
def test_criterion_04_classical_oracle_equivalence():
    start = time.perf_counter()
    results = []
    ok = True
    for n, alphabets in ((2, (2, 3, 4)), (3, (2, 4, 6))):
        closed = protocol.nc_bound(n)
        previous = 0.0
        for alphabet in alphabets:
            value = classical.brute_force_optimum(n, alphabet)
            results.append(f"({n},{alphabet})={value:.9f}")
            ok = ok and abs(value - closed) <= 1e-9 and value >= previous - 1e-12
            previous = value
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 300.0
    report(4, ok, f"{', '.join(results)}; {elapsed:.1f}s")


def test_criterion_05_fourier_equivalence_suite():
    start = time.perf_counter()
    rng = np.random.default_rng(20260809)
    worst_reassembly = 0.0
    worst_round_trip = 0.0
    for index in range(1000):
        n = 2 + index % 3
        alphabet = 2 + index % 7
        enc = classical.random_parity_oblivious_encoding(n, alphabet, rng)
        decomposition = classical.decompose(enc)
        worst_reassembly = max(
            worst_reassembly, float(np.max(np.abs(decomposition.reassemble() - enc.table)))
        )
        table = classical.reconstruct(classical.fourier_transform(enc))
        worst_round_trip = max(worst_round_trip, float(np.max(np.abs(table - enc.table))))
    rejected = 0
    smallest_violation = math.inf
    for index in range(1000):
        n = 2 + index % 3
        alphabet = 2 + index % 7
        while True:
            enc = classical.random_encoding(n, alphabet, rng)
            oblivious, violation = classical.is_parity_oblivious(enc)
            if not oblivious:
                break
        smallest_violation = min(smallest_violation, violation)
        try:
            classical.decompose(enc)
        except NotParityOblivious:
            rejected += 1
        table = classical.reconstruct(classical.fourier_transform(enc))
        worst_round_trip = max(worst_round_trip, float(np.max(np.abs(table - enc.table))))
    elapsed = time.perf_counter() - start
    ok = (
        worst_reassembly <= 1e-10
        and worst_round_trip <= 1e-10
        and rejected == 1000
        and smallest_violation > 0.0
        and elapsed < 60.0
    )
    report(
        5,
        ok,
        f"reassembly<= {worst_reassembly:.2e}, round-trip<= {worst_round_trip:.2e}, "
        f"rejected {rejected}/1000 (min violation {smallest_violation:.2e}); {elapsed:.1f}s",
    )


def test_criterion_06_hidden_variable_bound_suite():
    start = time.perf_counter()
    rng = np.random.default_rng(8094052)
    worst_excess = -math.inf
    condition_failures = 0
    for index in range(1000):
        n = 2 + index % 2
        model = hvmodel.random_parity_oblivious_model(n, rng, components=1 + index % 3)
        verdict, _ = hvmodel.hv_parity_condition(model)
        if not verdict:
            condition_failures += 1
        excess = hvmodel.hv_optimal_success(model) - (n + 1) / (2 * n)
        worst_excess = max(worst_excess, excess)
    revelation_breaks_bound = all(
        hvmodel.hv_optimal_success(hvmodel.full_revelation_model(n)) > protocol.nc_bound(n)
        for n in (2, 3)
    )
    elapsed = time.perf_counter() - start
    ok = (
        condition_failures == 0
        and worst_excess <= 1e-9
        and revelation_breaks_bound
        and elapsed < 60.0
    )
    report(
        6,
        ok,
        f"worst excess over (n+1)/2n: {worst_excess:.2e}, condition failures "
        f"{condition_failures}, full revelation exceeds bound: {revelation_breaks_bound}; "
        f"{elapsed:.1f}s",
    )


@pytest.mark.slow
def test_criterion_07_experiment_emulation():
    start = time.perf_counter()
    details = []
    ok = True
    for n, target, counts, quoted_sigma in (
        (2, 0.851929, 35_000_000, 3.0e-5),
        (3, 0.786476, 24_000_000, 1.7e-5),
    ):
        strength = experiment.calibrate_depolarizing(n, target)
        noisy = experiment.apply_noise(
            protocol.standard_protocol(n),
            experiment.NoiseModel(depolarizing_strength=strength),
            seed=2026,
        )
        estimate = experiment.estimate_success(
            experiment.sample_counts(noisy, counts, seed=2026)
        )
        pulls = abs(estimate.value - target) / estimate.std_error
        ratio = estimate.std_error / quoted_sigma
        details.append(
            f"n={n}: {estimate.value:.6f}+-{estimate.std_error:.1e} "
            f"({pulls:.2f} sigma from {target}, sigma ratio {ratio:.2f})"
        )
        ok = ok and pulls <= 5.0 and 0.5 <= ratio <= 2.0
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 120.0
    report(7, ok, f"{'; '.join(details)}; {elapsed:.1f}s")


def test_criterion_08_two_photon_leakage():
    p2 = protocol.standard_protocol(2)
    p3 = protocol.standard_protocol(3)
    _, double2 = experiment.discrimination_probabilities(p2, 0b11)
    doubles3 = [
        experiment.discrimination_probabilities(p3, mask)[1] for mask in (0b011, 0b101, 0b110)
    ]
    _, double_full = experiment.discrimination_probabilities(p3, 0b111)
    weighted = experiment.two_photon_leakage(p2, 0b11, 0.007)
    ok = (
        abs(double2 - 0.75) < 1e-12
        and all(abs(d - 2 / 3) < 1e-12 for d in doubles3)
        and abs(double_full - 0.5) < 1e-12
        and abs(weighted - 0.501738) < 1e-6
        and weighted < 0.504
        and 0.504 - weighted <= 0.005
    )
    report(
        8,
        ok,
        f"D2(2-bit)={double2:.12f}, D2(3-bit, weight 2)={doubles3[0]:.12f}, "
        f"D2(3-bit, full)={double_full:.12f}, weighted@0.007={weighted:.6f}",
    )


@pytest.mark.slow
def test_criterion_09_optimizer_reaches_maximal_violation():
    start = time.perf_counter()
    best, success = protocol.optimize_protocol(2, seeds=20)
    leakage = protocol.parity_leakage(best)
    elapsed = time.perf_counter() - start
    ok = (
        success.overall >= 0.853553 - 1e-4
        and leakage.max_leakage <= 0.5 + 1e-6
        and elapsed < 120.0
    )
    report(
        9,
        ok,
        f"best success {success.overall:.9f} (target >= {0.853553 - 1e-4}), "
        f"max leakage {leakage.max_leakage:.9f}; {elapsed:.1f}s over 20 restarts",
    )


@pytest.mark.slow
def test_criterion_10_simulation_reports_are_byte_identical():
    args = [
        sys.executable, "-m", "pomlab",
        "simulate", "--n", "2", "--counts", "1e5", "--seed", "99",
        "--depolarizing", "0.0046", "--jitter", "0.002",
    ]

    def run(threads):
        env = dict(os.environ, POMLAB_THREADS=threads)
        return subprocess.run(args, capture_output=True, env=env, check=True).stdout

    first = run("1")
    second = run("1")
    eight = run("8")
    ok = first == second == eight and json.loads(first)["seed"] == 99
    report(
        10,
        ok,
        f"report bytes: run1==run2 is {first == second}, "
        f"threads 1==8 is {first == eight} ({len(first)} bytes)",
    )
