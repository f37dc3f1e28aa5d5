"""Command-line front end emitting reproducible machine-readable reports.

Every report embeds the tool version, the argument vector, and the seed, so a
run can be reproduced byte-for-byte.  JSON numbers are rounded to 12
significant digits (enough to preserve 1e-12 comparisons); CSV output is a
flat key,value rendering for spreadsheets.  Exit codes: 0 success, 2
usage/validation error, 3 internal failure.
"""

import argparse
import json
import os
import sys
import tempfile

from . import __version__
from .bits import format_bits, parity_masks
from .errors import PomlabError
from .classical import brute_force_optimum
from .experiment import (
    NoiseModel,
    apply_noise,
    discrimination_probabilities,
    estimate_parity_leakage_tomographic,
    estimate_success,
    estimate_to_dict,
    sample_counts,
    sample_tomography,
    two_photon_leakage,
)
from .protocol import (
    nc_bound,
    optimize_protocol,
    parity_leakage,
    protocol_to_dict,
    standard_protocol,
    success_probability,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INTERNAL = 3

AGREEMENT_TOL = 1e-9


def _counts_arg(text: str) -> int:
    value = float(text)
    if not value.is_integer():
        raise argparse.ArgumentTypeError(f"counts must be a whole number, got {text!r}")
    return int(value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pomlab",
        description="Parity-oblivious multiplexing: simulation, bounds, and emulation",
    )
    parser.add_argument("--version", action="version", version=f"pomlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", help="write the report to this path (atomic)")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    demo = sub.add_parser("demo", help="canonical protocol: success, bound, leakage")
    demo.add_argument("--n", type=int, required=True)
    add_common(demo)

    classical = sub.add_parser("classical", help="brute-force classical optimum vs closed form")
    classical.add_argument("--n", type=int, required=True)
    classical.add_argument("--alphabet", type=int, default=4)
    add_common(classical)

    simulate = sub.add_parser("simulate", help="noisy finite-count emulation of a run")
    simulate.add_argument("--n", type=int, required=True)
    simulate.add_argument("--counts", type=_counts_arg, required=True,
                          help="coincidence counts per setting")
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--depolarizing", type=float, default=0.0)
    simulate.add_argument("--jitter", type=float, default=0.0)
    simulate.add_argument("--two-photon", dest="two_photon", type=float, default=0.0)
    add_common(simulate)

    optimize = sub.add_parser("optimize", help="search for the maximal quantum violation")
    optimize.add_argument("--n", type=int, required=True)
    optimize.add_argument("--seeds", type=int, default=20)
    optimize.add_argument("--iterations", type=int, default=25)
    add_common(optimize)

    leakage = sub.add_parser("leakage", help="single- and two-photon parity leakage")
    leakage.add_argument("--n", type=int, required=True)
    leakage.add_argument("--two-photon", dest="two_photon", type=float, default=0.007)
    add_common(leakage)

    return parser


def _round12(value):
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, dict):
        return {k: _round12(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round12(v) for v in value]
    return value


def _flatten(value, prefix=""):
    if isinstance(value, dict):
        for key, item in value.items():
            yield from _flatten(item, f"{prefix}{key}.")
    elif isinstance(value, (list, tuple)):
        for index, item in enumerate(value):
            yield from _flatten(item, f"{prefix}{index}.")
    else:
        yield prefix[:-1], value


def _render(report: dict, fmt: str) -> str:
    rounded = _round12(report)
    if fmt == "json":
        return json.dumps(rounded, indent=2) + "\n"
    lines = ["key,value"]
    for key, value in _flatten(rounded):
        lines.append(f"{key},{value}")
    return "\n".join(lines) + "\n"


def _emit(report: dict, args) -> None:
    text = _render(report, args.format)
    if args.out:
        directory = os.path.dirname(os.path.abspath(args.out))
        fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".pomlab-")
        try:
            with os.fdopen(fd, "w") as handle:
                handle.write(text)
            os.replace(tmp_path, args.out)
        except BaseException:
            if os.path.exists(tmp_path):
                os.unlink(tmp_path)
            raise
    else:
        sys.stdout.write(text)


def _envelope(command: str, argv: list[str], seed=None) -> dict:
    return {
        "tool": "pomlab",
        "version": __version__,
        "command": command,
        "argv": argv,
        "seed": seed,
    }


def _require(parser, condition: bool, message: str) -> None:
    if not condition:
        parser.error(message)


def cmd_demo(args, argv) -> dict:
    report = _envelope("demo", argv)
    protocol = standard_protocol(args.n)
    success = success_probability(protocol)
    leakage = parity_leakage(protocol)
    report["inputs"] = {"n": args.n}
    report["results"] = {
        "success": success.overall,
        "nc_bound": success.nc_bound,
        "violation_margin": success.violation_margin,
        "max_leakage": leakage.max_leakage,
        "per_parity_leakage": {
            format_bits(mask, args.n): value for mask, value in sorted(leakage.per_parity.items())
        },
    }
    return report


def cmd_classical(args, argv) -> dict:
    report = _envelope("classical", argv)
    oracle = brute_force_optimum(args.n, args.alphabet)
    closed_form = nc_bound(args.n)
    agree = abs(oracle - closed_form) <= AGREEMENT_TOL
    report["inputs"] = {"n": args.n, "alphabet": args.alphabet}
    report["results"] = {
        "oracle": oracle,
        "closed_form": closed_form,
        "agree": agree,
        "note": None if agree else "alphabet-limited",
    }
    return report


def cmd_simulate(args, argv) -> dict:
    report = _envelope("simulate", argv, seed=args.seed)
    noise = NoiseModel(args.depolarizing, args.jitter, args.two_photon)
    protocol = apply_noise(standard_protocol(args.n), noise, args.seed)
    record = sample_counts(protocol, args.counts, args.seed)
    success = estimate_success(record)
    tomo = sample_tomography(protocol, args.counts, args.seed)
    per_parity = {}
    worst_mask = None
    for mask in parity_masks(args.n):
        estimate = estimate_parity_leakage_tomographic(tomo, mask, seed=args.seed)
        per_parity[format_bits(mask, args.n)] = estimate_to_dict(
            estimate, "tomography-bootstrap", args.seed
        )
        if worst_mask is None or estimate.value > per_parity[worst_mask]["value"]:
            worst_mask = format_bits(mask, args.n)
    weighted = {
        format_bits(mask, args.n): two_photon_leakage(protocol, mask, args.two_photon)
        for mask in parity_masks(args.n)
    }
    report["inputs"] = {
        "n": args.n,
        "counts_per_setting": args.counts,
        "depolarizing": args.depolarizing,
        "jitter": args.jitter,
        "two_photon": args.two_photon,
    }
    report["results"] = {
        "success": estimate_to_dict(success, "binomial-counting", args.seed),
        "tomographic_leakage": {
            "per_parity": per_parity,
            "max_mask": worst_mask,
            "max": per_parity[worst_mask],
        },
        "model_weighted_leakage": {
            "per_parity": weighted,
            "max": max(weighted.values()),
        },
    }
    return report


def cmd_optimize(args, argv) -> dict:
    report = _envelope("optimize", argv)
    protocol, success = optimize_protocol(args.n, seeds=args.seeds, iterations=args.iterations)
    leakage = parity_leakage(protocol)
    reference_success = success_probability(standard_protocol(args.n))
    report["inputs"] = {"n": args.n, "seeds": args.seeds, "iterations": args.iterations}
    report["results"] = {
        "success": success.overall,
        "nc_bound": success.nc_bound,
        "violation_margin": success.violation_margin,
        "max_leakage": leakage.max_leakage,
        "standard_success": reference_success.overall,
        "gap_to_standard": success.overall - reference_success.overall,
        "exploratory": args.n == 3,
        "protocol": protocol_to_dict(protocol),
    }
    return report


def cmd_leakage(args, argv) -> dict:
    report = _envelope("leakage", argv)
    protocol = standard_protocol(args.n)
    per_parity = {}
    for mask in parity_masks(args.n):
        single, double = discrimination_probabilities(protocol, mask)
        per_parity[format_bits(mask, args.n)] = {
            "single_photon": single,
            "two_photon": double,
            "weighted": (single + args.two_photon * double) / (1.0 + args.two_photon),
        }
    report["inputs"] = {"n": args.n, "two_photon": args.two_photon}
    report["results"] = {
        "per_parity": per_parity,
        "max_weighted": max(entry["weighted"] for entry in per_parity.values()),
    }
    return report


def _validate(parser, args) -> None:
    if args.command in ("demo", "simulate", "optimize", "leakage"):
        _require(parser, args.n in (2, 3), f"--n must be 2 or 3, got {args.n}")
    if args.command == "classical":
        _require(parser, 1 <= args.n <= 3, f"--n must be 1, 2, or 3, got {args.n}")
        _require(parser, 1 <= args.alphabet <= 8,
                 f"--alphabet must lie in 1..8, got {args.alphabet}")
    if args.command == "simulate":
        _require(parser, args.counts >= 1, f"--counts must be >= 1, got {args.counts}")
        _require(parser, 0 <= args.seed < 2**64, f"--seed must be a 64-bit value, got {args.seed}")
        _require(parser, 0.0 <= args.depolarizing <= 1.0,
                 f"--depolarizing must lie in [0, 1], got {args.depolarizing}")
        _require(parser, args.jitter >= 0.0, f"--jitter must be >= 0, got {args.jitter}")
        _require(parser, 0.0 <= args.two_photon <= 1.0,
                 f"--two-photon must lie in [0, 1], got {args.two_photon}")
    if args.command == "optimize":
        _require(parser, args.seeds >= 1, f"--seeds must be >= 1, got {args.seeds}")
        _require(parser, args.iterations >= 0,
                 f"--iterations must be >= 0, got {args.iterations}")
    if args.command == "leakage":
        _require(parser, 0.0 <= args.two_photon <= 1.0,
                 f"--two-photon must lie in [0, 1], got {args.two_photon}")


_COMMANDS = {
    "demo": cmd_demo,
    "classical": cmd_classical,
    "simulate": cmd_simulate,
    "optimize": cmd_optimize,
    "leakage": cmd_leakage,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _validate(parser, args)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report = _COMMANDS[args.command](args, argv)
        _emit(report, args)
    except PomlabError as exc:
        print(f"pomlab: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as exc:
        print(f"pomlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def console_entry() -> None:
    sys.exit(main())
