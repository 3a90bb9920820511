"""Command-line interface.

Subcommands: ``bound`` (local bounds by both routes), ``quantum``
(reference-setup values and correlators), ``threshold`` (noise
robustness and violation verdicts), ``sweep`` (per-dimension table),
``optimize`` (phase search), and ``reproduce`` (reference constants
recomputed and checked).

Reports print as aligned text by default; ``--format json`` and
``--format csv`` emit machine-readable versions whose floats
round-trip at full precision.  ``QUDIT_BELL_OUTPUT_DIR`` names the
default directory for files the CLI creates on its own (currently the
optimizer trace).  Exit codes: 0 success, 2 usage or validation error,
3 internal cross-check failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .expressions import FAMILIES, build_expression, evaluate
from .local_models import (
    ENUMERATION_CAP,
    EnumerationCapError,
    local_bound_bruteforce,
    local_bound_cases,
)
from .optimize import OptimizationProblem, maximize, write_trace_csv
from .quantum import (
    NoiseModel,
    asymptotic_value,
    closed_form_distribution,
    noise_threshold,
    noisy_value,
    ordered_shifts,
    quantum_correlator,
    quantum_value,
    quantum_value_I,
)

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CROSS_CHECK = 3

SCHEMA_VERSION = 1
OUTPUT_DIR_ENV = "QUDIT_BELL_OUTPUT_DIR"

# Reference decimals are checked at this relative tolerance.
REPRODUCTION_RTOL = 5e-5

# Dimensions up to this have the brute-force route cross-checked in sweeps.
SWEEP_CROSS_CHECK_MAX_D = 16

# Two methods computing the same exact rational must agree to roundoff.
CROSS_CHECK_ATOL = 1e-12


class UsageError(ValueError):
    """Invalid argument values (exit code 2)."""


class CrossCheckError(RuntimeError):
    """Two independent computations of the same quantity disagree (exit 3)."""


@dataclass
class Report:
    """One command's output in all three formats."""

    payload: dict
    human: list[str]
    csv_rows: list[list] = field(default_factory=list)


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _csv_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_dimension(text: str) -> int:
    try:
        d = int(text)
    except ValueError:
        raise UsageError(f"dimension must be an integer, got {text!r}") from None
    if d < 2:
        raise UsageError(f"dimension must be >= 2, got {d}")
    return d


def _parse_dimension_range(text: str) -> tuple[int, int]:
    if ".." in text:
        lo_text, _, hi_text = text.partition("..")
        lo, hi = _parse_dimension(lo_text), _parse_dimension(hi_text)
        if hi < lo:
            raise UsageError(f"empty dimension range {text!r}")
        return lo, hi
    d = _parse_dimension(text)
    return d, d


def _output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "."))


def _emit(args: argparse.Namespace, report: Report) -> None:
    if args.format == "json":
        text = json.dumps(report.payload, indent=2) + "\n"
    elif args.format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        for row in report.csv_rows:
            writer.writerow([_csv_cell(cell) for cell in row])
        text = buffer.getvalue()
    else:
        text = "\n".join(report.human) + "\n"
    if args.output:
        path = Path(args.output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        print(f"wrote {path}")
    else:
        sys.stdout.write(text)


def _base_payload(command: str, **extra) -> dict:
    payload = {"schema_version": SCHEMA_VERSION, "command": command}
    payload.update(extra)
    return payload


def cmd_bound(args: argparse.Namespace) -> tuple[Report, int]:
    d = _parse_dimension(args.dimension)
    family = args.family
    expr = build_expression(family, d)

    brute_value = None
    maximizer_count = None
    try:
        brute_value, maximizers = local_bound_bruteforce(expr, cap=args.cap)
        maximizer_count = len(maximizers)
    except EnumerationCapError as exc:
        if family != "Id":
            raise UsageError(str(exc)) from exc

    cases_value = None
    attainable = None
    if family == "Id":
        cases_value, attainable_set = local_bound_cases(d)
        attainable = sorted(attainable_set, reverse=True)
        if brute_value is not None and abs(brute_value - cases_value) > CROSS_CHECK_ATOL:
            raise CrossCheckError(
                f"brute-force bound {brute_value!r} disagrees with "
                f"case analysis {cases_value!r} at d={d}"
            )

    bound = cases_value if cases_value is not None else brute_value
    payload = _base_payload(
        "bound",
        family=family,
        dimension=d,
        local_bound=bound,
        bruteforce_value=brute_value,
        bruteforce_maximizers=maximizer_count,
        case_value=cases_value,
        attainable_values=attainable,
    )
    human = [f"family {family}, d = {d}", f"local bound = {_fmt(bound)}"]
    if brute_value is not None:
        human.append(
            f"brute force over {d}^4 strategies: max = {_fmt(brute_value)} "
            f"({maximizer_count} maximizers)"
        )
    else:
        human.append(f"brute force skipped: {d}^4 exceeds cap {args.cap}")
    if cases_value is not None:
        spectrum = ", ".join(_fmt(v) for v in attainable)
        human.append(f"case analysis: max = {_fmt(cases_value)}")
        human.append(f"attainable deterministic values: {spectrum}")
    csv_rows = [["key", "value"], ["family", family], ["dimension", d], ["local_bound", bound]]
    if brute_value is not None:
        csv_rows.append(["bruteforce_value", brute_value])
        csv_rows.append(["bruteforce_maximizers", maximizer_count])
    if cases_value is not None:
        csv_rows.append(["case_value", cases_value])
        for i, v in enumerate(attainable):
            csv_rows.append([f"attainable_{i}", v])
    return Report(payload, human, csv_rows), EXIT_OK


def cmd_quantum(args: argparse.Namespace) -> tuple[Report, int]:
    d = _parse_dimension(args.dimension)
    value_id = quantum_value(d)
    value_i = quantum_value_I(d)
    shifts = ordered_shifts(d)
    correlators = [(c, quantum_correlator(c, d)) for c in shifts]
    payload = _base_payload(
        "quantum",
        dimension=d,
        quantum_value_Id=value_id,
        quantum_value_I=value_i,
        correlators=[{"shift": c, "value": q} for c, q in correlators],
    )
    human = [
        f"d = {d}",
        f"Id value at reference setup = {_fmt(value_id)}",
        f"I value at reference setup  = {_fmt(value_i)}",
        "correlators q_c (decreasing):",
    ]
    human += [f"  c = {c:>3d}: {_fmt(q)}" for c, q in correlators]
    csv_rows = [["shift", "correlator"]] + [[c, q] for c, q in correlators]
    return Report(payload, human, csv_rows), EXIT_OK


def _family_quantum_profile(family: str, d: int) -> tuple[float, float, float]:
    """(quantum value, local bound, uniform-distribution value) for a family."""
    if family == "Id":
        return quantum_value(d), 2.0, 0.0
    if family == "I3":
        value = evaluate(build_expression("I3", d), closed_form_distribution(d))
        return value, 2.0, 0.0
    return quantum_value_I(d), 3.0, 4.0 / d


def cmd_threshold(args: argparse.Namespace) -> tuple[Report, int]:
    d = _parse_dimension(args.dimension)
    family = args.family
    value, bound, uniform_value = _family_quantum_profile(family, d)
    if value <= bound:
        raise CrossCheckError(
            f"reference setup does not violate family {family} at d={d}"
        )
    if family == "Id":
        threshold = noise_threshold(d)
    else:
        threshold = (bound - uniform_value) / (value - uniform_value)
    payload = _base_payload(
        "threshold",
        family=family,
        dimension=d,
        quantum_value=value,
        local_bound=bound,
        noise_threshold=threshold,
    )
    human = [
        f"family {family}, d = {d}",
        f"quantum value at reference setup = {_fmt(value)}",
        f"local bound = {_fmt(bound)}",
        f"noise threshold p_min = {_fmt(threshold)}",
    ]
    csv_rows = [
        ["key", "value"],
        ["family", family],
        ["dimension", d],
        ["quantum_value", value],
        ["local_bound", bound],
        ["noise_threshold", threshold],
    ]
    if args.noise_p is not None:
        p = args.noise_p
        if not 0.0 <= p <= 1.0:
            raise UsageError(f"--noise-p must lie in [0, 1], got {p}")
        if family == "Id":
            noisy = noisy_value(d, NoiseModel(p))
        else:
            noisy = p * value + (1.0 - p) * uniform_value
        verdict = "violated" if noisy > bound else "not violated"
        payload["noise_p"] = p
        payload["noisy_value"] = noisy
        payload["verdict"] = verdict
        human.append(f"noisy value at p = {_fmt(p)}: {_fmt(noisy)} -> {verdict}")
        csv_rows += [["noise_p", p], ["noisy_value", noisy], ["verdict", verdict]]
    return Report(payload, human, csv_rows), EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> tuple[Report, int]:
    lo, hi = _parse_dimension_range(args.dimension)
    if args.family != "Id":
        raise UsageError("sweep reports the Id family; other families are not supported")
    rows = []
    for d in range(lo, hi + 1):
        bound, _ = local_bound_cases(d)
        if d <= SWEEP_CROSS_CHECK_MAX_D:
            brute, _ = local_bound_bruteforce(build_expression("Id", d))
            if abs(brute - bound) > CROSS_CHECK_ATOL:
                raise CrossCheckError(
                    f"brute-force bound {brute!r} disagrees with "
                    f"case analysis {bound!r} at d={d}"
                )
        rows.append((d, bound, quantum_value(d), noise_threshold(d)))
    payload = _base_payload(
        "sweep",
        family="Id",
        rows=[
            {"d": d, "local_bound": b, "quantum_value": q, "noise_threshold": t}
            for d, b, q, t in rows
        ],
    )
    header = ["d", "local_bound", "quantum_value", "noise_threshold"]
    human = [f"{'d':>4}  {'local_bound':>12}  {'quantum_value':>14}  {'noise_threshold':>16}"]
    human += [
        f"{d:>4}  {_fmt(b):>12}  {_fmt(q):>14}  {_fmt(t):>16}" for d, b, q, t in rows
    ]
    csv_rows = [header] + [[d, b, q, t] for d, b, q, t in rows]
    return Report(payload, human, csv_rows), EXIT_OK


def cmd_optimize(args: argparse.Namespace) -> tuple[Report, int]:
    d = _parse_dimension(args.dimension)
    if args.budget < 1:
        raise UsageError(f"--budget must be >= 1, got {args.budget}")
    if args.restarts < 1:
        raise UsageError(f"--restarts must be >= 1, got {args.restarts}")
    problem = OptimizationProblem(
        dimension=d,
        family=args.family,
        budget=args.budget,
        restarts=args.restarts,
        seed=args.seed,
    )
    result = maximize(problem)
    reference, _, _ = _family_quantum_profile(args.family, d)
    excess = result.best_value - reference
    trace_path = Path(args.trace_out) if args.trace_out else (
        _output_dir() / f"optimize_trace_{args.family}_d{d}.csv"
    )
    trace_path.parent.mkdir(parents=True, exist_ok=True)
    write_trace_csv(result, trace_path)
    payload = _base_payload(
        "optimize",
        family=args.family,
        dimension=d,
        seed=args.seed,
        budget=args.budget,
        restarts=args.restarts,
        best_value=result.best_value,
        reference_value=reference,
        excess_over_reference=excess,
        exceeds_reference=bool(excess > 1e-6),
        improved=result.improved,
        trace_path=str(trace_path),
        best_alice_phases=[result.best_phases.alice_phase(s).tolist() for s in (0, 1)],
        best_bob_phases=[result.best_phases.bob_phase(s).tolist() for s in (0, 1)],
        best_state_weights=[abs(w) for w in result.best_state_weights.tolist()],
    )
    human = [
        f"family {args.family}, d = {d}, seed = {args.seed}, "
        f"budget = {args.budget}, restarts = {args.restarts}",
        f"best value found = {_fmt(result.best_value)}",
        f"reference-setup value = {_fmt(reference)} (difference {_fmt(excess)})",
        f"improved over first sample: {result.improved}",
        f"trace written to {trace_path}",
    ]
    if excess > 1e-6:
        human.insert(
            1,
            f"WARNING: search exceeded the reference value by {_fmt(excess)}; "
            "inspect the reported phases",
        )
    csv_rows = [
        ["key", "value"],
        ["family", args.family],
        ["dimension", d],
        ["best_value", result.best_value],
        ["reference_value", reference],
        ["excess_over_reference", excess],
        ["improved", result.improved],
        ["trace_path", str(trace_path)],
    ]
    return Report(payload, human, csv_rows), EXIT_OK


def _reproduction_rows() -> list[tuple[str, float, float]]:
    return [
        ("I3_quantum_value", 2.87293, quantum_value(3)),
        ("I4_quantum_value", 2.89624, quantum_value(4)),
        ("noise_threshold_d3", 0.69615, noise_threshold(3)),
        ("noise_threshold_d4", 0.69055, noise_threshold(4)),
        ("Id_quantum_value_limit", 2.96981, asymptotic_value()),
        ("noise_threshold_limit", 0.67344, 2.0 / asymptotic_value()),
    ]


def cmd_reproduce(args: argparse.Namespace) -> tuple[Report, int]:
    rows = []
    all_pass = True
    for name, reference, computed in _reproduction_rows():
        relative = abs(computed - reference) / abs(reference)
        ok = relative <= REPRODUCTION_RTOL
        all_pass = all_pass and ok
        rows.append((name, reference, computed, relative, ok))
    payload = _base_payload(
        "reproduce",
        tolerance=REPRODUCTION_RTOL,
        all_pass=all_pass,
        rows=[
            {
                "name": name,
                "reference": reference,
                "computed": computed,
                "relative_error": relative,
                "status": "PASS" if ok else "FAIL",
            }
            for name, reference, computed, relative, ok in rows
        ],
    )
    width = max(len(name) for name, *_ in rows)
    human = [
        f"{name:<{width}}  reference {reference:<8.6g} computed {computed:<8.6g} "
        f"rel err {relative:.2e}  {'PASS' if ok else 'FAIL'}"
        for name, reference, computed, relative, ok in rows
    ]
    human.append("all rows PASS" if all_pass else "some rows FAILED")
    csv_rows = [["name", "reference", "computed", "relative_error", "status"]] + [
        [name, reference, computed, relative, "PASS" if ok else "FAIL"]
        for name, reference, computed, relative, ok in rows
    ]
    return Report(payload, human, csv_rows), EXIT_OK if all_pass else EXIT_CROSS_CHECK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qudit-bell",
        description="Bell expressions for two-party, two-setting, d-outcome scenarios",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add_common(sub: argparse.ArgumentParser, *, family: bool = True) -> None:
        if family:
            sub.add_argument("--family", choices=FAMILIES, default="Id")
        sub.add_argument("--format", choices=("table", "json", "csv"), default="table")
        sub.add_argument("--output", default=None, help="write the report to this path")

    bound = subparsers.add_parser("bound", help="local bound by enumeration and case analysis")
    bound.add_argument("--dimension", "-d", required=True)
    bound.add_argument("--cap", type=int, default=ENUMERATION_CAP,
                       help="strategy cap for the brute-force route")
    add_common(bound)
    bound.set_defaults(handler=cmd_bound)

    quantum = subparsers.add_parser("quantum", help="reference-setup values and correlators")
    quantum.add_argument("--dimension", "-d", required=True)
    add_common(quantum, family=False)
    quantum.set_defaults(handler=cmd_quantum)

    threshold = subparsers.add_parser("threshold", help="noise robustness of the violation")
    threshold.add_argument("--dimension", "-d", required=True)
    threshold.add_argument("--noise-p", type=float, default=None,
                           help="entangled weight p to evaluate and judge")
    add_common(threshold)
    threshold.set_defaults(handler=cmd_threshold)

    sweep = subparsers.add_parser("sweep", help="per-dimension table over a range")
    sweep.add_argument("--dimension", "-d", default="2..16",
                       help="single value or inclusive range like 2..16")
    add_common(sweep)
    sweep.set_defaults(handler=cmd_sweep)

    optimize = subparsers.add_parser("optimize", help="random-restart phase search")
    optimize.add_argument("--dimension", "-d", required=True)
    optimize.add_argument("--seed", type=int, default=0)
    optimize.add_argument("--budget", type=int, default=50_000)
    optimize.add_argument("--restarts", type=int, default=20)
    optimize.add_argument("--trace-out", default=None,
                          help="trace CSV path (default: under the output dir)")
    add_common(optimize)
    optimize.set_defaults(handler=cmd_optimize)

    reproduce = subparsers.add_parser("reproduce", help="recompute the reference constants")
    add_common(reproduce, family=False)
    reproduce.set_defaults(handler=cmd_reproduce)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        report, status = args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CrossCheckError as exc:
        print(f"cross-check failure: {exc}", file=sys.stderr)
        return EXIT_CROSS_CHECK
    _emit(args, report)
    return status
