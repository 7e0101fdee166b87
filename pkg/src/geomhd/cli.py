"""Command-line front end.

    geomhd verify   --config cfg.json [--deterministic]
    geomhd sample   --config cfg.json --output table.csv
    geomhd families

Exit codes: 0 verification passed, 1 residual failure, 2 config/parse error,
3 domain/constraint error, 4 unwritable output.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone

from .config import FAMILY_CATALOG, BuiltInstance, build_instance
from .errors import (
    AccuracyError,
    ConfigError,
    ConstraintError,
    DomainError,
    ParameterError,
    ParseError,
    UsageError,
)
from .fields import ResidualReport, ScalarField, residual_geo, residual_mhd1, residual_mhd2, verify_on_grid

EXIT_PASS = 0
EXIT_RESIDUAL = 1
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_OUTPUT = 4

_CONFIG_ERRORS = (ConfigError, ParseError, UsageError)
_DOMAIN_ERRORS = (ConstraintError, ParameterError, DomainError, AccuracyError)


def _load(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as err:
        raise ConfigError(f"cannot read config {path!r}: {err}") from None
    except json.JSONDecodeError as err:
        raise ConfigError(f"config {path!r} is not valid JSON: {err}") from None


def _fmt(v: float) -> str:
    return format(v, ".17g")


def _report_text(inst: BuiltInstance, report: ResidualReport, deterministic: bool) -> str:
    lines = []
    lines.append(f"instance: {inst.label}")
    lines.append(f"family: {inst.family}    equation: {inst.equation}")
    if not deterministic:
        lines.append(f"generated: {datetime.now(timezone.utc).isoformat()}")
    axes = " ".join(f"{v}:[{lo:g},{hi:g}]x{n}" for v, lo, hi, n in inst.grid.axes)
    lines.append(f"grid: {axes}")
    lines.append(
        f"points: {report.evaluated} evaluated, {report.skipped} skipped, "
        f"{report.excluded} excluded"
    )
    lines.append(f"tolerance: {report.tolerance:g} (relative max)")
    for s in report.stats:
        verdict = "pass" if s.passed else "FAIL"
        lines.append(
            f"  {s.equation:<5} max_abs={s.max_abs:.6e}  rms={s.rms:.6e}  "
            f"rel_max={s.rel_max:.6e}  -> {verdict}"
        )
    for reason in report.skipped_examples:
        lines.append(f"  skipped {reason}")
    if report.vacuous:
        lines.append("verdict: VACUOUS (no admissible points)")
    else:
        lines.append(f"verdict: {'PASS' if report.passed else 'FAIL'}")
    machine = {
        "family": inst.family,
        "equation": inst.equation,
        "tolerance": report.tolerance,
        "evaluated": report.evaluated,
        "skipped": report.skipped,
        "excluded": report.excluded,
        "vacuous": report.vacuous,
        "passed": report.passed,
        "stats": [
            {
                "equation": s.equation,
                "max_abs": s.max_abs,
                "rms": s.rms,
                "rel_max": s.rel_max,
                "passed": s.passed,
            }
            for s in report.stats
        ],
    }
    lines.append("machine: " + json.dumps(machine, sort_keys=True))
    return "\n".join(lines) + "\n"


def cmd_verify(config_path: str, deterministic: bool) -> int:
    inst = build_instance(_load(config_path))
    report = verify_on_grid(inst.fields, inst.grid, inst.tolerance, k=inst.k)
    sys.stdout.write(_report_text(inst, report, deterministic))
    return EXIT_PASS if report.passed else EXIT_RESIDUAL


def _sample_rows(inst: BuiltInstance):
    if inst.equation == "geo":
        header = ["t", "x", "y", "H", "res_geo"]
    else:
        header = ["t", "x", "y", "z", "phi", "psi", "res_mhd1", "res_mhd2"]
    yield header
    grid = inst.grid
    skipped = 0
    for point in grid.points():
        if grid.exclude is not None and grid.exclude(point):
            skipped += 1
            continue
        try:
            if inst.equation == "geo":
                H = inst.fields
                row = [
                    point["t"],
                    point["x"],
                    point["y"],
                    H.value(point),
                    residual_geo(H, inst.k, point),
                ]
            else:
                phi, psi = inst.fields
                row = [
                    point["t"],
                    point["x"],
                    point["y"],
                    point["z"],
                    phi.value(point),
                    psi.value(point),
                    residual_mhd1(phi, psi, point),
                    residual_mhd2(phi, psi, point),
                ]
        except DomainError:
            skipped += 1
            continue
        yield [_fmt(v) for v in row]
    if skipped:
        print(f"sample: {skipped} point(s) omitted (domain)", file=sys.stderr)


def cmd_sample(config_path: str, output_path: str) -> int:
    inst = build_instance(_load(config_path))
    rows = _sample_rows(inst)
    try:
        with open(output_path, "w", encoding="utf-8", newline="") as fh:
            for row in rows:
                fh.write(",".join(str(c) for c in row) + "\n")
    except OSError as err:
        print(f"error: cannot write {output_path!r}: {err}", file=sys.stderr)
        return EXIT_OUTPUT
    return EXIT_PASS


def cmd_families() -> int:
    lines = ["family catalog:"]
    for name, equation, source, slots, constraints in FAMILY_CATALOG:
        lines.append(f"{name:<6} {source}")
        lines.append(f"       equation: {equation}")
        lines.append(f"       parameters: {slots}")
        lines.append(f"       constraints: {constraints}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_PASS


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="geomhd",
        description="Build, verify, and sample exact solution instances.",
    )
    parser.add_argument(
        "--deterministic",
        action="store_true",
        help="suppress the timestamp line so output is byte-reproducible",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_verify = sub.add_parser("verify", help="verify an instance on its grid")
    p_verify.add_argument("--config", required=True)
    p_sample = sub.add_parser("sample", help="sample an instance to CSV")
    p_sample.add_argument("--config", required=True)
    p_sample.add_argument("--output", required=True)
    sub.add_parser("families", help="list the solution-family catalog")

    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args.config, args.deterministic)
        if args.command == "sample":
            return cmd_sample(args.config, args.output)
        return cmd_families()
    except _DOMAIN_ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except _CONFIG_ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
