"""Command line front end.

Subcommands: ``check`` (structure and axiom sweeps on a file), ``twist``
(build the twisted complex), ``decalage`` (section/naturality/unit-form
sweeps), ``delta`` (finite shift-category demonstration), ``fixture``
(write a stock structure), ``sum`` (enumerate a globular product).

Exit codes: 0 clean, 1 mathematical violation, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import decalage, fixtures, omega, report, twist
from .errors import DimOutOfRange, KernelError
from .globular import globular_product, parse_table

EXIT_CLEAN = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2


@dataclass
class RunConfig:
    axioms: omega.AxiomFlags = omega.FULL_FLAGS
    fmt: str = "text"
    cap: int = 100
    max_width: int = 3
    max_dim: int = 3
    max_n: int = 4
    threads: int = 1
    output: str | None = None

    def __post_init__(self):
        if self.cap < 1 or self.max_width < 1 or self.max_n < 1:
            raise KernelError("bounds must be >= 1")
        if self.threads < 1:
            raise KernelError("GLOB_KERNEL_THREADS must be >= 1")


def _env_threads() -> int:
    raw = os.environ.get("GLOB_KERNEL_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _load_structure(path: str) -> omega.OmegaStructure:
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    return omega.omega_from_json(data)


def _emit(results: list[report.CheckResult], fmt: str, out=None) -> None:
    out = out if out is not None else sys.stdout
    if fmt == "json":
        json.dump(report.to_json(results), out, indent=2)
        out.write("\n")
    else:
        for r in results:
            out.write(report.format_line(r) + "\n")


def _violations_to_results(kind: str, violations) -> list[report.CheckResult]:
    if not violations:
        return [report.passed(kind, "all")]
    return [report.failed(kind, "all", [str(v) for v in violations])]


def cmd_check(args) -> int:
    cfg = RunConfig(
        axioms=omega.AxiomFlags.parse(args.axioms),
        fmt=args.format,
        cap=args.cap,
        threads=_env_threads(),
    )
    x = _load_structure(args.file)
    results = []
    structure = omega.check_structure(x, cap=cfg.cap)
    results.extend(_violations_to_results("structure", structure.violations))
    by_axiom = omega.check_all(x, cfg.axioms, cap=cfg.cap, workers=cfg.threads)
    for name, violations in by_axiom.items():
        results.extend(_violations_to_results(f"axiom:{name}", violations))
    _emit(results, cfg.fmt)
    return EXIT_CLEAN if report.all_pass(results) else EXIT_VIOLATION


def cmd_twist(args) -> int:
    x = _load_structure(args.file)
    twisted = twist.build_twisted(x)
    data = omega.omega_to_json(twisted)
    with open(args.output, "w", encoding="utf-8") as handle:
        json.dump(data, handle, indent=2)
        handle.write("\n")
    print(f"wrote twisted structure (truncation {twisted.truncation}) to {args.output}")
    return EXIT_CLEAN


def cmd_decalage(args) -> int:
    cfg = RunConfig(
        fmt=args.format,
        cap=args.cap,
        max_width=args.max_width,
        max_dim=args.max_dim,
        threads=_env_threads(),
    )
    x = _load_structure(args.file)
    if not x.has_inverses:
        print("input error: decalage sweeps need a structure with inverses", file=sys.stderr)
        return EXIT_INPUT
    structure = omega.check_structure(x, cap=cfg.cap)
    axioms = omega.check_all(x, omega.FULL_FLAGS, cap=cfg.cap, workers=cfg.threads)
    if structure.violations or not omega.all_clean(axioms):
        print("input error: structure fails its own axiom suite; fix it first", file=sys.stderr)
        return EXIT_INPUT

    # text reports stream line by line so long sweeps show progress
    results: list[report.CheckResult] = []

    def emit(batch) -> None:
        for r in batch:
            results.append(r)
            if cfg.fmt == "text":
                print(report.format_line(r), flush=True)

    emit(decalage.check_sections(x, cfg.max_width, cfg.max_dim))
    emit(decalage.check_apex_naturality(x))
    emit(decalage.check_endpoint_naturality(x))
    emit(decalage.check_unit_closed_forms(x))
    emit([decalage.check_lift_non_naturality(x)])
    if cfg.fmt == "json":
        _emit(results, cfg.fmt)
    return EXIT_CLEAN if report.all_pass(results) else EXIT_VIOLATION


def cmd_delta(args) -> int:
    cfg = RunConfig(fmt=args.format, max_n=args.max_n)
    gens = decalage.standard_generators()
    for name in ("comp", "unit", "inv"):
        plain = gens[name]
        shifted = gens[f"{name}_shift"]
        print(f"{name}: {plain}   shift: {shifted}")
    results = decalage.check_shift_decalage(cfg.max_n)

    shift_matches = [
        report.passed("shift-generators", name)
        if decalage.shift_map(gens[name]) == gens[f"{name}_shift"]
        else report.failed("shift-generators", name, ["table mismatch"])
        for name in ("comp", "unit", "inv")
    ]
    results = shift_matches + results
    _emit(results, cfg.fmt)
    return EXIT_CLEAN if report.all_pass(results) else EXIT_VIOLATION


def cmd_fixture(args) -> int:
    trunc = args.trunc
    if args.kind == "discrete":
        x = fixtures.discrete(tuple(args.names.split(",")), trunc)
    elif args.kind == "delooping":
        x = fixtures.delooping(fixtures.NAMED_GROUPS[args.group](), trunc)
    elif args.kind == "suspension":
        x = fixtures.suspension(fixtures.NAMED_GROUPS[args.group](), args.dim, trunc)
    elif args.kind == "product":
        if len(args.files) != 2:
            print("input error: product needs exactly two files", file=sys.stderr)
            return EXIT_INPUT
        x = fixtures.product(_load_structure(args.files[0]), _load_structure(args.files[1]))
    else:
        print(f"input error: unknown fixture kind {args.kind!r}", file=sys.stderr)
        return EXIT_INPUT
    with open(args.output, "w", encoding="utf-8") as handle:
        json.dump(omega.omega_to_json(x), handle, indent=2)
        handle.write("\n")
    print(f"wrote {args.kind} fixture (truncation {x.truncation}) to {args.output}")
    return EXIT_CLEAN


def cmd_sum(args) -> int:
    table = parse_table(args.table)
    x = _load_structure(args.file)
    tuples = globular_product(x.base, table)
    print(f"table {table}: {len(tuples)} tuples")
    for gtuple in tuples:
        print("  (" + ", ".join(gtuple.entries) + ")")
    return EXIT_CLEAN


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="globkernel",
        description="checkers for finite strict omega-groupoid tables, "
        "their twisted complexes, and decalage splittings",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="validate a structure file and sweep axioms")
    p_check.add_argument("file")
    p_check.add_argument("--axioms", default="l,r,f,li,ri")
    p_check.add_argument("--cap", type=int, default=100)
    p_check.add_argument("--format", choices=("text", "json"), default="text")
    p_check.set_defaults(func=cmd_check)

    p_twist = sub.add_parser("twist", help="build the twisted complex of a structure file")
    p_twist.add_argument("file")
    p_twist.add_argument("-o", "--output", required=True)
    p_twist.set_defaults(func=cmd_twist)

    p_dec = sub.add_parser("decalage", help="section, naturality and unit-form sweeps")
    p_dec.add_argument("file")
    p_dec.add_argument("--max-width", type=int, default=3)
    p_dec.add_argument("--max-dim", type=int, default=3)
    p_dec.add_argument("--cap", type=int, default=100)
    p_dec.add_argument("--format", choices=("text", "json"), default="text")
    p_dec.set_defaults(func=cmd_decalage)

    p_delta = sub.add_parser("delta", help="finite shift-category demonstration")
    p_delta.add_argument("--max-n", type=int, default=4)
    p_delta.add_argument("--format", choices=("text", "json"), default="text")
    p_delta.set_defaults(func=cmd_delta)

    p_fix = sub.add_parser("fixture", help="write a stock structure file")
    p_fix.add_argument("kind", choices=("discrete", "delooping", "suspension", "product"))
    p_fix.add_argument("--group", choices=sorted(fixtures.NAMED_GROUPS), default="z2")
    p_fix.add_argument("--names", default="a,b")
    p_fix.add_argument("--dim", type=int, default=1)
    p_fix.add_argument("--trunc", type=int, default=3)
    p_fix.add_argument("--files", nargs="*", default=[])
    p_fix.add_argument("-o", "--output", required=True)
    p_fix.set_defaults(func=cmd_fixture)

    p_sum = sub.add_parser("sum", help="enumerate a globular product of a structure file")
    p_sum.add_argument("table")
    p_sum.add_argument("file")
    p_sum.set_defaults(func=cmd_sum)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except json.JSONDecodeError as exc:
        print(f"input error: invalid JSON: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DimOutOfRange as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except KernelError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
