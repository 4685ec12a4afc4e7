"""Command-line front end.

Exit codes: 0 verified (or conditions hold with --conditions-only),
1 verification failed, 2 conditions failed, 3 usage or size errors.
"""

import argparse
import dataclasses
import logging
import sys
from pathlib import Path
from typing import List, Optional

from cyclotome.config import Settings
from cyclotome.constructions import ConstructionKind
from cyclotome.errors import CyclotomeError
from cyclotome.graphio import GraphFormat
from cyclotome.pipeline import CyclotomeRun, RunReport
from cyclotome.utils import dump_json, format_table

logger = logging.getLogger(__name__)

EXIT_USAGE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", type=Path, help="write output here instead of stdout")
    parser.add_argument("--threads", type=int, help="workers for the period-table sweep")
    parser.add_argument("--cache-dir", type=Path, help="binary field-table cache directory")
    parser.add_argument("--no-timings", action="store_true", help="omit timings from reports")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")


def _add_two_primes(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-p", type=int, required=True, help="characteristic")
    parser.add_argument("--p1", type=int, required=True, help="prime, 1 mod 4")
    parser.add_argument("--p2", type=int, required=True, help="prime, 3 mod 4")
    parser.add_argument("-m", type=int, default=1, help="exponent of p1")
    parser.add_argument("-n", type=int, default=1, help="exponent of p2")


def _add_one_prime(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-p", type=int, required=True, help="odd characteristic")
    parser.add_argument("--p1", type=int, required=True, help="prime, 3 mod 8")
    parser.add_argument("-m", type=int, default=1, help="exponent of p1")


def _add_classes(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-p", type=int, required=True, help="characteristic")
    parser.add_argument("-f", type=int, required=True, help="extension degree")
    parser.add_argument("-N", type=int, required=True, help="class order, divides p^f - 1")
    parser.add_argument("--indices", type=int, nargs="+", required=True, help="class indices")
    parser.add_argument(
        "--check", choices=["srg", "skew_hds", "paley_pds"], default="srg", help="verifier"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cyclotome", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True)

    verify_a = commands.add_parser("verify-a", help="two-prime strongly regular graph")
    _add_two_primes(verify_a)
    verify_a.add_argument("--conditions-only", action="store_true")
    verify_a.add_argument("--force", action="store_true", help="materialize if conditions fail")
    _add_common(verify_a)

    verify_b = commands.add_parser("verify-b", help="one-prime skew or Paley type set")
    _add_one_prime(verify_b)
    verify_b.add_argument("--conditions-only", action="store_true")
    verify_b.add_argument("--force", action="store_true", help="materialize if conditions fail")
    _add_common(verify_b)

    classes = commands.add_parser("verify-classes", help="any union of cyclotomic classes")
    _add_classes(classes)
    _add_common(classes)

    scan = commands.add_parser("scan", help="enumerate admissible parameters")
    scan.add_argument("kind", choices=["A", "B"])
    scan.add_argument("--bound", type=int, default=10**6, help="largest p1")
    scan.add_argument("-m", type=int, default=1)
    scan.add_argument("-n", type=int, default=1)
    scan.add_argument("--json", action="store_true")
    _add_common(scan)

    gauss = commands.add_parser("gauss", help="compare Gauss sums with the closed forms")
    gauss.add_argument("-p", type=int, required=True)
    gauss.add_argument("--p1", type=int, required=True)
    gauss.add_argument("--p2", type=int, help="omit for the one-prime family")
    gauss.add_argument("-m", type=int, default=1)
    gauss.add_argument("-n", type=int, default=1)
    gauss.add_argument("--force", action="store_true")
    gauss.add_argument("--json", action="store_true")
    _add_common(gauss)

    export = commands.add_parser("export", help="write a Cayley graph or period table")
    kinds = export.add_subparsers(dest="construction", required=True)
    for name, adder in (("a", _add_two_primes), ("b", _add_one_prime), ("classes", _add_classes)):
        sub = kinds.add_parser(name)
        adder(sub)
        sub.add_argument(
            "--format", choices=[f.value for f in GraphFormat], default=GraphFormat.GRAPH6.value
        )
        sub.add_argument("--header", action="store_true", help="prefix graph6 with >>graph6<<")
        sub.add_argument("--force", action="store_true")
        _add_common(sub)

    scheme = commands.add_parser("scheme", help="association scheme of the shifted sets")
    _add_two_primes(scheme)
    scheme.add_argument("--force", action="store_true")
    _add_common(scheme)

    tables = commands.add_parser("tables", help="condition-level rows of the known series")
    tables.add_argument("--json", action="store_true")
    _add_common(tables)
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )


def _settings(args: argparse.Namespace) -> Settings:
    settings = Settings.from_env()
    changes = {}
    if args.threads:
        changes["threads"] = args.threads
    if args.cache_dir:
        changes["cache_dir"] = args.cache_dir
    return dataclasses.replace(settings, **changes)


def _emit(args: argparse.Namespace, payload) -> None:
    data = payload.encode() if isinstance(payload, str) else payload
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_bytes(data)
        logger.info("wrote %d bytes to %s", len(data), args.out)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _run_instance(runner: CyclotomeRun, args: argparse.Namespace, kind: str) -> RunReport:
    if kind == "a":
        return runner.run_a(
            args.p,
            args.p1,
            args.p2,
            args.m,
            args.n,
            conditions_only=getattr(args, "conditions_only", False),
            force=args.force,
        )
    if kind == "b":
        return runner.run_b(
            args.p,
            args.p1,
            args.m,
            conditions_only=getattr(args, "conditions_only", False),
            force=args.force,
        )
    return runner.run_classes(args.p, args.f, args.N, args.indices, check=args.check)


def _gauss_text(report: RunReport) -> str:
    certificate = report.certificate or {}
    rows = certificate.get("rows", [])
    text = format_table(rows, ["k", "clause", "numeric", "deviation_plus", "deviation_minus"])
    lines = [
        f"q = {certificate.get('q')}, N = {certificate.get('N')}, "
        f"c sign = {certificate.get('c_sign')}",
        f"status: {report.status.value}" + (f" ({report.error})" if report.error else ""),
    ]
    return text + "\n".join(lines) + "\n"


def run(args: argparse.Namespace) -> int:
    """Dispatch a parsed command line and return the exit code."""
    runner = CyclotomeRun(_settings(args), timings=not args.no_timings)
    command = args.command

    if command == "scan":
        kind = ConstructionKind.TWO_PRIMES if args.kind == "A" else ConstructionKind.TWO_P1M
        rows = runner.scan(kind, args.bound, args.m, args.n)
        if args.json:
            _emit(args, dump_json([row.to_dict() for row in rows]))
        else:
            columns = ["p", "p1", "p2", "h", "b"] if args.kind == "A" else ["p", "p1", "h", "m"]
            _emit(args, format_table([row.to_dict() for row in rows], columns))
        return 0

    if command == "tables":
        rows = runner.tables()
        if args.json:
            _emit(args, dump_json(rows))
        else:
            columns = ["kind", "p", "p1", "p2", "m", "n", "f", "h", "b", "v", "holds"]
            _emit(args, format_table(rows, columns))
        return 0

    if command == "gauss":
        report = runner.run_gauss(
            args.p, args.p1, args.m, p2=args.p2, n=args.n if args.p2 else None, force=args.force
        )
        _emit(args, dump_json(report) if args.json else _gauss_text(report))
        return report.exit_code

    if command == "scheme":
        report = runner.run_scheme(args.p, args.p1, args.p2, args.m, args.n, force=args.force)
        _emit(args, dump_json(report))
        return report.exit_code

    if command == "export":
        report = _run_instance(runner, args, args.construction)
        try:
            data = runner.export(report, GraphFormat(args.format), header=args.header)
        except CyclotomeError as e:
            logger.error("%s", e)
            return report.exit_code or EXIT_USAGE
        _emit(args, data)
        return report.exit_code

    kind = {"verify-a": "a", "verify-b": "b", "verify-classes": "classes"}[command]
    report = _run_instance(runner, args, kind)
    _emit(args, dump_json(report))
    return report.exit_code


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return run(args)
    except CyclotomeError as e:
        logger.error("%s", e)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
