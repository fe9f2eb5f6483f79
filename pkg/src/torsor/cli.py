"""Command line entry point: ``torsor run | validate | selftest | batch``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .complexes import ComplexError, loads_complex, validate_complex
from .io import InputError, loads_local_system
from .localsys import LocalSystemError
from .workbench import (
    EXIT_FAILED,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_VALIDATION,
    REPRESENTATIONS,
    JobError,
    JobSpec,
    exit_code,
    run,
    run_batch,
    selftest,
)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="torsor", description="Exact twisted Reidemeister torsion of link exteriors.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="evaluate one torsion")
    r.add_argument("--complex", default="figure-eight", help="complex file, or 'figure-eight' for the shipped one")
    r.add_argument("--local-system", default="iota_geom",
                   help="local system file, or one of geom, iota_geom, p_exotic")
    r.add_argument("--rep", default="adjoint-pgsp4", help=REPRESENTATIONS)
    r.add_argument("--loop", default=None, help="peripheral loop id (default: first loop per component)")
    r.add_argument("--orientation", default=None, help="homology orientation file (default: greedy cycles)")
    r.add_argument("--emit", choices=("exact", "embed", "report", "json"), default="exact")
    r.add_argument("--timing", action="store_true", help="add wall time to report and json output")

    v = sub.add_parser("validate", help="validate a complex or local system file")
    v.add_argument("file")

    s = sub.add_parser("selftest", help="run the built-in check matrix")
    s.add_argument("--full", action="store_true", help="also run the slower invariance checks")

    b = sub.add_parser("batch", help="run a JSON list of jobs")
    b.add_argument("file", help="JSON list of {complex, local_system, rep, loop, orientation}")
    b.add_argument("--workers", type=int, default=1)
    return p


def _cmd_run(args) -> int:
    job = JobSpec(args.complex, args.local_system, args.rep, args.loop, args.orientation)
    report = run(job)
    if args.emit == "exact":
        print(report.exact)
    elif args.emit == "embed":
        print("\n".join(report.embedding_strings()))
    elif args.emit == "report":
        print(report.text())
        if args.timing:
            print(f"seconds          {report.seconds:.3f}")
    else:
        print(json.dumps(report.as_dict(args.timing), indent=1))
    return exit_code(report)


def _cmd_validate(path: str) -> int:
    try:
        text = Path(path).read_text()
        doc = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if isinstance(doc, dict) and "monodromy" in doc:
        try:
            ls = loads_local_system(text)
        except InputError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_PARSE
        except LocalSystemError as exc:
            print(f"invalid: {exc}")
            return EXIT_VALIDATION
        print(f"ok: {ls.group_tag} local system of rank {ls.rank} on {len(ls.monodromy)} 1-cells")
        return EXIT_OK
    try:
        c = loads_complex(text)
    except ComplexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    report = validate_complex(c)
    if not report.ok:
        for e in report.errors:
            print(f"invalid: {e}")
        return EXIT_VALIDATION
    print(f"ok: complex with cell counts {tuple(c.counts())}")
    return EXIT_OK


def _cmd_selftest(full: bool) -> int:
    checks = selftest(full)
    width = max(len(c.name) for c in checks)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name.ljust(width)}  {c.detail}")
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} passed")
    return EXIT_OK if not failed else EXIT_FAILED


def _cmd_batch(path: str, workers: int) -> int:
    try:
        docs = json.loads(Path(path).read_text())
        if not isinstance(docs, list):
            raise ValueError("batch file must hold a JSON list")
        jobs = [JobSpec.from_dict(d) for d in docs]
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    results = run_batch(jobs, workers)
    print(json.dumps(results, indent=1))
    return max((r["status"] for r in results), default=EXIT_OK)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "validate":
            return _cmd_validate(args.file)
        if args.command == "selftest":
            return _cmd_selftest(args.full)
        return _cmd_batch(args.file, args.workers)
    except JobError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
