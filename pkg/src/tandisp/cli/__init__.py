"""Command-line front end: ``tandisp COMMAND FILE [flags]``.

Every run prints one JSON report (``format: 1``, keys sorted) on stdout.
Exit status: 0 when all checks pass, 1 when a check fails or a bounded
search is inconclusive, 2 for input errors (diagnostics also go to stderr).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import List, Optional

import numpy as np

from .commands import COMMANDS, InputProblem
from .presentation import Diagnostic, Presentation, PresentationError, parse, parse_text
from .serialize import presentation_of, serialize

__all__ = ["main", "parse", "parse_text", "serialize", "presentation_of", "Presentation",
           "PresentationError", "Diagnostic", "run", "render"]

FORMAT = 1


def _jsonable(x):
    if isinstance(x, dict):
        return {(k if isinstance(k, str) else ",".join(map(str, k)) if isinstance(k, tuple) else str(k)):
                _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if hasattr(x, "as_dict"):
        return _jsonable(x.as_dict())
    return x


def render(report: dict) -> str:
    return json.dumps(_jsonable(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tandisp", description="Decide display-map classifications "
                                 "and build derived tangent categories from presentation files.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_, file_optional=False):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file", nargs="?" if file_optional else None, help="presentation file")
        sp.add_argument("--timing", action="store_true", help="add wall-clock timing to the report")
        return sp

    add("validate", "parse and validate a presentation")
    add("tangent-check", "check the tangent axioms, negatives and tangent bundles")
    add("classify", "classify morphisms").add_argument("--mor", help="classify only this morphism")
    add("maximal-system", "maximal tangent display system and system-level properties").add_argument(
        "--budget", type=int, default=100000, help="cap on differential-bundle candidates")
    add("split", "idempotent splitting with lifted tangent structure")
    add("slice", "display slice tangent category").add_argument("--base", required=True)
    add("par", "partial-map restriction category").add_argument("--system", required=True)
    add("open", "open subobjects and their restriction category")
    add("ring-demo", "pushouts of finite algebras and their tangent images", file_optional=True
        ).add_argument("--depth", type=int, default=2)
    return ap


def _flags(args) -> dict:
    skip = {"command", "file", "timing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def run(argv: List[str]):
    """Run one command; return ``(report, exit_status, stderr_lines)``."""
    args = _parser().parse_args(argv)
    report = {"format": FORMAT, "command": args.command,
              "file": os.path.basename(args.file) if args.file else None, "flags": _flags(args)}
    errors: List[str] = []
    start = time.perf_counter()
    pres: Optional[Presentation] = None
    try:
        if args.file is not None:
            pres = parse(args.file)
        elif args.command != "ring-demo":
            raise InputProblem("a presentation file is required")
        result, checks = COMMANDS[args.command](pres, args)
    except PresentationError as exc:
        report.update(status="input-error", diagnostics=[d.as_dict() for d in exc.diagnostics])
        errors = [d.format(args.file) for d in exc.diagnostics]
        return report, 2, errors
    except (InputProblem, OSError) as exc:
        msg = str(exc) if isinstance(exc, InputProblem) else f"cannot read {args.file}: {exc.strerror}"
        report.update(status="input-error", error=msg)
        return report, 2, [f"{args.file or args.command}: error: {msg}"]
    verdicts = {k: v.as_dict() for k, v in sorted(checks.items())}
    failed = sorted(k for k, v in checks.items() if not v.holds or v.inconclusive)
    report.update(result=result, checks=verdicts, failed=failed,
                  status="fail" if failed else "pass")
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 4)
    return report, (1 if failed else 0), errors


def main(argv: Optional[List[str]] = None) -> int:
    report, status, errors = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(render(report))
    for line in errors:
        print(line, file=sys.stderr)
    return status
