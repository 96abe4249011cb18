"""Golden CLI cases: argv lists run against bundled files, stored as exact bytes."""

from __future__ import annotations

import hashlib
from pathlib import Path
from typing import List, Tuple

from tandisp.cli import render, run
from tandisp.data import bundled_files, data_path

GOLDEN = Path(__file__).parent / "golden"

STRUCTURAL = ["validate", "tangent-check", "classify", "maximal-system", "split", "open"]
EXTRA = [
    ["classify", "vposet", "--mor", "a_c"],
    ["classify", "diamond", "--mor", "nope"],
    ["maximal-system", "finset2", "--budget", "3"],
    ["slice", "diamond", "--base", "top"],
    ["slice", "finset2", "--base", "2"],
    ["slice", "diamond", "--base", "nowhere"],
    ["par", "diamond", "--system", "opens"],
    ["par", "finset2", "--system", "collapse"],
    ["par", "finset2", "--system", "absent"],
    ["ring-demo", None, "--depth", "1"],
    ["classify", "t_collapse"],
]


def cases() -> List[Tuple[str, List[str]]]:
    out = []
    for path in bundled_files():
        for cmd in STRUCTURAL:
            out.append((f"{cmd}.{path.stem}", [cmd, path.stem]))
    for path in bundled_files(malformed=True):
        out.append((f"validate.{path.stem}", ["validate", path.stem]))
    for argv in EXTRA:
        tag = hashlib.sha1(" ".join(a for a in argv if a).encode()).hexdigest()[:8]
        out.append((f"{argv[0]}.{argv[1] or 'none'}.{tag}", argv))
    return out


def produce(argv: List[str]) -> Tuple[str, str, int]:
    """Run one case; return stdout bytes, stderr bytes and status.  Paths are shown by basename."""
    cmd, stem, *flags = argv
    real = [cmd] + ([str(data_path(stem))] if stem else []) + flags
    report, status, errors = run(real)
    stderr = "".join(line + "\n" for line in errors)
    if stem:
        stderr = stderr.replace(str(data_path(stem)), data_path(stem).name)
    return render(report), stderr, status


def expected(name: str) -> Tuple[str, str, int]:
    base = GOLDEN / name
    status = int((base.with_suffix(base.suffix + ".status")).read_text())
    return (base.with_suffix(base.suffix + ".json").read_text(encoding="utf-8"),
            base.with_suffix(base.suffix + ".stderr").read_text(encoding="utf-8"), status)
