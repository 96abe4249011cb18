import json
import subprocess
import sys

import pytest

from tandisp.catalog import EXAMPLES, load_example
from tandisp.cli import PresentationError, main, parse, parse_text, render, run, serialize
from tandisp.data import bundled_files, data_path

from golden_cases import cases, expected, produce

KINDS = {"syntax", "unknown-identifier", "duplicate", "non-composable", "typing", "conflict",
         "missing", "law"}


def _diagnostics(text):
    with pytest.raises(PresentationError) as info:
        parse_text(text)
    return info.value.diagnostics


@pytest.mark.parametrize("path", bundled_files(), ids=lambda p: p.stem)
def test_round_trip(path):
    text = path.read_text(encoding="utf-8")
    pres = parse(path)
    assert serialize(pres) == text
    assert serialize(parse_text(serialize(pres))) == text


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_file_matches_catalog(name):
    cat, ts = load_example(name)
    pres = parse(data_path(name))
    got = pres.category
    assert got.objects == cat.objects and got.morphisms == cat.morphisms
    assert all(got.then(f, g) == cat.then(f, g) for f in cat.morphisms for g in cat.morphisms
               if cat.cod(f) == cat.dom(g))
    assert dict(pres.functor.mor_map) == dict(ts.T.mor_map)


@pytest.mark.parametrize("name,argv", cases(), ids=[n for n, _ in cases()])
def test_golden(name, argv):
    assert produce(argv) == expected(name)


def test_malformed_files_cover_every_class():
    seen = set()
    for path in bundled_files(malformed=True):
        with pytest.raises(PresentationError) as info:
            parse(path)
        seen |= {d.kind for d in info.value.diagnostics}
    assert seen == KINDS


def test_exit_codes():
    assert run(["classify", str(data_path("diamond"))])[1] == 0
    assert run(["maximal-system", str(data_path("finset2")), "--budget", "3"])[1] == 1
    assert run(["validate", str(data_path("bad_syntax"))])[1] == 2
    assert run(["validate", "/nonexistent/file.cat"])[1] == 2


def test_reports_are_byte_stable():
    argv = ["maximal-system", str(data_path("diamond_x_swap"))]
    assert render(run(argv)[0]) == render(run(argv)[0])


def test_report_keys_are_sorted_and_versioned():
    report = json.loads(render(run(["split", str(data_path("monoid_e"))])[0]))
    assert report["format"] == 1 and report["status"] == "pass"
    assert report["result"]["objects"] == ["M[1]", "M[e]"]
    assert report["result"]["checks"]["cauchy_complete"]["holds"]
    assert list(report) == sorted(report)


def test_console_entry_point(capsys):
    status = main(["validate", str(data_path("bad_unknown"))])
    out, err = capsys.readouterr()
    assert status == 2
    assert json.loads(out)["status"] == "input-error"
    assert "unknown-identifier" in err


def test_module_invocation():
    proc = subprocess.run([sys.executable, "-m", "tandisp.cli", "classify", str(data_path("diamond"))],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "classify"


def test_duplicate_names_both_lines():
    (d,) = _diagnostics("category c\nobject a b\nmor f : a -> b\nmor f : b -> a\n")
    assert d.kind == "duplicate" and "line 4" in d.message and "line 3" in d.message


def test_non_composable_then():
    (d,) = _diagnostics("category c\nobject a b\nmor f : a -> b\nthen(f, f) = f\n")
    assert d.kind == "non-composable" and (d.line, d.token) == (4, "then")


def test_star_is_reserved():
    (d,) = _diagnostics("category c\nobject *\n")
    assert d.kind == "syntax" and d.token == "*"


def test_identities_are_implicit():
    pres = parse_text("category c\nobject a\n")
    assert pres.category.morphisms == ("id_a",)


def test_positions_are_one_based():
    (d,) = _diagnostics("category c\nobject a\nmor f a -> a\n")
    assert (d.line, d.col) == (3, 7)
