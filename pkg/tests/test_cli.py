from __future__ import annotations

import json
import shutil

from ellfib.catalog import builtin_dir
from ellfib.cli import main
from ellfib.weier import load_surface


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_catalog_surface(capsys):
    code, out, _ = run(capsys, "classify", "X411")
    assert code == 0
    assert out.splitlines()[0] == "[1,1,4*] e=12 rational"
    assert "I4*" in out


def test_classify_json(capsys):
    code, out, _ = run(capsys, "classify", "X222", "--json")
    data = json.loads(out)
    assert code == 0 and data["configuration"] == "[2,2,2*]" and data["euler"] == 12
    assert sum(c["count"] for c in data["clusters"]) == 3


def test_classify_file_and_minimalizes(tmp_path, capsys):
    path = tmp_path / "s.surf"
    path.write_text("M = 2\nA = -3t^2(s^2-3t^2)(s-t)^4\nB = s t^3(2s^2-9t^2)(s-t)^6\n")
    code, out, _ = run(capsys, "classify", str(path))
    assert code == 0
    assert out.startswith("[1,1,4*] e=12 rational")
    assert "minimalized" in out


def test_pullback_writes_k3(tmp_path, capsys):
    target = tmp_path / "out.surf"
    code, out, _ = run(capsys, "pullback", "X411", "(s^2 : t^2)", "--deflate-all", "-o", str(target))
    assert code == 2  # inline maps are catalog entry syntax, not a CLI argument
    mp = tmp_path / "sq.map"
    mp.write_text("N = s^2\nD = t^2\n")
    code, out, _ = run(capsys, "pullback", "X222", str(mp), "-o", str(target))
    assert code == 0
    assert "e=24 K3" in out
    assert load_surface(target).M == 2


def test_twist_and_transfer(capsys):
    code, out, _ = run(capsys, "twist", "X411", "s^2 - 5t^2")
    assert code == 0 and out.strip() == "[1,1,0*,0*,4*] e=24 K3"
    code, out, _ = run(capsys, "twist", "X411", "s t")
    assert out.strip() == "[1,1,4,0*] e=12 rational"
    code, out, _ = run(capsys, "transfer-star", "X411", "t", "s")
    assert code == 0 and out.startswith("[1,1,4,0*]")
    code, _, err = run(capsys, "transfer-star", "X411", "s", "t")
    assert code == 2 and "non-reduced" in err


def test_hurwitz_verdicts(capsys):
    code, out, _ = run(capsys, "hurwitz", "--degree", "4", "--profile", "4", "--profile", "2,2", "--profile", "2,1,1")
    assert code == 0 and out.strip() == "feasible (6 <= 6)"
    code, out, _ = run(capsys, "hurwitz", "--degree", "8", "--profile", "4,4", "--profile", "4,4",
                       "--profile-preimages", "2")
    assert out.strip() == "infeasible (18 > 14)"


def test_ramify(capsys):
    code, out, _ = run(capsys, "ramify", "triple2", "--at", "inf")
    assert code == 0 and out.strip() == "(3)"
    code, out, _ = run(capsys, "ramify", "triple2", "--at", "1")
    assert out.strip() == "(2,1)"


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.surf"
    bad.write_text("M = 1\nA = s^4 + $\nB = t^6\n")
    code, _, err = run(capsys, "classify", str(bad))
    assert code == 2 and "offending token" in err


def test_unknown_surface(capsys):
    code, _, err = run(capsys, "classify", "no-such-surface")
    assert code == 2 and "no-such-surface" in err


def test_verify_catalog_subset(capsys):
    code, out, _ = run(capsys, "verify-catalog", "--only", "degree4", "--no-timing")
    assert code == 0
    assert out.strip().splitlines()[-1] == "PASS 7, FAIL 0"


def test_verify_catalog_json_is_reproducible(capsys):
    _, one, _ = run(capsys, "verify-catalog", "--only", "rational", "--json", "--no-timing", "--serial")
    _, two, _ = run(capsys, "verify-catalog", "--only", "rational", "--json", "--no-timing")
    assert one == two
    rows = [json.loads(line) for line in one.splitlines()]
    assert rows and all(r["status"] == "PASS" for r in rows)


def test_verify_empty_catalog(tmp_path, capsys):
    code, out, _ = run(capsys, "verify-catalog", "--no-builtin", "--catalog-dir", str(tmp_path), "--json")
    assert code == 0 and out == ""


def test_verify_failure_exit_code(tmp_path, capsys):
    (tmp_path / "entries").mkdir()
    (tmp_path / "entries" / "x.entries").write_text("entry = wrong; base = X411; expect = [1,1,1]\n")
    code, out, _ = run(capsys, "verify-catalog", "--only", "wrong", "--catalog-dir", str(tmp_path))
    assert code == 1 and "CONFIG_MISMATCH" in out


def test_corrupt_catalog_exit_code(tmp_path, capsys):
    shutil.copytree(builtin_dir(), tmp_path / "cat")
    mp = tmp_path / "cat" / "maps" / "triple2.map"
    mp.write_text(mp.read_text().replace("N = ", "N = 2s^3 + ", 1))
    code, _, err = run(capsys, "verify-catalog", "--no-builtin", "--catalog-dir", str(tmp_path / "cat"))
    assert code == 1 and "catalog corrupt" in err


def test_pullback_along_identity_keeps_classification(tmp_path, capsys):
    ident = tmp_path / "id.map"
    ident.write_text("N = s\nD = t\n")
    for name in ("X411", "X141", "X222", "X431", "X321"):
        _, before, _ = run(capsys, "classify", name)
        _, after, _ = run(capsys, "pullback", name, str(ident))
        assert after.strip() == before.splitlines()[0]


def test_hurwitz_preimage_form(capsys):
    code, out, _ = run(capsys, "hurwitz", "--degree", "8", "--profile", "4,4", "--profile-preimages", "6")
    assert code == 0 and out.strip() == "infeasible (16 > 14)"
