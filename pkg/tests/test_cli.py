import shutil
import subprocess
import sys

import pytest

from lievar.cli import main
from lievar.degeneration import certificate_dir

from conftest import DATA


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_invariants_g31(capsys):
    code, out, _ = run(capsys, "invariants", "g_31")
    assert code == 0
    assert out.splitlines()[0].startswith("# ref\t")
    assert out.splitlines()[1] == "g_31\t1 8 20 28 28 21 11 3 | 3 5 7 7 5 3 1 | 5 2 35"


def test_invariants_generic_param(capsys):
    code, out, _ = run(capsys, "invariants", "g_I", "--param", "a=1/3")
    assert code == 0
    assert out.splitlines()[1] == "g_I[a=1/3]\t1 4 9 14 15 11 6 2 | 2 3 4 4 3 2 1 | 6 3 39"


def test_invariants_quadratic_param(capsys):
    code, out, _ = run(capsys, "invariants", "g_I", "--param", "a=1-w")
    assert code == 0 and "g_I[a=1-w]" in out


@pytest.mark.parametrize("argv, code", [
    (["invariants", "nosuch"], 2),
    (["invariants", "g_31", "--param", "a=2"], 2),
    (["invariants", "g_I", "--param", "a"], 2),
    (["invariants", "g_I", "--param", "a=(1"], 3),
    (["table", "nosuch"], 2),
    (["table", "dim7-excluded", "--check"], 2),
    (["compare", "g_F", "nosuch"], 2),
    (["compare", "g_F", "g_C", "--param", "b=1"], 2),
    (["verify"], 2),
    (["verify", "/nonexistent.cert"], 2),
    (["frobnicate"], 2),
    (["table", "N4", "--bogus"], 2),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_table_check(capsys):
    code, out, err = run(capsys, "table", "N5", "--check", "--jobs", "1")
    assert code == 0
    assert len([l for l in out.splitlines() if not l.startswith("#")]) == 9
    assert "9/9 rows match" in err


def test_table_l3_rows(capsys):
    code, out, _ = run(capsys, "table", "L3", "--jobs", "1")
    assert code == 0 and len(out.splitlines()) == 9


def test_table_check_mismatch(capsys, tmp_path, monkeypatch):
    import lievar.cli as cli
    src = cli.EXPECTED_DIR / "N4.tsv"
    bad = tmp_path / "N4.tsv"
    bad.write_text(src.read_text().replace("n4\t", "n4\t9 ", 1))
    monkeypatch.setattr(cli, "EXPECTED_DIR", tmp_path)
    code, _, err = run(capsys, "table", "N4", "--check", "--jobs", "1")
    assert code == 1 and "MISMATCH\tn4" in err


def test_verify_one_and_all(capsys):
    code, out, _ = run(capsys, "verify", str(certificate_dir() / "gF_to_gE.cert"))
    assert code == 0 and out.startswith("OK\tgF_to_gE")
    code, out, _ = run(capsys, "verify", "--all", "--jobs", "1")
    assert code == 0 and out.count("OK\t") == len(out.splitlines())


def test_verify_pole(capsys):
    code, out, _ = run(capsys, "verify", str(DATA / "gE_to_g31_printed.cert"))
    assert code == 1
    assert out.startswith("FAIL\tgE_to_g31_printed\tlimit does not exist: c_1,4^5")


def test_verify_parse_error(capsys, tmp_path):
    p = tmp_path / "bad.cert"
    p.write_text("source: n3\ntarget: C3\nmatrix: g\n1 0\n")
    code, _, err = run(capsys, "verify", str(p))
    assert code == 3 and "bad.cert:4" in err


@pytest.mark.parametrize("argv, line", [
    (["g_7", "g_9"], "OBSTRUCTED"),
    (["g_F", "g_C"], "DEGENERATES cert:gF_to_gC"),
    (["g_I", "g_C", "--param", "a=5"], "UNKNOWN"),
])
def test_compare(capsys, argv, line):
    code, out, _ = run(capsys, "compare", *argv)
    assert code == 0 and out.startswith(line)
    if argv[:2] == ["g_7", "g_9"]:
        assert "h5 15>13" in out


def test_hasse(capsys, tmp_path):
    out_dot, out_tsv = tmp_path / "n5.dot", tmp_path / "n5.tsv"
    code, _, _ = run(capsys, "hasse", "N5", "--reduce", "-o", str(out_dot), "--tsv", str(out_tsv))
    assert code == 0
    dot = out_dot.read_text()
    assert dot.count(" -> ") - dot.count("style=invis") == 11
    code, again, _ = run(capsys, "hasse", "N5", "--reduce")
    assert again == dot
    assert "DEGENERATES" in out_tsv.read_text()


def test_hasse_filiform_nodes(capsys):
    code, out, _ = run(capsys, "hasse", "N6-filiform")
    nodes = {l.strip().rstrip(";") for l in out.splitlines() if l.strip().startswith('"g6_')
             and "->" not in l}
    assert code == 0 and len(nodes) == 5


def test_catalog_override(capsys, tmp_path):
    (tmp_path / "h3.lie").write_text("name: h3\ndim: 3\nfield: QQ\nbracket 1 2 = 1 x3\n")
    import os
    old = os.environ.get("LIEVAR_CATALOG")
    try:
        code, out, _ = run(capsys, "--catalog", str(tmp_path), "invariants", "h3")
        assert code == 0 and out.splitlines()[1] == "h3\t1 4 5 2 | 2 2 1 | 2 2 3"
    finally:
        if old is None:
            os.environ.pop("LIEVAR_CATALOG", None)
        else:
            os.environ["LIEVAR_CATALOG"] = old


@pytest.mark.skipif(shutil.which("lievar") is None, reason="console script not installed")
def test_console_script():
    r = subprocess.run(["lievar", "invariants", "n3"], capture_output=True, text=True)
    assert r.returncode == 0 and "n3\t1 4 5 2" in r.stdout


def test_module_entry():
    r = subprocess.run([sys.executable, "-m", "lievar.cli", "compare", "n3", "C3"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "DEGENERATES cert:n3_to_C3"
