import json
import subprocess
import sys

import pytest

from coreprod.cli import format_path_file, main, parse_path_file
from coreprod.digraph import directed_cycle, format_digraph, parse_digraph
from coreprod.paths import enumerate_kb_paths


@pytest.fixture
def files(tmp_path):
    (tmp_path / "c2.dg").write_text(format_digraph(directed_cycle(2)))
    (tmp_path / "c3.dg").write_text(format_digraph(directed_cycle(3)))
    (tmp_path / "m31.path").write_text("# first mountain\nmountain = 3,1@k=3\n")
    (tmp_path / "m32.path").write_text("mountain = 3,2@k=3\n")
    (tmp_path / "p.path").write_text("k = 4\nword = U D U U\n")
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def test_product(files, capsys):
    out = files / "p.dg"
    code, text = run(capsys, "product", files / "c2.dg", files / "c3.dg", "-o", out, "--json")
    assert code == 0
    assert json.loads(text)["data"]["vertices"] == 6
    assert parse_digraph(out.read_text()).n == 6


def test_product_of_itself(files, capsys):
    code, text = run(capsys, "product", files / "c3.dg", files / "c3.dg", "--json")
    assert code == 0 and json.loads(text)["data"]["vertices"] == 9


def test_product_needs_two_files(files, capsys):
    assert main(["product", str(files / "c2.dg")]) == 3


def test_core_round_trip(files, capsys):
    out, wit = files / "core.dg", files / "w.json"
    run(capsys, "product", files / "c2.dg", files / "c3.dg", "-o", files / "p6.dg")
    code, _ = run(capsys, "core", files / "p6.dg", "-o", out, "--witness", wit)
    assert code == 0
    assert parse_digraph(out.read_text()).n == 6
    assert len(json.loads(wit.read_text())["retraction"]) == 6


def test_core_of_path_file_is_itself(files, capsys):
    out = files / "c.dg"
    code, text = run(capsys, "core", files / "p.path", "-o", out, "--json")
    assert code == 0
    assert json.loads(text)["data"]["core_vertices"] == 7


def test_verify_kinds(files, capsys):
    assert run(capsys, "verify", "vsc", "--family", "dm", "--h", 5, "--l", 2)[0] == 0
    assert run(capsys, "verify", "gadget", "--d1", files / "c3.dg", "--d2", files / "c2.dg")[0] == 0
    assert run(capsys, "verify", "two-cone", "--g", files / "m31.path", "--h", files / "m32.path")[0] == 0
    assert run(capsys, "verify", "mountain-family", "--h", 6, "--l", 2)[0] == 0
    assert run(capsys, "verify", "lattice", "--samples", 10)[0] == 0


def test_false_and_inconclusive_exit_codes(files, capsys):
    assert run(capsys, "hom", files / "c3.dg", files / "c2.dg")[0] == 1
    assert run(capsys, "is-core", files / "m31.path", "--budget-nodes", 1)[0] == 2
    code, text = run(capsys, "verify", "two-cone", "--g", "3,1@k=3", "--h", "3,1@k=3", "--json")
    assert code == 1
    assert json.loads(text)["checks"][0]["incomparable"] == "false"


def test_bad_input(files, capsys):
    (files / "bad.dg").write_text("2\n0 -> 7\n")
    assert main(["parse", str(files / "bad.dg")]) == 3
    assert main(["parse", str(files / "missing.dg")]) == 3
    assert main(["verify", "gadget"]) == 3


def test_json_is_byte_stable(files, capsys):
    argv = ["verify", "vsc", "--family", "dm", "--h", "5", "--l", "2", "--json"]
    _, a = run(capsys, *argv)
    _, b = run(capsys, *argv)
    assert a == b
    assert "seconds" not in json.loads(a)
    _, c = run(capsys, *argv, "--timing")
    assert "seconds" in json.loads(c)


def test_mountain_commands(capsys):
    code, text = run(capsys, "mountains", "gen", "--h", 6, "--l", 2, "--json")
    data = json.loads(text)["data"]
    assert data["members"] == ["4,3@k=4", "4,2@k=4", "4,1@k=4"]
    assert data["counts"]["anchored"] == 3 and data["counts"]["stated_formula"] == 6
    code, text = run(capsys, "mountains", "omega", "4,2@k=4", "--json")
    assert json.loads(text)["data"]["omega"] == "4,3,1@k=4"


def test_gadget_build_and_dot(files, capsys):
    out, side = files / "g.dg", files / "g.json"
    assert run(capsys, "gadget", "build", files / "c3.dg", "-o", out, "--sidecar", side)[0] == 0
    g = parse_digraph(out.read_text())
    assert g.n == 18 and g.is_symmetric
    assert json.loads(side.read_text())["vertices"] == 18
    code, text = run(capsys, "export-dot", files / "c2.dg")
    assert "dir=none" in text


def test_orthogonal_commands(files, capsys):
    assert run(capsys, "orthogonal", files / "c2.dg", files / "c3.dg")[0] == 0
    code, _ = run(capsys, "orthogonalize", files / "c2.dg", files / "c3.dg", "-o", files / "o")
    assert code == 0
    assert parse_digraph((files / "o.h.dg").read_text()) == directed_cycle(3)


def test_path_file_round_trip():
    for w in enumerate_kb_paths(4, 9):
        assert parse_path_file(format_path_file(w)) == w


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "coreprod", "parse", str(files / "c3.dg"), "--json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["data"]["arcs"] == 3
