import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from relorders.cli import parse_dot, parse_subgroup_text, run

DATA = Path(__file__).resolve().parent.parent / "data"
H1, H4, KO = str(DATA / "h1.sub"), str(DATA / "h4.sub"), str(DATA / "ko_01236.sub")


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue().strip(), err.getvalue()


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["order", "-g", H1, "-e", "a"], "2"),
        (["order", "-g", H1, "-e", "b"], "0"),
        (["spectrum", "-g", KO], "0 1 2 3 6"),
        (["order", "-g", H4, "-e", "1|(1)"], "4"),
        (["spectrum", "-g", H4], "0 1 2 4"),
        (["member", "-g", H4, "-e", "a^3 | (2)"], "true"),
        (["member", "-g", H1, "-e", "b"], "false"),
        (["smp", "3", "-g", H1], "false"),
        (["smp", "6", "-g", KO], "true"),
        (["tgp", "-g", H1], "true"),
        (["bound", "-g", H1], "3"),
        (["bound", "-g", H4], "4"),
        (["pure", "-g", H1, "--s-set", "2"], "false"),
        (["pure", "-g", H1, "--s-set", "3"], "true"),
        (["index", "-g", H1], "inf"),
        (["closure", "-g", H1, "--s-set", "2"], "ambient F 2\ngen a\ngen b"),
        (["order", "-g", H1, "-e", "b", "--coset", "b"], "1"),
    ],
)
def test_plain_outputs(argv, expected):
    code, out, _ = call(*argv)
    assert code == 0
    assert out == expected


def test_preorder_output():
    code, out, _ = call("preorder", "2", "-g", H1)
    assert code == 0
    assert out.splitlines() == ["part: subgroup-basis=[a^2] rep=a", "conjugator=[a^2, a b^2]", "label=2"]


def test_json_mode():
    code, out, _ = call("roots", "2", "-g", H4, "--json")
    payload = json.loads(out)
    assert code == 0 and payload["command"] == "roots"
    assert payload["result"]["parts"][0]["representative"] == "1 | (0)"
    code, out, _ = call("spectrum", "-g", KO, "--json")
    assert json.loads(out)["result"] == [0, 1, 2, 3, 6]


def test_ko_roundtrip(tmp_path):
    code, out, _ = call("ko", "--set", "0,1,2,4")
    assert code == 0
    path = tmp_path / "k.sub"
    path.write_text(out + "\n")
    assert call("spectrum", "-g", str(path))[1] == "0 1 2 4"


def test_verify_command():
    code, out, _ = call("verify", "2", "-g", H4, "--ball", "3", "--box", "4")
    assert code == 0 and out.startswith("pass")


def test_dot_output_parses():
    code, out, _ = call("dot", "-g", H1)
    assert code == 0
    name, nodes, edges = parse_dot(out)
    assert name == "H"
    assert nodes["0"]["shape"] == "doublecircle"
    assert sorted((s, d, a["label"]) for s, d, a in edges) == [
        ("0", "1", "a"), ("1", "0", "a"), ("1", "2", "b"), ("2", "0", "b")
    ]


def test_dot_parser_rejects_garbage():
    with pytest.raises(ValueError):
        parse_dot("digraph H {\n 0 -> ;\n}")
    with pytest.raises(ValueError):
        parse_dot("graph H {\n}")


@pytest.mark.parametrize(
    "argv",
    [
        ["order", "-g", H1, "-e", "c"],
        ["order", "-g", H4, "-e", "a | (1,2)"],
        ["order", "-g", "/nonexistent.sub", "-e", "a"],
        ["order", "-g", H1],
        ["ko", "--set", "1,2"],
        ["bogus"],
    ],
)
def test_parse_errors_exit_2(argv):
    assert call(*argv)[0] == 2


def test_resource_guard_exit_3():
    assert call("spectrum", "-g", KO, "--max-trails", "2")[0] == 3


def test_bad_subgroup_file(tmp_path):
    path = tmp_path / "bad.sub"
    path.write_text("ambient F 2\nfoo a\n")
    assert call("order", "-g", str(path), "-e", "a")[0] == 2


def test_subgroup_file_comments():
    sf = parse_subgroup_text("# header\nambient F 2 Z 1  # comment\ngen a | (2)\n\ngen 1 | (4)\n")
    assert sf.is_fta and sf.ambient.abelian_rank == 1 and len(sf.gens) == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "relorders", "order", "-g", H1, "-e", "a"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "2"
