import json

import pytest

import cli


def run(capsys, *argv):
    status = cli.run(list(argv))
    captured = capsys.readouterr()
    return status, captured.out, captured.err


def test_closure_trace(capsys):
    status, out, _ = run(capsys, "closure", "--graph", "g1", "--set", "v")
    assert status == 0
    assert out.splitlines()[-1] == "closure: {v, w}"
    assert out.splitlines()[0] == "Lambda_0: {v, w}"


def test_closure_json(capsys):
    status, out, _ = run(capsys, "closure", "--graph", "g6", "--set", "v", "--format", "json")
    assert status == 0
    doc = json.loads(out)
    assert doc["closure"] == ["u", "v"]
    assert doc["steps"] == [["v"], ["u", "v"], ["u", "v"]]


def test_nf(capsys):
    assert run(capsys, "nf", "--graph", "g6", "--expr", "u - e e*") == (0, "0\n", "")
    status, out, _ = run(capsys, "nf", "--graph", "g3", "--expr", "f f*", "--strategy", "rightmost")
    assert out == "v - g g*\n"


def test_nf_over_prime_field(capsys):
    status, out, _ = run(capsys, "nf", "--graph", "g4", "--field", "gf:5", "--expr", "v - g")
    assert (status, out) == (0, "v + 4 g\n")


def test_eq(capsys):
    status, out, _ = run(capsys, "eq", "--graph", "g3", "--expr", "f f*", "--expr", "v - g g*")
    assert status == 0
    assert out.splitlines()[0] == "equal"
    status, out, _ = run(capsys, "eq", "--graph", "g3", "--expr", "f", "--expr", "g")
    assert out.splitlines()[0] == "not equal"


def test_eq_needs_two_expressions(capsys):
    status, _, err = run(capsys, "eq", "--graph", "g3", "--expr", "f")
    assert status == 2
    assert "exactly two" in err


def test_csp_cycles_factorize(capsys):
    assert run(capsys, "csp", "--graph", "g7", "--set", "v", "--max-len", "3")[1] == "a b\na l b\n"
    assert run(capsys, "cycles", "--graph", "g8")[1] == "a b @ u\nb a @ v\n"
    assert run(capsys, "factorize", "--graph", "g8", "--expr", "a b a b")[1] == "a b | a b\n"


def test_lattice_and_noetherian(capsys):
    status, out, _ = run(capsys, "noetherian", "--graph", "g1")
    assert status == 0
    assert out.splitlines()[0] == "Noetherian: yes; lattice size 3; longest chain 3"
    status, out, _ = run(capsys, "lattice", "--graph", "g1", "--format", "dot")
    assert '"{w}" -> "{v, w}"' in out
    status, out, _ = run(capsys, "lattice", "--graph", "clock:3")
    assert out.splitlines()[0] == "members (9):"


def test_noetherian_growth(capsys):
    status, out, _ = run(capsys, "noetherian", "--graph", "clock:3", "--set", "w1,w2,w3")
    assert out.splitlines()[-1] == "growth: {v, w1} <= {v, w1, w2} <= {v, w1, w2, w3}"


def test_ideal_member(capsys):
    status, out, _ = run(capsys, "ideal-member", "--graph", "g3", "--gens", "v + f", "--target", "v", "--bound", "2")
    assert status == 0
    assert out.startswith("Found at bound")
    assert "(v + f)" in out


def test_ideal_member_not_found(capsys):
    status, out, err = run(capsys, "ideal-member", "--graph", "g1", "--gens", "w", "--target", "v", "--bound", "3")
    assert status == 0
    assert out == "NotFoundAtBound(3)\n"


def test_ideal_canon(capsys):
    status, out, _ = run(capsys, "ideal-canon", "--graph", "g8", "--gens", "u - a b; v - b a")
    assert status == 0
    assert out.splitlines()[0] == "u - a b    [p(a b) at u, p(x) = 1 - x]"
    status, out, _ = run(capsys, "ideal-canon", "--graph", "g8", "--gens", "u - a b", "--format", "json")
    doc = json.loads(out)
    assert doc["generators"][0]["polynomial"] == "1 - x"


def test_graded_trace(capsys):
    status, out, _ = run(capsys, "graded-trace", "--graph", "g1", "--set", "w")
    assert status == 0
    lines = out.splitlines()
    assert lines[:3] == ["H = {w}", "v: NotFoundAtBound(6)", "w: Found"]
    assert lines[-1] == "consistent: yes"


def test_export_dot_from_file(capsys, tmp_path):
    path = tmp_path / "two.json"
    path.write_text('{"vertices": ["p", "q"], "edges": [{"id": "x", "src": "p", "dst": "q"}]}', encoding="utf-8")
    status, out, _ = run(capsys, "export-dot", "--graph", str(path))
    assert status == 0
    assert '  "p" -> "q" [label="x"];' in out


@pytest.mark.parametrize("argv, fragment", [
    (["closure", "--graph", "nowhere", "--set", "v"], "no graph file or fixture"),
    (["closure", "--graph", "g1", "--set", "x"], "unknown vertex 'x'"),
    (["nf", "--graph", "g1", "--expr", "v +"], "position"),
    (["nf", "--graph", "g1", "--field", "gf:4", "--expr", "v"], "not prime"),
])
def test_domain_errors_exit_1(capsys, argv, fragment):
    status, _, err = run(capsys, *argv)
    assert status == 1
    assert fragment in err


def test_bad_graph_file_reports_location(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"vertices": ["v"], "edges": [{"id": "e", "src": "v", "dst": "w"}]}', encoding="utf-8")
    status, _, err = run(capsys, "export-dot", "--graph", str(path))
    assert status == 1
    assert "edges[0].dst" in err


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate", "--graph", "g1"],
    ["closure", "--graph", "g1"],
    ["nf", "--graph", "g1", "--expr", "v", "--format", "dot"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_help_exits_0(capsys):
    status, out, _ = run(capsys, "--help")
    assert status == 0
    assert "ideal-member" in out


def test_output_is_deterministic(capsys):
    argv = ["ideal-canon", "--graph", "g3", "--gens", "v + f; f g*", "--format", "json"]
    first = run(capsys, *argv)
    assert run(capsys, *argv) == first


def test_csp_length_is_independent_of_bound(capsys):
    status, out, _ = run(capsys, "csp", "--graph", "g7", "--set", "v", "--bound", "1")
    assert status == 0
    assert out.splitlines() == ["a b", "a l b", "a l l b", "a l l l b", "a l l l l b"]


def test_graph_file_with_bad_encoding_exits_1(capsys, tmp_path):
    path = tmp_path / "latin.json"
    path.write_bytes(b'{"vertices": ["v\xff"], "edges": []}')
    status, _, err = run(capsys, "export-dot", "--graph", str(path))
    assert status == 1
    assert "byte 16" in err


def test_unparseable_vertex_id_is_rejected_on_load(capsys, tmp_path):
    path = tmp_path / "dash.json"
    path.write_text('{"vertices": ["v", "v-1"], "edges": [{"id": "e", "src": "v", "dst": "v-1"}]}', encoding="utf-8")
    status, out, err = run(capsys, "nf", "--graph", str(path), "--expr", "v-1")
    assert (status, out) == (1, "")
    assert "vertices[1]" in err
