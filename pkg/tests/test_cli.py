import json
from pathlib import Path

import numpy as np
import pytest

from finmetric import cli, io

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

# verb -> argument list; shared with the acceptance suite
INVOCATIONS = {
    "validate": ["validate", "path4.txt"],
    "quotient": ["quotient", "pseudo.txt"],
    "components": ["components", "blocks.txt"],
    "net": ["net", "path4.txt", "--eps", "1.5", "--seed", "3"],
    "pack": ["pack", "rhombus.json", "--eps", "1.5"],
    "tree": ["tree", "rhombus.json"],
    "ultra": ["ultra", "triangle.txt"],
    "hausdorff": ["hausdorff", "path4.txt", "--a", "0", "--b", "0,3"],
    "planar-hausdorff": ["planar-hausdorff", "square.csv", "tri.csv"],
    "gh": ["gh", "path4.txt", "rhombus.json"],
    "gh-bounds": ["gh-bounds", "path4.txt", "triangle.txt"],
    "glue": ["glue", "triangle.txt", "path4.txt"],
    "tightspan": ["tightspan", "rhombus.json", "--trials", "8", "--seed", "1"],
    "hyperconvex": ["hyperconvex", "triangle.txt"],
    "urysohn-grow": ["urysohn-grow", "--steps", "12", "--cap", "1", "--seed", "4"],
    "urysohn-stats": ["urysohn-stats", "rhombus.json", "--trials", "30", "--seed", "2", "--cap", "2"],
    "back-and-forth": ["back-and-forth", "path4.txt", "path4.txt", "--shuffle", "--seed", "5"],
}


def resolve(args):
    return [str(DATA / a) if (DATA / a).exists() else a for a in args]


def run(capsys, args):
    code = cli.main(resolve(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_every_verb_has_an_invocation():
    assert set(INVOCATIONS) == set(cli.VERBS)


@pytest.mark.parametrize("verb", sorted(INVOCATIONS))
def test_golden_reports(verb, capsys):
    code, out, _ = run(capsys, INVOCATIONS[verb])
    assert code == 0
    golden = GOLDEN / f"{verb}.json"
    assert out == golden.read_text()
    assert run(capsys, INVOCATIONS[verb])[1] == out


def test_validate_failure_lists_violations(capsys):
    code, out, _ = run(capsys, ["validate", "broken.txt"])
    assert code == 1
    rep = json.loads(out)
    assert rep["ok"] is False
    assert rep["violations"][0]["axiom"] == "triangle"
    assert rep["violations"][0]["witness"] == [0, 2, 1]


def test_invalid_metric_is_a_domain_error_everywhere(capsys):
    for args in (["gh", "broken.txt", "path4.txt"], ["net", "broken.txt", "--eps", "1"], ["tree", "broken.txt"]):
        assert run(capsys, args)[0] == 1


@pytest.mark.parametrize("args", [
    ["net", "path4.txt"],
    ["gh", "path4.txt"],
    ["hausdorff", "path4.txt", "--a", "0"],
    ["validate", "no-such-file.txt"],
    ["validate", "square.csv"],
    ["planar-hausdorff", "path4.txt", "tri.csv"],
    ["validate"],
    ["net", "path4.txt", "--eps", "-1"],
])
def test_usage_errors(args, capsys):
    code, out, err = run(capsys, args)
    assert code == 2 and out == "" and err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["no-such-verb"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["validate", "x", "--format", "xml"])
    assert exc.value.code == 2


def test_parse_error_position_reported(capsys, tmp_path):
    f = tmp_path / "m.txt"
    f.write_text("2\n0 1\n1 zero\n")
    code, _, err = run(capsys, ["validate", str(f)])
    assert code == 2 and "line 3, column 3" in err


def test_stdin_input(capsys, monkeypatch):
    import io as _io

    monkeypatch.setattr("sys.stdin", _io.StringIO((DATA / "path4.txt").read_text()))
    code, out, _ = run(capsys, ["tree", "-"])
    assert code == 0 and json.loads(out)["tree_metric"] is True


def test_text_format(capsys):
    code, out, _ = run(capsys, ["gh", "path4.txt", "triangle.txt", "--format", "text"])
    assert code == 0
    keys = [line.split(":")[0] for line in out.splitlines()]
    assert keys == sorted(keys) and "value" in keys


def test_floats_have_twelve_significant_digits(capsys):
    _, out, _ = run(capsys, ["tightspan", "rhombus.json", "--trials", "8", "--seed", "1"])
    vals = [v for row in json.loads(out)["samples"] for v in row]
    assert any(v != round(v, 3) for v in vals)
    for v in vals:
        assert v == float(f"{v:.12g}")


def test_quotient_round_trip(capsys):
    _, out, _ = run(capsys, ["quotient", "path4.txt"])
    once = io.parse_matrix_json(json.dumps(json.loads(out)["space"]))
    assert once == io.read_matrix(DATA / "path4.txt")


def test_components_output_reparses(capsys):
    _, out, _ = run(capsys, ["components", "blocks.txt"])
    comps = json.loads(out)["components"]
    assert [c["indices"] for c in comps] == [[0, 1], [2, 3]]
    assert io.parse_matrix_json(json.dumps(comps[1]["space"])).d[0, 1] == 2


def test_growth_state_chains(capsys, tmp_path):
    _, out, _ = run(capsys, ["urysohn-grow", "--steps", "5", "--cap", "1", "--seed", "9"])
    f = tmp_path / "state.json"
    f.write_text(out)
    code, out2, _ = run(capsys, ["urysohn-grow", str(f), "--steps", "5"])
    assert code == 0
    whole = run(capsys, ["urysohn-grow", "--steps", "10", "--cap", "1", "--seed", "9"])[1]
    assert out2 == whole
    code, stats, _ = run(capsys, ["urysohn-stats", str(f), "--trials", "10"])
    assert code == 0 and json.loads(stats)["n"] == 6


def test_gh_report_fields(capsys):
    _, out, _ = run(capsys, ["gh", "path4.txt", "rhombus.json"])
    rep = json.loads(out)
    assert set(rep) == {"value", "exact", "nodes_explored", "correspondence"}
    assert rep["exact"] is True
