import json
import os

import pytest

from mcdeform.cli import main, run

from helpers import FIXTURES, GOLDEN

SHIFT2 = json.dumps({"e*am2@-2->am1@-1": "1", "e*am1@-1->a0@0": "1",
                     "e*a0@0->a1@1": "1", "e*a1@1->a2@2": "1"})
F1 = '{"e*a@-1->b@0": "1"}'
F2 = '{"e*a@-1->b@0": "2"}'
LITERAL = json.dumps({"n": 1, "components": {
    "e*a@-1->b@0": [{"t": [1], "dt": [], "c": "-1"}],
    "e*a@-1->a@-1": [{"t": [0], "dt": [1], "c": "1"}]}})

# name, argv, exit code
CASES = [
    ("validate_abelian", ["validate", "abelian.json"], 0),
    ("validate_xy_lie", ["validate", "xy_lie.json"], 0),
    ("validate_dual3", ["validate", "dual3.json"], 0),
    ("validate_broken_jacobi", ["validate", "broken_jacobi.json"], 1),
    ("validate_broken_antisymmetry", ["validate", "broken_antisymmetry.json"], 1),
    ("validate_bad_complex", ["validate", "bad_complex.json"], 1),
    ("mc_check_window", ["mc", "window2.json", "dual2.json", "--check", SHIFT2], 0),
    ("mc_check_obstruction", ["mc", "obstruction.json", "dual3.json", "--check", '{"e*x": "1"}'], 0),
    ("mc_solve_two_term", ["mc", "two_term.json", "dual2.json", "--solve-square-zero"], 0),
    ("mc_lift_obstruction", ["mc", "obstruction.json", "dual3.json", "--lift-order", "2",
                             "--from", '{"e*x": "1"}'], 0),
    ("mc_lift_killed", ["mc", "obstruction_killed.json", "dual3.json", "--lift-order", "2",
                        "--from", '{"e*x": "1"}'], 0),
    ("gauge_not_found", ["gauge", "two_term.json", "dual2.json", F1, F2], 0),
    ("gauge_found", ["gauge", "identity_complex.json", "dual2.json", "{}", '{"e*a@-1->b@0": "7"}'], 0),
    ("nerve_path", ["nerve", "identity_complex.json", "dual2.json", "--path", "{}", '{"e*a@-1->a@-1": "1"}'], 0),
    ("nerve_member_literal", ["nerve", "identity_complex.json", "dual2.json", "--member", LITERAL], 0),
    ("deform_classify_two_term", ["deform", "two_term.json", "--classify"], 0),
    ("deform_classify_identity", ["deform", "identity_complex.json", "--classify"], 0),
    ("deform_counterexample", ["deform", "--counterexample", "3"], 0),
    ("deform_counterexample_text", ["deform", "--counterexample", "2", "--format", "text"], 0),
    ("gauge_not_mc", ["gauge", "obstruction.json", "dual3.json", '{"e*x": "1"}', "{}"], 2),
    ("mc_solve_not_square_zero", ["mc", "abelian.json", "dual3.json", "--solve-square-zero"], 2),
    ("mc_invalid_input", ["mc", "broken_jacobi.json", "dual2.json", "--solve-square-zero"], 1),
    ("parse_unknown_label", ["mc", "xy_lie.json", "dual2.json", "--check", '{"e*nope": "1"}'], 3),
    ("parse_float", ["mc", "xy_lie.json", "dual2.json", "--check", '{"e*x": 0.5}'], 3),
]


def _golden_name(name, argv):
    return name + (".txt" if "text" in argv else ".json")


def _capture(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


@pytest.fixture(autouse=True)
def in_fixtures(monkeypatch):
    monkeypatch.chdir(FIXTURES)


@pytest.mark.parametrize("name,argv,code", CASES, ids=[c[0] for c in CASES])
def test_cli_golden(name, argv, code, capsys):
    got_code, out = _capture(argv, capsys)
    assert got_code == code
    path = GOLDEN / _golden_name(name, argv)
    if os.environ.get("MCDEFORM_REGEN_GOLDEN"):
        path.write_text(out, encoding="utf-8")
    assert out == path.read_text(encoding="utf-8")


def test_cli_twice_identical(capsys):
    for _, argv, _ in CASES:
        assert _capture(argv, capsys) == _capture(argv, capsys)


def test_parse_error_has_location():
    code, report, _ = run(["mc", "xy_lie.json", "dual2.json", "--check", '{"e*x": 0.5}'])
    assert code == 3
    assert report["error"]["line"] == 1 and report["error"]["column"] == 9


def test_parse_error_in_document(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "schema": "mcdeform/1",\n  "kind": "dgla",\n  "generators": [1.5]\n}\n')
    code, report, _ = run(["validate", str(bad)])
    assert code == 3
    assert report["error"]["line"] == 4


def test_out_option_and_trailing_globals(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["validate", "abelian.json", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["payload"]["valid"] is True
    assert main(["--format", "text", "validate", "abelian.json"]) == 0
    assert "valid: true" in capsys.readouterr().out


def test_timing_is_opt_in():
    _, report, _ = run(["validate", "abelian.json"])
    assert "wall_time_s" not in report
    _, report, _ = run(["validate", "abelian.json", "--timing"])
    assert report["wall_time_s"] >= 0
