import io
import json
import random
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from lie2gerbe.cartan import Form, Q, Space, VectorField, d
from lie2gerbe.cartan.sampling import random_form, random_scalar, random_vector_field
from lie2gerbe.moment import heisenberg
from lie2gerbe.scenario import (
    SUITE_HELP,
    SUITES,
    ConfigurationError,
    Report,
    RunOptions,
    ScenarioError,
    ScenarioTypeError,
    parse_expression,
    parse_scenario,
    render_report,
    run_suites,
)
from lie2gerbe.scenario.cli import main

from conftest import SMALL

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"
S = Space(3)
T = Space(3, "trig")
x1, x2, x3 = (S.coord(i) for i in range(3))

MINIMAL = """space dim=3 ring=poly
def chi = d(x3*dx1∧dx2)
suite l2-axioms
options cases=2 seed=5
"""


def _error(text):
    with pytest.raises(ScenarioError) as info:
        parse_scenario(text)
    return info.value


# -- parsing ------------------------------------------------------------------------------

def test_golden_minimal_document():
    doc = parse_scenario(MINIMAL)
    assert doc.space == S
    assert doc.defs["chi"] == Form.basis(S, (0, 1, 2))
    assert doc.suites == ("l2-axioms",)
    assert doc.options == RunOptions(cases=2, seed=5, max_degree=2)
    assert doc.gerbe is None and doc.liealg is None


def test_golden_moment_document():
    doc = parse_scenario((SCENARIOS / "moment_translations.scn").read_text())
    assert doc.cover.size == 3
    assert doc.gerbe.seed == 2 and doc.gerbe.potential == "B0"
    assert doc.liealg.dim == 2 and doc.moment.auto
    assert doc.defs["tau"] == Form.basis(S, (0, 1), S.const(3)) - Form.basis(S, (1, 2), S.const(2))
    assert doc.suites == ("moment", "prop41", "outer-edge")


def test_expression_forms():
    assert parse_expression(S, "x1^2*x2 - 1/2") == x1 * x1 * x2 - S.const(Q(1, 2))
    assert parse_expression(S, "wedge(dx1, dx2)") == parse_expression(S, "dx1 ^^ dx2")
    assert parse_expression(S, "i(D1, dx1∧dx2)") == Form.basis(S, (1,))
    assert parse_expression(S, "L(D3, x3*dx1∧dx2)") == Form.basis(S, (0, 1))
    assert parse_expression(S, "bracket(D1, x1*D2)") == VectorField.coordinate(S, 1)
    assert parse_expression(S, "d(x1*x2)") == d(x1 * x2)
    s = parse_expression(T, "sin(2pi*x1)*cos(2pi*x1)")
    assert s == T.trig(1, (2, 0, 0), Q(1, 2))


def test_explicit_lie_algebra_and_moment():
    doc = parse_scenario("""space dim=3 ring=poly
def chi = dx1∧dx2∧dx3
liealg dim 3 [e1,e2] = e3
action e1 -> D1, e2 -> D2 + x1*D3, e3 -> D3
moment J0(e1) = (D1, -x2*dx3) J0(e2) = (D2 + x1*D3, x1*x2*dx1 + 0*dx1 - x3*dx1) J0(e3) = (D3, -x1*dx2) J2(e1,e2) = x3
""")
    assert doc.liealg.structure == heisenberg().structure
    assert not doc.moment.auto and len(doc.moment.J0) == 3
    assert doc.moment.J2 == ((0, 1, x3),)


@pytest.mark.parametrize("text, where, words", [
    ("space dim=3 ring=poly\ndef w = wedge(dx1)\n", (2, 9), "wedge takes 2"),
    ("space dim=3 ring=poly\ndef s = sin(2pi*x1)\n", (2, 9), "polynomial space"),
    ("space dim=3 ring=poly\ndef s = y + 1\n", (2, 9), "undefined"),
    ("space dim=3 ring=poly\ndef s = x1 +\n", (2, 12), "end of input"),
    ("space dim=3 ring=poly\ndef s = dx1 + x1\n", (2, 9), ""),
    ("space dim=3 ring=poly\nsuite moment, nonsense\n", (2, 15), "unknown suite"),
    ("space dim=3 ring=poly\ndef s = x4\n", (2, 9), ""),
    ("def s = x1\n", (1, 1), "space"),
    ("space dim=3 ring=poly\noptions cases=0\n", (2, None), ""),
])
def test_errors_carry_location(text, where, words):
    err = _error(text)
    line, col = where
    assert err.line == line
    if col is not None:
        assert err.column == col
    assert words.lower() in str(err).lower()
    assert f"line {err.line}" in str(err)


def test_trig_in_poly_space_is_a_type_error():
    assert isinstance(_error("space dim=3 ring=poly\ndef s = cos(2pi*x1)\n"), ScenarioTypeError)


def test_gerbe_blocks_need_a_cover():
    assert "cover" in str(_error("space dim=3 ring=poly\ngerbe seed 1\n"))


@given(seed=st.integers(0, 10**6))
def test_render_parse_round_trip(seed):
    rng = random.Random(seed)
    for space in (S, T):
        for v in (random_scalar(space, rng, SMALL), random_form(space, 1, rng, SMALL),
                  random_form(space, 2, rng, SMALL), random_vector_field(space, rng, SMALL),
                  d(random_form(space, 2, rng, SMALL))):
            back = parse_expression(space, v.render())
            # zero of any degree renders as the number 0
            assert back == v or (v.iszero() and back == 0)


def test_definitions_round_trip():
    doc = parse_scenario((SCENARIOS / "torus.scn").read_text())
    again = parse_scenario("space dim=3 ring=trig\n" + doc.render_definitions())
    assert again.defs == doc.defs


# -- running --------------------------------------------------------------------------------

def test_l2_suite_on_minimal_doc():
    rep = run_suites(parse_scenario(MINIMAL))
    assert rep.ok and rep.summary == "1/1 suites passed"


def test_configuration_errors():
    doc = parse_scenario(MINIMAL)
    with pytest.raises(ConfigurationError):
        run_suites(doc, suites=["butterfly-F"])
    with pytest.raises(ConfigurationError):
        run_suites(doc, suites=["outer-edge"])
    with pytest.raises(ConfigurationError):
        run_suites(doc, suites=["bogus"])


def test_determinism_and_formats():
    doc = parse_scenario((SCENARIOS / "gerbe_explicit.scn").read_text())
    opts = RunOptions(cases=2, seed=3)
    a = run_suites(doc, opts, suites=["gerbe-valid", "butterfly-G"])
    b = run_suites(doc, opts, suites=["gerbe-valid", "butterfly-G"])
    for fmt in ("text", "json"):
        assert render_report(a, fmt, timing=False) == render_report(b, fmt, timing=False)
    data = json.loads(render_report(a, "json"))
    assert data["summary"] == {"passed": 2, "total": 2}
    assert {"suite", "axiom", "status", "cases", "seed"} <= set(data["results"][0])
    text = render_report(a, "text", timing=False)
    assert text.endswith("2/2 suites passed")
    with pytest.raises(ValueError):
        render_report(a, "xml")


def test_failure_report_contains_counterexample():
    doc = parse_scenario((SCENARIOS / "moment_obstructed.scn").read_text())
    rep = run_suites(doc, RunOptions(cases=1), suites=["moment"])
    assert not rep.ok
    rows = json.loads(render_report(rep, "json"))["results"]
    bad = [r for r in rows if r["status"] == "fail"]
    assert bad and "residual = -1" in bad[0]["counterexample"]
    assert "residual = -1" in render_report(rep, "text")


def test_empty_report():
    rep = Report(seed=0, cases=0)
    data = json.loads(render_report(rep, "json"))
    assert data["results"] == [] and data["summary"] == {"passed": 0, "total": 0}
    assert render_report(rep, "text").endswith("0/0 suites passed")


def test_bad_explicit_gerbe_is_reported_not_raised():
    text = (SCENARIOS / "gerbe_explicit.scn").read_text().replace("B(2) = B1", "B(2) = B1 + x1*dx1∧dx2")
    rep = run_suites(parse_scenario(text), RunOptions(cases=1), suites=["gerbe-valid", "butterfly-F"])
    assert not rep.ok
    assert any(s.error for s in rep.suites) or any(not r.ok for s in rep.suites for r in s.reports)


def test_suite_help_covers_every_suite():
    assert set(SUITE_HELP) == set(SUITES) and len(SUITES) == 15


# -- CLI ----------------------------------------------------------------------------------------

def test_cli_exit_codes(tmp_path, capsys, monkeypatch):
    good = tmp_path / "good.scn"
    good.write_text(MINIMAL)
    assert main(["check", str(good), "--no-timing"]) == 0
    assert "1/1 suites passed" in capsys.readouterr().out
    assert main(["check", str(SCENARIOS / "moment_obstructed.scn"), "--cases", "1", "--suite", "moment"]) == 1
    bad = tmp_path / "bad.scn"
    bad.write_text("space dim=3 ring=poly\ndef w = wedge(dx1)\n")
    assert main(["check", str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err
    assert main(["check", str(tmp_path / "missing.scn")]) == 2
    assert main(["check", str(good), "--suite", "butterfly-F"]) == 2
    assert main(["check", str(good), "--suite", "nope"]) == 2
    assert main(["check", str(good), "--cases", "0"]) == 2
    assert main([]) == 2
    monkeypatch.setattr("sys.stdin", io.StringIO(MINIMAL))
    assert main(["check", "-", "--report", "json", "--no-timing"]) == 0
    assert json.loads(capsys.readouterr().out)["summary"]["passed"] == 1
