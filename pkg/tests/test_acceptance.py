"""Acceptance criteria, one printed PASS/FAIL line per criterion.

The lines are collected and printed in an "acceptance criteria" section at the
end of any pytest run that includes this module.
Criterion 7a is expected to fail: abelian R^3 and the Heisenberg algebra acting on
(R^3, dx1∧dx2∧dx3) carry a cohomological obstruction, see the README.
"""
import random
from dataclasses import replace

import pytest

import oracle
from conftest import ACCEPTANCE_LINES, random_exact_chi, torus_chi
from lie2gerbe.algebras import (
    check_pairing_preserved,
    gauge_atiyah,
    gauge_courant,
    mk_atiyah,
    mk_courant,
    mk_observables,
    psi_to_atiyah,
    rogers_embedding,
)
from lie2gerbe.butterfly import (
    ButterflyIso,
    check_butterfly,
    check_butterfly_iso,
    flip,
    pullback_lie_algebra,
    pushout_strict,
)
from lie2gerbe.cartan import Form, GenSection, Q, Space, VectorField, interior
from lie2gerbe.cartan.sampling import SamplerSettings, random_form
from lie2gerbe.comparisons import courant_atiyah_iso, gauge_atiyah_iso, gauge_courant_iso, prequantization_iso
from lie2gerbe.gerbe import (
    FElem,
    GElem,
    GerbeData,
    algebroid_differential,
    butterfly_E,
    butterfly_F,
    butterfly_G,
    check_lemma_connex_pres,
    connection_shift_iso,
    curving_inclusion,
    random_trivializable_gerbe,
    shift_curving,
    single_chart,
    three_box_cube,
    validate_connective,
    validate_gerbe,
    vertical_potential,
)
from lie2gerbe.gerbe.lie2 import multvf_bracket, sample_section, xgamma_bracket
from lie2gerbe.lie2core import check_l2_axioms, check_weak_morphism, compose_weak, morphisms_equal
from lie2gerbe.moment import (
    check_moment_map,
    check_prop41,
    construct_moment_map,
    heisenberg_action,
    outer_edge_check,
    prop41_composites,
    rotations,
    shift_moment_map,
    translations,
)
from lie2gerbe.scenario.parser import parse_scenario
from lie2gerbe.scenario.runner import run_suites

pytestmark = pytest.mark.acceptance

S = Space(3)
T = Space(3, "trig")
x1, x2, x3 = (S.coord(i) for i in range(3))
CHI0 = Form.basis(S, (0, 1, 2))
B0 = Form.basis(S, (0, 1), x3)
ELEM = SamplerSettings(max_degree=2)
SCENARIOS = __import__("pathlib").Path(__file__).resolve().parent.parent / "scenarios"


def emit(n, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}"
    ACCEPTANCE_LINES.append(line)
    return line


def verdict(n, title, reports):
    bad = [r for r in reports if not r.ok]
    line = emit(n, not bad, f"{title} ({len(reports) - len(bad)}/{len(reports)} reports pass)")
    assert not bad, line + "\n" + "\n".join(r.render() for r in bad)


def constant_tau(rng):
    return sum((Form.basis(S, I, S.const(Q(rng.randint(-5, 5), rng.randint(1, 5))))
                for I in ((0, 1), (0, 2), (1, 2))), Form.zero(S, 2))


def rotation_invariant_tau(c):
    r2 = x1 * x1 + x2 * x2 + x3 * x3
    ie_vol = Form.basis(S, (1, 2), x1) - Form.basis(S, (0, 2), x2) + Form.basis(S, (0, 1), x3)
    return ie_vol * (S.const(c) + r2)


# -- 1. L-infinity axioms ------------------------------------------------------------------

def test_criterion_1_l2_axioms():
    chis = [("chi0", CHI0)] + [(f"exact#{s}", random_exact_chi(S, s)) for s in range(5)]
    chis.append(("torus", torus_chi(T)))
    reps = []
    for name, chi in chis:
        for mk in (mk_observables, mk_courant, mk_atiyah):
            r = check_l2_axioms(mk(chi.space, chi, ELEM), cases=200, seed=0)
            r.subject = f"{r.subject} [{name}]"
            reps.append(r)
    verdict(1, "observables, Courant, Atiyah on chi0, 5 exact chi, torus chi; 200 tuples each", reps)


# -- 2. anchors ----------------------------------------------------------------------------

def test_criterion_2_anchors():
    D = [VectorField.coordinate(S, i) for i in range(3)]
    jA = mk_atiyah(S, CHI0).jac(*D)
    z = Form.zero(S, 1)
    jC = mk_courant(S, CHI0).jac(*(GenSection(v, z) for v in D))
    o = oracle.form(CHI0)
    unit = [[1 if i == j else 0 for i in range(3)] for j in range(3)]
    zero = {(i,): 0 for i in range(3)}
    oC = oracle.courant_jacobiator(o, *((u, zero) for u in unit), n=3)
    ok = jA == -S.one() and jC == S.const(Q(1, 2)) and oracle.same_scalar(oC, jC)
    line = emit(2, ok, f"J_A(d1,d2,d3) = {jA.render()}, J_C = {jC.render()}, oracle J_C = {oC}")
    assert ok, line


# -- 3. weak morphisms ---------------------------------------------------------------------

def test_criterion_3_morphisms():
    reps = []
    for s in range(5):
        rng = random.Random(100 + s)
        tau = random_form(S, 2, rng, SamplerSettings(max_degree=2))
        Tt = gauge_courant(CHI0, tau, ELEM)
        for phi in (rogers_embedding(CHI0, ELEM), psi_to_atiyah(CHI0, ELEM), Tt, gauge_atiyah(CHI0, tau, ELEM)):
            reps.append(check_weak_morphism(phi, cases=40, seed=s))
        reps.append(check_pairing_preserved(Tt, cases=200, seed=s))
    verdict(3, "R, psi, T_tau (+200 pairings), id_tau for 5 random tau of degree <= 2", reps)


# -- 4. gerbes -----------------------------------------------------------------------------

def test_criterion_4_gerbes():
    cover = three_box_cube(S)
    reps, problems = [], []
    pairs = 0
    for s in range(20):
        data, curving, w = random_trivializable_gerbe(S, cover, seed=s)
        reps.append(validate_gerbe(data))
        try:
            validate_connective(data, curving)
            w.require(data, curving)
        except ValueError as exc:
            problems.append(f"gerbe {s}: {exc}")
        rng = random.Random(s)
        tau = random_form(S, 2, rng, SamplerSettings(max_degree=2))
        shifted = shift_curving(curving, tau)
        for _ in range(5):
            a = sample_section(data, rng)
            reps.append(check_lemma_connex_pres(data, curving, a))
            if not (algebroid_differential(data, curving, a) - algebroid_differential(data, shifted, a)).iszero():
                problems.append(f"gerbe {s}: d a changes under curving shift")
            pairs += 1
    bad = [r for r in reps if not r.ok]
    ok = not bad and not problems and pairs == 100
    line = emit(4, ok, f"20 gerbes on three boxes, {pairs} lemma pairs, curving-shift invariance "
                       f"({len(bad)} failing reports, {len(problems)} other problems)")
    assert ok, line + "\n" + "\n".join(problems + [r.render() for r in bad])


# -- 5 and 6. scenario gerbes --------------------------------------------------------------

GERBE_SCENARIOS = ("gerbe_three_box", "gerbe_explicit", "moment_translations", "moment_rotations")


def _run(name, suites, cases=100):
    doc = parse_scenario((SCENARIOS / f"{name}.scn").read_text(encoding="utf-8"))
    return run_suites(doc, replace(doc.options, cases=cases), suites=suites)


def _suite_verdict(n, title, runs):
    bad = [f"{f}/{s.suite}: {s.error or '; '.join(e.axiom for r in s.reports for e in r.failures())}"
           for f, rep in runs for s in rep.suites if not s.ok]
    total = sum(len(rep.suites) for _, rep in runs)
    line = emit(n, not bad, f"{title} ({total - len(bad)}/{total} suite runs pass)")
    assert not bad, line + "\n" + "\n".join(bad)


def test_criterion_5_butterflies():
    runs = [(f, _run(f, ["butterfly-F", "butterfly-G", "butterfly-E"])) for f in GERBE_SCENARIOS]
    _suite_verdict(5, "F, G, E butterflies and exactness on every scenario gerbe, 100 tuples", runs)


def test_criterion_6_isos():
    isos = ["prop32", "prop35", "prop37", "prop39", "remark-gcanon"]
    runs = [("gerbe_three_box", _run("gerbe_three_box", isos))]
    doc = parse_scenario((SCENARIOS / "moment_rotations.scn").read_text(encoding="utf-8"))
    runs.append(("moment_rotations", run_suites(doc, replace(doc.options, cases=100), suites=isos)))
    _suite_verdict(6, "2-isomorphisms for prequantization, Courant-Atiyah, both gauge changes "
                      "and the connection change, 100 elements", runs)


# -- 7. moment maps ------------------------------------------------------------------------

def test_criterion_7a_obstructed_moment_maps():
    reps = [check_moment_map(construct_moment_map(translations(S, 3), CHI0), cases=10),
            check_moment_map(construct_moment_map(heisenberg_action(S), CHI0), cases=10)]
    failing = sorted({f"{e.axiom} [{e.counterexample.splitlines()[-1].strip()}]"
                      for r in reps for e in r.failures()})
    line = emit("7a", all(r.ok for r in reps),
                "abelian R^3 and Heisenberg moment maps; failing: " + ("; ".join(failing) or "none"))
    assert all(r.ok for r in reps), line + "\n" + "\n".join(r.render() for r in reps if not r.ok)


def test_criterion_7b_shifts():
    rng = random.Random(7)
    ab2 = construct_moment_map(translations(S, 2), CHI0)
    so3 = construct_moment_map(rotations(S), CHI0)
    reps = [check_moment_map(shift_moment_map(ab2, constant_tau(rng)), cases=5, seed=k) for k in range(10)]
    reps += [check_moment_map(shift_moment_map(so3, rotation_invariant_tau(c)), cases=5, seed=c) for c in range(10)]
    verdict("7b", "shifted moment maps for 20 invariant tau (10 constant on ab2, 10 rotation-invariant on so3)", reps)


def test_criterion_7c_prop41():
    ab2 = construct_moment_map(translations(S, 2), CHI0)
    so3 = construct_moment_map(rotations(S), CHI0)
    reps = []
    for cov in (single_chart(S), three_box_cube(S)):
        data, curving, _ = random_trivializable_gerbe(S, cov, seed=3, maxdeg=2, B0=B0)
        reps.append(check_prop41(ab2, data, curving, constant_tau(random.Random(cov.size)), cases=20))
        reps.append(check_prop41(so3, data, curving, rotation_invariant_tau(2), cases=10))
    verdict("7c", "moment map compatibility with prequantization on single-chart and three-box gerbes", reps)


def test_criterion_7d_outer_edge():
    rng = random.Random(11)
    ab2 = construct_moment_map(translations(S, 2), CHI0)
    so3 = construct_moment_map(rotations(S), CHI0)
    reps = [outer_edge_check(ab2, constant_tau(rng)) for _ in range(5)]
    reps += [outer_edge_check(so3, rotation_invariant_tau(c)) for c in range(3)]
    verdict("7d", "outer edge T_tau∘R∘J = R'∘J' on basis elements and pairs", reps)


# -- 8. mutation sensitivity ---------------------------------------------------------------

def _gerbe(seed=5, cover=None):
    return random_trivializable_gerbe(S, cover or three_box_cube(S), seed=seed, maxdeg=2)


def _iso_mutant(iso):
    """m shifted by kappa(a0) for a nonzero a0."""
    rng = random.Random(0)
    a0 = iso.target.left.sample1(rng)
    while a0.iszero():
        a0 = iso.target.left.sample1(rng)
    k = iso.target.kappa(a0)
    return ButterflyIso(iso.source, iso.target, m=lambda e: iso.m(e) + k, m_inv=iso.m_inv, name="m + kappa(a0)")


def _mutants():
    data, curving, _ = _gerbe()
    tau = Form.basis(S, (0, 1), x3) - Form.basis(S, (1, 2))
    C = mk_courant(S, CHI0, ELEM)
    R = rogers_embedding(CHI0, ELEM)
    yield "l2-axioms", "Courant J + 1", check_l2_axioms(replace(C, jac=lambda a, b, c: C.jac(a, b, c) + S.one()),
                                                        cases=5)
    yield "morphisms", "Rogers homotopy doubled", check_weak_morphism(replace(R, phi2=lambda a, b: R.phi2(a, b) * 2),
                                                                      cases=5)
    yield "gerbe-valid", "h_123 + x1", validate_gerbe(GerbeData(data.cover, (data.h[0] + x1,) + data.h[1:], data.Lam))
    a = sample_section(data, random.Random(1))
    pot = tuple(v + x1 * (i + 1) for i, v in enumerate(vertical_potential(data, a)))
    yield "lemma-connex", "v_a + (i+1) x1", check_lemma_connex_pres(data, curving, a, potential=pot)

    F = butterfly_F(data, curving, ELEM)
    yield "butterfly-F", "extra central term x(x1) z(x2) - z(x1) x(x2)", check_butterfly(F.with_(
        bracket=lambda e, e2: F.bracket(e, e2) + F.lam(e.x(x1) * e2.x(x2) - e2.x(x1) * e.x(x2))), cases=5)
    G = butterfly_G(data, curving, ELEM)

    def g_br(e, e2):
        bx, bf = multvf_bracket(e.x, e.f, e2.x, e2.f)
        return GElem(bx, bf, tuple(e.x(h) - e2.x(g) for g, h in zip(e.g, e2.g)))
    yield "butterfly-G", "dropped iota_z iota_x B", check_butterfly(G.with_(bracket=g_br), cases=5)

    def e_br(e, e2):
        base = xgamma_bracket(e, e2)
        return FElem(base.x, base.f, base.alpha,
                     tuple(interior(e.x, b) - interior(e2.x, a) for a, b in zip(e.alpha, e2.alpha)))
    # on one chart epsilon stays global, so the mutation shows up as an identity failure
    gdata, gcurv, _ = random_trivializable_gerbe(S, single_chart(S), seed=3, maxdeg=2, B0=B0)
    E = butterfly_E(gdata, gcurv, ELEM)
    yield "butterfly-E", "dropped iota_z iota_x B", check_butterfly(E.with_(bracket=e_br), cases=5)

    for suite, iso in (("prop32", prequantization_iso(data, curving, ELEM)),
                       ("prop35", courant_atiyah_iso(data, curving, ELEM)),
                       ("prop37", gauge_courant_iso(data, curving, tau, ELEM)),
                       ("prop39", gauge_atiyah_iso(data, curving, tau, ELEM))):
        yield suite, "m + kappa(a0)", check_butterfly_iso(_iso_mutant(iso), cases=5)
    rng = random.Random(3)
    nu = tuple(random_form(S, 1, rng, ELEM) for _ in range(data.cover.size))
    good = connection_shift_iso(data, curving, nu, ELEM)
    bad = ButterflyIso(good.source, good.target,
                       m=lambda e: GElem(e.x, e.f, tuple(g - interior(e.x, n) for g, n in zip(e.g, nu))),
                       m_inv=good.m_inv, name="wrong sign")
    yield "remark-gcanon", "iota_x nu with the wrong sign", check_butterfly_iso(bad, cases=5)

    J = construct_moment_map(translations(S, 2), CHI0)
    yield "moment", "J2 + x1", check_moment_map(J.with_J2(0, 1, J.j2(0, 1) + x1), cases=3)

    zero_tau = Form.zero(S, 2)
    B1, _ = prop41_composites(J, gdata, gcurv, zero_tau)
    P = pushout_strict(flip(butterfly_E(gdata, gcurv).with_(bracket=e_br)), curving_inclusion(gdata, gcurv))
    bad41 = pullback_lie_algebra(P, J.morphism())
    yield "prop41", "dropped iota_z iota_x B in E", check_butterfly_iso(
        ButterflyIso(B1, bad41, m=lambda p: p, m_inv=lambda p: p), cases=5)

    dx12 = Form.basis(S, (0, 1))
    Js = shift_moment_map(J, dx12)
    badJs = Js.with_J2(0, 1, Js.j2(0, 1) + S.one())
    left = compose_weak(gauge_courant(CHI0, dx12), compose_weak(rogers_embedding(CHI0), J.morphism()))
    right = compose_weak(rogers_embedding(badJs.chi), badJs.morphism())
    g = J.algebra
    yield "outer-edge", "J2' + 1", morphisms_equal(left, right, [g.basis(m) for m in range(g.dim)])


def test_criterion_8_mutations():
    from lie2gerbe.scenario.parser import SUITES
    seen, missed = [], []
    for suite, what, rep in _mutants():
        fails = rep.failures()
        if fails and all(f.counterexample for f in fails):
            seen.append(suite)
        else:
            missed.append(f"{suite} ({what})")
    uncovered = sorted(set(SUITES) - set(seen))
    ok = not missed and not uncovered
    line = emit(8, ok, f"one-term mutations detected with rendered counterexamples in {len(seen)}/{len(SUITES)} suites"
                + (f"; missed: {', '.join(missed + uncovered)}" if not ok else ""))
    assert ok, line
