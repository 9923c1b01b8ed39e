"""Suite runner and report rendering."""
from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field, replace

from ..algebras import (
    ObservablePair,
    check_pairing_preserved,
    gauge_atiyah,
    gauge_courant,
    mk_atiyah,
    mk_courant,
    mk_observables,
    psi_to_atiyah,
    rogers_embedding,
)
from ..butterfly import check_butterfly, check_butterfly_iso, check_exactness
from ..cartan import Form, is_closed
from ..cartan.sampling import SamplerSettings, random_form
from ..comparisons import courant_atiyah_iso, gauge_atiyah_iso, gauge_courant_iso, prequantization_iso
from ..gerbe import (
    algebroid_differential,
    butterfly_E,
    butterfly_F,
    butterfly_G,
    check_lemma_connex_pres,
    connection_shift_iso,
    random_trivializable_gerbe,
    sample_section,
    shift_curving,
    validate_connective,
    validate_gerbe,
)
from ..lie2core import AxiomReport, Checker, check_l2_axioms, check_weak_morphism
from ..moment import (
    MomentMap,
    NotInvariant,
    check_invariant,
    check_moment_map,
    check_prop41,
    construct_moment_map,
    outer_edge_check,
    shift_moment_map,
)
from .parser import RunOptions, ScenarioDoc, ScenarioError, SUITES

# one line per suite, also used as CLI help
SUITE_HELP = {
    "l2-axioms": "2-term L-infinity axioms for observables, Courant and Atiyah algebras of chi",
    "morphisms": "weak morphisms R, psi, T_tau (with pairing), id_tau",
    "gerbe-valid": "Čech cocycle, connection and curving equations; d a independent of the curving",
    "lemma-connex": "L_abar gamma = delta(iota B - d v_a) on overlaps",
    "butterfly-F": "butterfly X(G,gamma) ⇢ L(C_chi), with exactness witnesses",
    "butterfly-G": "butterfly X(P) ⇢ A(M,chi), with exactness witnesses",
    "butterfly-E": "prequantization butterfly X(G;gamma,B) ⇢ L(M,chi), with exactness witnesses",
    "prop32": "F restricted to X(G;gamma,B) is 2-isomorphic to R∘E",
    "prop35": "G∘forget is 2-isomorphic to psi∘F",
    "prop37": "T_tau∘F is 2-isomorphic to F for the curving B + tau",
    "prop39": "G for B + tau is 2-isomorphic to id_tau∘G",
    "remark-gcanon": "G does not depend on the connection: gamma -> gamma + delta nu",
    "moment": "homotopy moment map g -> L(M,chi) and its tau-shift",
    "prop41": "fibre products of g with E for B and B + tau agree",
    "outer-edge": "T_tau∘R∘J = R'∘J' on basis elements and pairs",
}


class ConfigurationError(ScenarioError):
    """The document lacks a block that a selected suite needs."""


@dataclass
class SuiteResult:
    suite: str
    reports: list
    seconds: float = 0.0
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None and all(r.ok for r in self.reports)


@dataclass
class Report:
    seed: int
    cases: int
    suites: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.suites)

    @property
    def summary(self) -> str:
        return f"{sum(s.ok for s in self.suites)}/{len(self.suites)} suites passed"


# -- context: objects shared by several suites --------------------------------------

class _Context:
    def __init__(self, doc: ScenarioDoc, opts: RunOptions):
        self.doc, self.opts = doc, opts
        self.cfg = SamplerSettings(max_degree=opts.max_degree)
        self._cache = {}

    def _memo(self, key, make):
        if key not in self._cache:
            self._cache[key] = make()
        return self._cache[key]

    def need(self, cond, what, suite):
        if not cond:
            raise ConfigurationError(f"suite {suite!r} needs {what}")

    @property
    def space(self):
        return self.doc.space

    def gerbe(self, suite):
        spec = self.doc.gerbe
        self.need(spec is not None, "a cover and gerbe block", suite)

        def make():
            if spec.data is not None:
                return spec.data, spec.curving, None
            B0 = self.doc.defs[spec.potential] if spec.potential else None
            return random_trivializable_gerbe(self.space, self.doc.cover, seed=spec.seed,
                                              maxdeg=spec.degree, B0=B0)

        return self._memo("gerbe", make)

    def chi(self, suite) -> Form:
        def make():
            defined = self.doc.defs.get("chi")
            if defined is not None:
                if not (isinstance(defined, Form) and defined.k == 3 and is_closed(defined)):
                    raise ConfigurationError("chi must be a closed 3-form")
            if self.doc.gerbe is not None:
                data, curving, _ = self.gerbe(suite)
                chi = validate_connective(data, curving)
                if defined is not None and not (chi - defined).iszero():
                    raise ConfigurationError("chi differs from the 3-curvature of the gerbe")
                return chi
            return defined

        chi = self._memo("chi", make)
        self.need(chi is not None, "a 'def chi = ...' or a gerbe block", suite)
        return chi

    def tau(self, suite, required=False) -> Form | None:
        t = self.doc.defs.get("tau")
        if t is not None:
            if not (isinstance(t, Form) and t.k == 2):
                raise ConfigurationError("tau must be a 2-form")
            return t
        self.need(not required, "a 'def tau = ...' invariant 2-form", suite)
        return self._memo("tau", lambda: random_form(self.space, 2, random.Random(self.opts.seed), self.cfg))

    def moment(self, suite) -> MomentMap:
        doc = self.doc
        self.need(doc.liealg is not None and doc.action is not None and doc.moment is not None,
                  "liealg, action and moment blocks", suite)

        def make():
            chi = self.chi(suite)
            spec = doc.moment
            J = construct_moment_map(doc.action, chi) if spec.auto else MomentMap(doc.action, chi, (), ())
            J0 = list(J.J0) or [None] * doc.liealg.dim
            for m, x, beta in spec.J0:
                J0[m] = ObservablePair(x, beta)
            J = MomentMap(doc.action, chi, tuple(J0), J.J2)
            for m, n, s in spec.J2:
                J = J.with_J2(m, n, s)
            return J

        return self._memo("moment", make)


# -- suites ---------------------------------------------------------------------------

def _l2(ctx, suite):
    chi = ctx.chi(suite)
    o = ctx.opts
    return [check_l2_axioms(mk(ctx.space, chi, ctx.cfg), cases=o.cases, seed=o.seed)
            for mk in (mk_observables, mk_courant, mk_atiyah)]


def _morphisms(ctx, suite):
    chi, tau, o = ctx.chi(suite), ctx.tau(suite), ctx.opts
    T = gauge_courant(chi, tau, ctx.cfg)
    reps = [check_weak_morphism(phi, cases=o.cases, seed=o.seed)
            for phi in (rogers_embedding(chi, ctx.cfg), psi_to_atiyah(chi, ctx.cfg), T,
                        gauge_atiyah(chi, tau, ctx.cfg))]
    return reps + [check_pairing_preserved(T, cases=o.cases, seed=o.seed)]


def _gerbe_valid(ctx, suite):
    data, curving, witness = ctx.gerbe(suite)
    reps = [validate_gerbe(data)]
    ck = Checker("connective structure")
    try:
        validate_connective(data, curving)
        ck.truth("curving equations", True)
    except ValueError as exc:
        ck.truth("curving equations", False, detail=str(exc))
    if witness is not None:
        try:
            witness.require(data, curving)
            ck.truth("trivialization witness", True)
        except ValueError as exc:
            ck.truth("trivialization witness", False, detail=str(exc))
    rng = random.Random(ctx.opts.seed)
    shifted = shift_curving(curving, ctx.tau(suite))
    for _ in range(ctx.opts.cases):
        a = sample_section(data, rng)
        ck.zero("d a independent of the curving",
                algebroid_differential(data, curving, a) - algebroid_differential(data, shifted, a), a=a)
    return reps + [ck.report()]


def _lemma(ctx, suite):
    data, curving, _ = ctx.gerbe(suite)
    rng = random.Random(ctx.opts.seed)
    rep = AxiomReport("L_abar gamma = delta(iota B - d v_a)")
    for _ in range(ctx.opts.cases):
        r = check_lemma_connex_pres(data, curving, sample_section(data, rng))
        for e in r.entries:
            _merge(rep, e)
    return [rep]


def _merge(rep: AxiomReport, e):
    for i, old in enumerate(rep.entries):
        if old.axiom == e.axiom:
            rep.entries[i] = replace(old, passed=old.passed and e.passed, cases=old.cases + e.cases,
                                     counterexample=old.counterexample or e.counterexample)
            return
    rep.entries.append(e)


def _butterfly(make):
    def run(ctx, suite):
        data, curving, _ = ctx.gerbe(suite)
        B = make(data, curving, ctx.cfg)
        o = ctx.opts
        return [check_butterfly(B, cases=o.cases, seed=o.seed), check_exactness(B, cases=o.cases, seed=o.seed)]
    return run


def _iso(make, with_tau=False):
    def run(ctx, suite):
        data, curving, _ = ctx.gerbe(suite)
        args = (data, curving, ctx.tau(suite)) if with_tau else (data, curving)
        return [check_butterfly_iso(make(*args, cfg=ctx.cfg), cases=ctx.opts.cases, seed=ctx.opts.seed)]
    return run


def _gcanon(ctx, suite):
    data, curving, _ = ctx.gerbe(suite)
    rng = random.Random(ctx.opts.seed)
    nu = tuple(random_form(ctx.space, 1, rng, ctx.cfg) for _ in range(data.cover.size))
    iso = connection_shift_iso(data, curving, nu, ctx.cfg)
    return [check_butterfly_iso(iso, cases=ctx.opts.cases, seed=ctx.opts.seed)]


def _invariant_tau(ctx, suite, J, required):
    tau = ctx.tau(suite, required=required) if required or "tau" in ctx.doc.defs else None
    if tau is not None:
        try:
            check_invariant(J.action, tau)
        except NotInvariant as exc:
            raise ConfigurationError(f"suite {suite!r}: {exc}") from None
    return tau


def _moment(ctx, suite):
    J = ctx.moment(suite)
    o = ctx.opts
    reps = [check_moment_map(J, cases=o.cases, seed=o.seed)]
    tau = _invariant_tau(ctx, suite, J, required=False)
    if tau is not None:
        r = check_moment_map(shift_moment_map(J, tau), cases=o.cases, seed=o.seed)
        r.subject = "shifted " + r.subject
        reps.append(r)
    return reps


def _prop41(ctx, suite):
    data, curving, _ = ctx.gerbe(suite)
    J = ctx.moment(suite)
    tau = _invariant_tau(ctx, suite, J, required=True)
    return [check_prop41(J, data, curving, tau, cases=ctx.opts.cases, seed=ctx.opts.seed)]


def _outer(ctx, suite):
    J = ctx.moment(suite)
    return [outer_edge_check(J, _invariant_tau(ctx, suite, J, required=True))]


_RUNNERS = {
    "l2-axioms": _l2,
    "morphisms": _morphisms,
    "gerbe-valid": _gerbe_valid,
    "lemma-connex": _lemma,
    "butterfly-F": _butterfly(butterfly_F),
    "butterfly-G": _butterfly(butterfly_G),
    "butterfly-E": _butterfly(butterfly_E),
    "prop32": _iso(prequantization_iso),
    "prop35": _iso(courant_atiyah_iso),
    "prop37": _iso(gauge_courant_iso, with_tau=True),
    "prop39": _iso(gauge_atiyah_iso, with_tau=True),
    "remark-gcanon": _gcanon,
    "moment": _moment,
    "prop41": _prop41,
    "outer-edge": _outer,
}
assert set(_RUNNERS) == set(SUITES) == set(SUITE_HELP)


def run_suites(doc: ScenarioDoc, options: RunOptions | None = None, suites=None) -> Report:
    """Run the selected suites; configuration problems raise before any suite runs."""
    opts = options or doc.options
    names = tuple(suites) if suites else (doc.suites or SUITES)
    for n in names:
        if n not in _RUNNERS:
            raise ConfigurationError(f"unknown suite {n!r}")
    ctx = _Context(doc, opts)
    _preflight(ctx, names)
    report = Report(seed=opts.seed, cases=opts.cases)
    for name in names:
        t0 = time.perf_counter()
        try:
            reps = _RUNNERS[name](ctx, name)
            res = SuiteResult(name, reps)
        except ConfigurationError:
            raise
        except Exception as exc:  # a crash inside a check is reported, not swallowed
            res = SuiteResult(name, [], error=f"{type(exc).__name__}: {exc}")
        res.seconds = time.perf_counter() - t0
        report.suites.append(res)
    return report


def run_suite(doc: ScenarioDoc, options: RunOptions | None = None) -> Report:
    return run_suites(doc, options)


def _preflight(ctx, names):
    doc = ctx.doc
    gerbe_suites = {"gerbe-valid", "lemma-connex", "butterfly-F", "butterfly-G", "butterfly-E",
                    "prop32", "prop35", "prop37", "prop39", "remark-gcanon", "prop41"}
    for n in names:
        if n in gerbe_suites:
            ctx.need(doc.gerbe is not None, "a cover and gerbe block", n)
        if n in ("moment", "prop41", "outer-edge"):
            ctx.need(doc.liealg is not None and doc.action is not None and doc.moment is not None,
                     "liealg, action and moment blocks", n)
        if n in ("prop41", "outer-edge"):
            ctx.need("tau" in doc.defs, "a 'def tau = ...' invariant 2-form", n)
        if n in ("l2-axioms", "morphisms", "moment", "outer-edge"):
            ctx.need("chi" in doc.defs or doc.gerbe is not None, "a 'def chi = ...' or a gerbe block", n)


# -- rendering ------------------------------------------------------------------------

def _rows(report: Report):
    for s in report.suites:
        if s.error:
            yield s, None, {"suite": s.suite, "axiom": "(suite)", "status": "error",
                            "counterexample": s.error, "cases": 0, "seed": report.seed}
        for r in s.reports:
            for e in r.entries:
                row = {"suite": s.suite, "axiom": f"{r.subject}: {e.axiom}",
                       "status": "pass" if e.passed else "fail", "cases": e.cases, "seed": report.seed}
                if e.counterexample:
                    row["counterexample"] = e.counterexample
                if e.note:
                    row["note"] = e.note
                yield s, r, row


def render_report(report: Report, fmt: str = "text", timing: bool = True) -> str:
    if fmt == "json":
        doc = {
            "seed": report.seed,
            "cases": report.cases,
            "results": [row for _, _, row in _rows(report)],
            "suites": [{"suite": s.suite, "status": "pass" if s.ok else "fail",
                        **({"seconds": round(s.seconds, 3)} if timing else {})} for s in report.suites],
            "summary": {"passed": sum(s.ok for s in report.suites), "total": len(report.suites)},
        }
        return json.dumps(doc, indent=2, ensure_ascii=False)
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    lines = [f"seed {report.seed}, {report.cases} cases per check"]
    for s in report.suites:
        t = f" ({s.seconds:.2f}s)" if timing else ""
        lines.append(f"[{'PASS' if s.ok else 'FAIL'}] {s.suite}{t}")
        if s.error:
            lines.append(f"    error: {s.error}")
        for r in s.reports:
            for e in r.entries:
                lines.append(f"    [{'ok' if e.passed else 'FAIL'}] {r.subject}: {e.axiom} ({e.cases})")
                if e.counterexample:
                    lines.append("        " + e.counterexample.replace("\n", "\n        "))
    lines.append(report.summary)
    return "\n".join(lines)
