import random
from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

import oracle
from lie2gerbe.algebras import (
    HALF,
    NotClosed,
    ObservablePair,
    check_pairing_preserved,
    courant_bracket,
    gauge_atiyah,
    gauge_courant,
    is_observable,
    mk_atiyah,
    mk_courant,
    mk_observables,
    observable,
    psi_to_atiyah,
    rogers_embedding,
)
from lie2gerbe.cartan import Form, GenSection, Q, Space, VectorField, d, interior
from lie2gerbe.cartan.sampling import random_form
from lie2gerbe.lie2core import (
    MembershipError,
    check_l2_axioms,
    check_weak_morphism,
    compose_weak,
    morphisms_equal,
    strict_morphism,
)

from conftest import SMALL, random_exact_chi, torus_chi

S = Space(3)
CHI = Form.basis(S, (0, 1, 2))
x1, x2, x3 = (S.coord(i) for i in range(3))
D = [VectorField.coordinate(S, i) for i in range(3)]
Z1 = Form.zero(S, 1)
TAU = Form.basis(S, (0, 1), x3)


def dxf(i, c=None):
    return Form.basis(S, (i,), S.one() if c is None else c)


def gs(u=None, a=None):
    return GenSection(VectorField.zero(S) if u is None else u, Z1 if a is None else a)


# -- frozen examples ---------------------------------------------------------------------

def test_observables_examples():
    e1 = observable(CHI, D[0], dxf(2, -x2))
    e2 = observable(CHI, D[1], dxf(0, -x3))
    L = mk_observables(S, CHI)
    assert L.br00(e1, e2) == ObservablePair(VectorField.zero(S), dxf(2))
    e3 = observable(CHI, D[2], dxf(1, -x1))
    assert L.jac(e1, e2, e3) == S.const(-1)
    with pytest.raises(MembershipError):
        observable(CHI, D[0], Z1)


def test_courant_examples():
    C = mk_courant(S, CHI)
    assert C.br00(gs(D[0]), gs(a=dxf(0, x2))) == gs(a=dxf(1, S.const(Q(-1, 2))))
    assert C.br00(gs(D[0]), gs(D[1])) == gs(a=-dxf(2))
    # sanity anchor: J((d1,0),(d2,0),(d3,0)) = 1/2
    assert C.jac(gs(D[0]), gs(D[1]), gs(D[2])) == S.const(Q(1, 2))
    assert C.br01(gs(D[0]), x1 * x2) == x2 * HALF


def test_atiyah_examples():
    A = mk_atiyah(S, CHI)
    # sanity anchor: J(d1,d2,d3) = -1
    assert A.jac(*D) == S.const(-1)
    assert A.br01(D[0], x1 * x2) == x2
    assert A.d(x1 * x2).iszero()


def test_anchors_match_oracle():
    o = oracle.form(CHI)
    oD = [oracle.field(v) for v in D]
    zero = {}
    assert oracle.full_contraction(o, oD) == 1
    jac = oracle.courant_jacobiator(o, (oD[0], zero), (oD[1], zero), (oD[2], zero), 3)
    assert jac == Q(1, 2)


def test_morphism_examples():
    e1 = observable(CHI, D[0], dxf(2, -x2))
    e2 = observable(CHI, D[1], dxf(0, -x3))
    R = rogers_embedding(CHI)
    assert R.phi2(e1, e2) == x3 * HALF
    assert R.phi2(e1, e1).iszero()
    assert R.phi0(ObservablePair(VectorField.zero(S), d(x1))) == gs(a=d(x1))
    psi = psi_to_atiyah(CHI)
    assert psi.phi2(gs(D[0], dxf(1, x3)), gs(D[1])) == x3 * HALF
    T = gauge_courant(CHI, TAU)
    assert T.phi0(gs(D[0])) == gs(D[0], dxf(1, x3))
    assert T.phi0(gs(a=dxf(0))) == gs(a=dxf(0))
    ida = gauge_atiyah(CHI, TAU)
    assert ida.phi2(D[0], D[1]) == x3
    assert ida.phi2(D[0], D[0]).iszero()


def test_not_closed_rejected():
    with pytest.raises(NotClosed):
        S4 = Space(4)
        mk_courant(S4, Form.basis(S4, (0, 1, 2), S4.coord(3)))
    with pytest.raises(ValueError):
        mk_atiyah(S, TAU)


def test_constructors_are_memoised():
    assert mk_courant(S, CHI) is mk_courant(S, CHI)


# -- axiom suites ----------------------------------------------------------------------

def _chis():
    return [CHI, random_exact_chi(S, 11, degree=2), torus_chi(Space(3, "trig"))]


@pytest.mark.parametrize("which", [0, 1, 2], ids=["chi0", "exact", "torus"])
@pytest.mark.parametrize("mk", [mk_observables, mk_courant, mk_atiyah], ids=["L", "C", "A"])
def test_l2_axioms(mk, which):
    chi = _chis()[which]
    rep = check_l2_axioms(mk(chi.space, chi, SMALL), cases=6, seed=which)
    assert rep.ok, rep.render()


def test_observable_sampler_membership():
    for chi in _chis():
        L = mk_observables(chi.space, chi, SMALL)
        rng = random.Random(0)
        for _ in range(5):
            assert is_observable(chi, L.sample0(rng))


@pytest.mark.parametrize("chi_seed", [None, 5])
def test_weak_morphisms(chi_seed):
    chi = CHI if chi_seed is None else random_exact_chi(S, chi_seed, degree=2)
    tau = random_form(S, 2, random.Random(3), SMALL)
    for phi in (rogers_embedding(chi, SMALL), psi_to_atiyah(chi, SMALL),
                gauge_courant(chi, tau, SMALL), gauge_atiyah(chi, tau, SMALL)):
        rep = check_weak_morphism(phi, cases=6, seed=1)
        assert rep.ok, rep.render()
    assert check_pairing_preserved(gauge_courant(chi, tau, SMALL), cases=20).ok


@given(seed=st.integers(0, 10**6))
def test_bracket_closure_on_observables(seed):
    L = mk_observables(S, CHI, SMALL)
    rng = random.Random(seed)
    a, b = L.sample0(rng), L.sample0(rng)
    br = L.br00(a, b)
    assert (interior(br.x, CHI) + d(interior(b.x, interior(a.x, CHI)))).iszero()


@given(seed=st.integers(0, 10**6))
def test_courant_bracket_matches_oracle(seed):
    rng = random.Random(seed)
    chi = random_exact_chi(S, seed, degree=2)
    C = mk_courant(S, chi, SMALL)
    e1, e2 = C.sample0(rng), C.sample0(rng)
    u, a = oracle.courant_bracket(oracle.form(chi), oracle.section(e1), oracle.section(e2), 3)
    got = courant_bracket(chi, e1, e2)
    assert oracle.same_field(u, got.u) and oracle.same_form(a, got.alpha)


def test_gauge_composition_law():
    rng = random.Random(4)
    t1, t2 = random_form(S, 2, rng, SMALL), random_form(S, 2, rng, SMALL)
    T1 = gauge_courant(CHI, t1)
    T2 = gauge_courant(CHI + d(t1), t2)
    T12 = gauge_courant(CHI, t1 + t2)
    C = mk_courant(S, CHI, SMALL)
    for _ in range(5):
        e = C.sample0(rng)
        assert (T2.phi0(T1.phi0(e)) - T12.phi0(e)).iszero()


def test_composites():
    L = mk_observables(S, CHI, SMALL)
    R = rogers_embedding(CHI, SMALL)
    TR = compose_weak(gauge_courant(CHI, TAU, SMALL), R)
    rng = random.Random(2)
    es = [L.sample0(rng) for _ in range(3)]
    for a in es:
        for b in es:
            assert (TR.phi2(a, b) - R.phi2(a, b)).iszero()
    assert check_weak_morphism(TR, cases=4).ok
    # associativity on strict morphisms
    C = mk_courant(S, CHI, SMALL)
    ident = strict_morphism(C, C, lambda e: e, lambda f: f, name="id")
    T0 = gauge_courant(CHI, Form.zero(S, 2), SMALL)
    lhs = compose_weak(compose_weak(ident, T0), ident)
    rhs = compose_weak(ident, compose_weak(T0, ident))
    assert morphisms_equal(lhs, rhs, [C.sample0(rng) for _ in range(3)], [x1]).ok


# -- mutations ---------------------------------------------------------------------------

def test_mutation_jacobiator_plus_one():
    C = mk_courant(S, CHI, SMALL)
    bad = replace(C, jac=lambda a, b, c: C.jac(a, b, c) + S.one())
    rep = check_l2_axioms(bad, cases=3)
    assert not rep.ok
    assert all(f.counterexample for f in rep.failures())


def test_mutation_dropped_half_in_courant_bracket():
    def br(a, b):
        u, al, v, be = a.u, a.alpha, b.u, b.alpha
        from lie2gerbe.cartan import lie_derivative, vf_bracket
        form = (lie_derivative(u, be) - lie_derivative(v, al) - d(interior(u, be) - interior(v, al))
                - interior(v, interior(u, CHI)))
        return GenSection(vf_bracket(u, v), form)
    C = mk_courant(S, CHI, SMALL)
    rep = check_l2_axioms(replace(C, br00=br), cases=3)
    assert not rep.ok
    assert "residual" in rep.failures()[0].counterexample


def test_mutation_perturbed_rogers_homotopy():
    R = rogers_embedding(CHI, SMALL)
    bad = replace(R, phi2=lambda a, b: R.phi2(a, b) * 2)
    L = mk_observables(S, CHI, SMALL)
    rng = random.Random(0)
    es = [L.sample0(rng) for _ in range(3)]
    assert not morphisms_equal(R, bad, es).ok
    assert not check_weak_morphism(bad, cases=4).ok
    assert not check_weak_morphism(replace(R, phi2=lambda a, b: R.phi2(a, b) + S.one()), cases=4).ok
