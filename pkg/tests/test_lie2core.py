import random
from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

from lie2gerbe.cartan import Form, Space, VectorField, interior
from lie2gerbe.algebras import mk_atiyah, mk_courant
from lie2gerbe.lie2core import (
    NULL,
    AxiomReport,
    Checker,
    MembershipError,
    WeakMorphism,
    check_l2_axioms,
    check_weak_morphism,
    compose_weak,
    identity_morphism,
    jacobi_defect,
    morphisms_equal,
    strict_morphism,
)
from lie2gerbe.moment import LieVec, abelian, heisenberg, lie_algebra_as_lie2, so3

from conftest import SMALL

S = Space(3)
CHI = Form.basis(S, (0, 1, 2))


def test_null_space():
    assert NULL + NULL == NULL and (-NULL).iszero() and (NULL * 3).render() == "0"


def test_checker_keeps_first_counterexample():
    ck = Checker("toy")
    ck.zero("a", LieVec((0, 0)), x=LieVec((1, 0)))
    ck.zero("a", LieVec((1, 0)), x=LieVec((0, 1)))
    ck.zero("a", LieVec((2, 0)), x=LieVec((0, 2)))
    ck.truth("b", True)
    rep = ck.report()
    assert not rep.ok
    assert rep.get("a").cases == 3
    assert "x = e2" in rep.get("a").counterexample
    assert "residual = e1" in rep.get("a").counterexample
    assert rep.get("b").passed
    assert [e.axiom for e in rep.failures()] == ["a"]
    assert "[FAIL] a (3 cases)" in rep.render()


def test_checker_malformed_residual_is_failure():
    ck = Checker("toy")
    ck.zero("bad", object())
    assert not ck.report().ok


def test_report_extend_prefixes():
    a = Checker("a")
    a.truth("p", True)
    rep = AxiomReport("all").extend(a.report(), prefix="A: ")
    assert rep.entries[0].axiom == "A: p" and rep.ok


@pytest.mark.parametrize("g", [abelian(2), heisenberg(), so3()], ids=["ab2", "heis", "so3"])
def test_lie_algebras_are_strict_lie2(g):
    rep = check_l2_axioms(lie_algebra_as_lie2(g), cases=15, seed=1)
    assert rep.ok, rep.render()


def test_atiyah_axioms_and_jacobi_defect():
    A = mk_atiyah(S, CHI, SMALL)
    assert check_l2_axioms(A, cases=8, seed=2).ok
    D = [VectorField.coordinate(S, i) for i in range(3)]
    # the Jacobiator of coordinate fields is -chi(D1, D2, D3) = -1
    assert A.jac(*D) == S.const(-1)
    assert jacobi_defect(A, *D).iszero()


def test_membership_error():
    g = so3()
    L = lie_algebra_as_lie2(g)
    with pytest.raises(MembershipError):
        jacobi_defect(L, g.basis(0), g.basis(1), "not an element")


def test_broken_jacobiator_is_detected():
    C = mk_courant(S, CHI, SMALL)
    bad = replace(C, jac=lambda x, y, z: -C.jac(x, y, z))
    rep = check_l2_axioms(bad, cases=3, seed=3)
    assert not rep.get("(v) Jacobi up to dJ").passed
    assert rep.get("(v) Jacobi up to dJ").counterexample


def test_broken_antisymmetry_is_detected():
    g = so3()
    L = lie_algebra_as_lie2(g)
    bad = replace(L, br00=lambda x, y: g.bracket(x, y) + x)
    assert not check_l2_axioms(bad, cases=5, seed=0).get("(i) antisymmetry").passed


def _automorphism(g, L):
    # cyclic permutation of so(3) generators is a Lie automorphism
    def p0(x):
        return LieVec((x.c[2], x.c[0], x.c[1]))
    return strict_morphism(L, L, p0, lambda f: f, name="cyc")


def test_identity_and_strict_morphisms():
    g = so3()
    L = lie_algebra_as_lie2(g)
    assert check_weak_morphism(identity_morphism(L), cases=10).ok
    cyc = _automorphism(g, L)
    assert check_weak_morphism(cyc, cases=10).ok
    swap = strict_morphism(L, L, lambda x: LieVec((x.c[1], x.c[0], x.c[2])), lambda f: f, name="swap")
    assert not check_weak_morphism(swap, cases=10).get("(m2) bracket up to d phi2").passed


def test_compose_and_equality():
    g = so3()
    L = lie_algebra_as_lie2(g)
    cyc = _automorphism(g, L)
    c3 = compose_weak(cyc, compose_weak(cyc, cyc))
    basis = [g.basis(i) for i in range(3)]
    assert morphisms_equal(c3, identity_morphism(L), basis).ok
    assert not morphisms_equal(cyc, identity_morphism(L), basis).ok
    assert check_weak_morphism(c3, cases=5).ok
    other = lie_algebra_as_lie2(heisenberg())
    with pytest.raises(ValueError):
        compose_weak(identity_morphism(other), cyc)


@given(seed=st.integers(0, 10**6))
def test_composition_homotopy_formula(seed):
    A = mk_atiyah(S, CHI, SMALL)
    tau = Form.basis(S, (0, 1), S.coord(2))
    phi = WeakMorphism(A, A, lambda x: x, lambda f: f, lambda x, y: interior(y, interior(x, tau)), name="h")
    comp = compose_weak(phi, phi)
    rng = random.Random(seed)
    x, y = A.sample0(rng), A.sample0(rng)
    assert (comp.phi2(x, y) - interior(y, interior(x, tau)) * 2).iszero()


def test_explicit_tuples_are_used():
    g = abelian(2)
    L = lie_algebra_as_lie2(g)
    e = g.basis(0)
    rep = check_l2_axioms(L, tuples=[(e, e, e, e, NULL, NULL)])
    assert rep.get("(v) Jacobi up to dJ").cases == 1
