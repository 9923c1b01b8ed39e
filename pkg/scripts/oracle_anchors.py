"""Recompute the two anchor values with plain sympy and compare with the library.

J_A(d1,d2,d3) = -chi(d1,d2,d3) and J_C((d1,0),(d2,0),(d3,0)) = 1/2 for chi = dx1∧dx2∧dx3.
The sympy side evaluates the twisted Courant bracket from its coordinate formula.
"""
import sympy as sp

from lie2gerbe.algebras import mk_atiyah, mk_courant
from lie2gerbe.cartan import Form, GenSection, Space, VectorField

X = sp.symbols("x1:4")
HALF = sp.Rational(1, 2)


def chi(u, v, w):
    return sp.Matrix([u, v, w]).det()


def bracket(e1, e2):
    """Twisted Courant bracket of (u, a), (v, b) with constant u, v and a, b as coefficient lists."""
    (u, a), (v, b) = e1, e2
    grad = lambda f: [sp.diff(f, xi) for xi in X]
    lie = lambda w, c: [sum(w[j] * sp.diff(c[i], X[j]) + c[j] * sp.diff(w[j], X[i]) for j in range(3))
                        for i in range(3)]
    t = grad(sum(ui * bi for ui, bi in zip(u, b)) - sum(vi * ai for vi, ai in zip(v, a)))
    e = [[1 if i == j else 0 for i in range(3)] for j in range(3)]
    form = [p - q - HALF * r - chi(u, v, e[i]) for i, (p, q, r) in enumerate(zip(lie(u, b), lie(v, a), t))]
    return [0, 0, 0], form


def pairing(e1, e2):
    (u, a), (v, b) = e1, e2
    return sum(ui * bi + vi * ai for ui, ai, vi, bi in zip(u, a, v, b))


def main():
    z = [0, 0, 0]
    es = [([1 if i == j else 0 for i in range(3)], z) for j in range(3)]
    cyc = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
    jC = sp.nsimplify(-sp.Rational(1, 6) * sum(pairing(bracket(es[a], es[b]), es[c]) for a, b, c in cyc))
    jA = -chi(*(e[0] for e in es))
    S = Space(3)
    vol = Form.basis(S, (0, 1, 2))
    D = [VectorField.coordinate(S, i) for i in range(3)]
    lib_A = mk_atiyah(S, vol).jac(*D)
    lib_C = mk_courant(S, vol).jac(*(GenSection(v, Form.zero(S, 1)) for v in D))
    print(f"Atiyah  J(d1,d2,d3):         sympy {jA}, library {lib_A.render()}")
    print(f"Courant J((d1,0),(d2,0),(d3,0)): sympy {jC}, library {lib_C.render()}")
    ok = lib_A.render() == str(jA) and lib_C.render() == str(jC)
    print("agree" if ok else "DISAGREE")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
