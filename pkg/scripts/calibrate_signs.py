"""Show how the two global sign constants are pinned down.

For each combination of JACOBI_SIGN and MORPHISM_SIGN, run the sign-sensitive
checks on chi = dx1∧dx2∧dx3 and print which ones pass.  Only the adopted
combination (+1, -1) passes every row.
"""
from itertools import product

from lie2gerbe import lie2core
from lie2gerbe.algebras import gauge_atiyah, mk_courant, mk_observables, psi_to_atiyah, rogers_embedding
from lie2gerbe.butterfly import check_butterfly
from lie2gerbe.cartan import Form, Space
from lie2gerbe.cartan.sampling import SamplerSettings
from lie2gerbe.gerbe import butterfly_F, gerbe_from_potential, single_chart
from lie2gerbe.lie2core import check_l2_axioms, check_weak_morphism

S = Space(3)
CHI = Form.basis(S, (0, 1, 2))
TAU = Form.basis(S, (0, 1), S.coord(2)) + Form.basis(S, (1, 2), S.coord(0) * S.coord(1))
CFG = SamplerSettings(max_degree=2, max_terms=3)


def rows():
    data, curving, _ = gerbe_from_potential(single_chart(S), Form.basis(S, (0, 1), S.coord(2)))
    yield "observables (v)", check_l2_axioms(mk_observables(S, CHI, CFG), cases=4).get("(v) Jacobi up to dJ")
    C = check_l2_axioms(mk_courant(S, CHI, CFG), cases=4)
    yield "Courant (v)", C.get("(v) Jacobi up to dJ")
    yield "Courant (vi)", C.get("(vi) J(x,y,df)")
    yield "Courant (vii)", C.get("(vii) degree-4 coherence")
    for phi in (rogers_embedding(CHI, CFG), psi_to_atiyah(CHI, CFG), gauge_atiyah(CHI, TAU, CFG)):
        yield f"{phi.name} (m4)", check_weak_morphism(phi, cases=4, seed=1).get("(m4) Jacobiator coherence")
    yield "butterfly F (b5)", check_butterfly(butterfly_F(data, curving, CFG), cases=4, seed=2).get("(b5) Jacobi defect")


def main():
    saved = lie2core.JACOBI_SIGN, lie2core.MORPHISM_SIGN
    try:
        for js, ms in product((1, -1), (-1, 1)):
            lie2core.JACOBI_SIGN, lie2core.MORPHISM_SIGN = js, ms
            results = list(rows())
            mark = "  <- adopted" if (js, ms) == saved else ""
            print(f"JACOBI_SIGN={js:+d} MORPHISM_SIGN={ms:+d}: "
                  f"{sum(r.passed for _, r in results)}/{len(results)} pass{mark}")
            for name, r in results:
                print(f"    {'pass' if r.passed else 'FAIL'}  {name}")
    finally:
        lie2core.JACOBI_SIGN, lie2core.MORPHISM_SIGN = saved


if __name__ == "__main__":
    main()
