"""Seeded random generators for scalars, forms and vector fields.

Defaults follow the sampler contract used throughout the suites: coefficient
degree <= 3, at most 4 terms per component, rational coefficients with
numerator and denominator bounded by 5.  On the torus at most 2 Fourier
terms per component are drawn by default.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .forms import Form, VectorField, exterior_derivative, interior
from .scalar import COS, SIN, Q, Scalar, Space


@dataclass(frozen=True)
class SamplerSettings:
    max_degree: int = 3
    max_terms: int = 4
    max_num: int = 5
    max_freq: int = 1
    # Fourier products multiply term counts, so torus samples stay sparser
    max_trig_terms: int = 2


DEFAULT = SamplerSettings()


def random_rational(rng: random.Random, cfg: SamplerSettings = DEFAULT):
    while True:
        p = rng.randint(-cfg.max_num, cfg.max_num)
        if p:
            return Q(p, rng.randint(1, cfg.max_num))


def random_scalar(space: Space, rng: random.Random, cfg: SamplerSettings = DEFAULT,
                  nterms: int | None = None) -> Scalar:
    if nterms is None:
        cap = cfg.max_terms if space.is_poly else min(cfg.max_terms, cfg.max_trig_terms)
        nterms = rng.randint(1, cap)
    items = []
    for _ in range(nterms):
        c = random_rational(rng, cfg)
        if space.is_poly:
            deg = rng.randint(0, cfg.max_degree)
            e = [0] * space.n
            for _ in range(deg):
                e[rng.randrange(space.n)] += 1
            items.append(((tuple(e), 0, (0,) * space.n, COS), c))
        else:
            f = tuple(rng.randint(-cfg.max_freq, cfg.max_freq) for _ in range(space.n))
            items.append((((0,) * space.n, 0, f, rng.choice((COS, SIN))), c))
    return Scalar.from_terms(space, items)


def random_vector_field(space: Space, rng: random.Random, cfg: SamplerSettings = DEFAULT) -> VectorField:
    comps = []
    for _ in range(space.n):
        comps.append(random_scalar(space, rng, cfg) if rng.random() < 0.75 else space.zero())
    return VectorField(space, comps)


def random_form(space: Space, k: int, rng: random.Random, cfg: SamplerSettings = DEFAULT):
    if k == 0:
        return random_scalar(space, rng, cfg)
    coeffs = {}
    for I in combinations(range(space.n), k):
        if rng.random() < 0.7:
            coeffs[I] = random_scalar(space, rng, cfg)
    return Form(space, k, coeffs)


def random_closed_form(space: Space, k: int, rng: random.Random, cfg: SamplerSettings = DEFAULT) -> Form:
    """d of a random (k-1)-form: closed, and exact with a known primitive."""
    return exterior_derivative(random_form(space, k - 1, rng, cfg))


# -- exact linear algebra -------------------------------------------------

def _to_qq(c):
    return QQ(int(c.numerator), int(c.denominator))


def rational_nullspace(columns: list[dict]) -> list[list]:
    """Nullspace of the matrix whose j-th column is the sparse vector ``columns[j]``.

    Returns basis vectors as lists of ``Q`` values.
    """
    keys = sorted({k for col in columns for k in col}, key=repr)
    if not keys:
        return [[Q(1) if i == j else Q(0) for i in range(len(columns))] for j in range(len(columns))]
    row_of = {k: r for r, k in enumerate(keys)}
    rows = [[QQ(0)] * len(columns) for _ in keys]
    for j, col in enumerate(columns):
        for k, v in col.items():
            rows[row_of[k]][j] = _to_qq(v)
    M = DomainMatrix(rows, (len(keys), len(columns)), QQ)
    basis = M.nullspace().to_Matrix()
    out = []
    for r in range(basis.rows):
        out.append([Q(int(x.p), int(x.q)) for x in basis.row(r)])
    return out


def _scalar_basis(space: Space, max_degree: int, max_freq: int) -> list[Scalar]:
    if space.is_poly:
        out = []
        for e in product(range(max_degree + 1), repeat=space.n):
            if sum(e) <= max_degree:
                out.append(space.monomial(e))
        return out
    seen = set()
    out = [space.one()]
    for f in product(range(-max_freq, max_freq + 1), repeat=space.n):
        if not any(f):
            continue
        first = next(x for x in f if x)
        if first < 0 or f in seen:
            continue
        seen.add(f)
        out.append(space.trig(COS, f))
        out.append(space.trig(SIN, f))
    return out


def _flatten(w) -> dict:
    if isinstance(w, Scalar):
        return {((), k): v for k, v in w.terms.items()}
    return {(I, k): v for I, c in w.coeffs.items() for k, v in c.terms.items()}


@lru_cache(maxsize=64)
def exact_contraction_fields(chi: Form, max_degree: int = 2, max_freq: int = 1) -> tuple:
    """Basis of vector fields x (within a finite candidate family) with iota_x chi exact.

    On R^n exactness is closedness; on T^n it is closedness plus vanishing
    constant Fourier modes.  The conditions are linear in x, solved exactly.
    """
    space = chi.space
    cands = []
    for i in range(space.n):
        for s in _scalar_basis(space, max_degree, max_freq):
            cands.append(VectorField.coordinate(space, i, s))
    columns = []
    for x in cands:
        c = interior(x, chi)
        col = {("d",) + k: v for k, v in _flatten(exterior_derivative(c)).items()}
        if not space.is_poly:
            modes = c.constant_mode() if isinstance(c, Scalar) else Form(
                space, c.k, {I: s.constant_mode() for I, s in c.coeffs.items()})
            col.update({("mean",) + k: v for k, v in _flatten(modes).items()})
        columns.append(col)
    basis = []
    for vec in rational_nullspace(columns):
        x = VectorField.zero(space)
        for q, cand in zip(vec, cands):
            if q != 0:
                x = x + cand * q
        basis.append(x)
    return tuple(basis)
