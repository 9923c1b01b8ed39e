import random

import pytest

from lie2gerbe.butterfly import ButterflyIso, check_butterfly, check_butterfly_iso
from lie2gerbe.cartan import Form, Space, interior
from lie2gerbe.cartan.sampling import random_form
from lie2gerbe.comparisons import (
    courant_atiyah_iso,
    gauge_atiyah_iso,
    gauge_courant_iso,
    prequantization_iso,
)
from lie2gerbe.gerbe import (
    GElem,
    connection_shift_iso,
    random_trivializable_gerbe,
    shift_connection,
    single_chart,
    three_box_cube,
    validate_connective,
    validate_gerbe,
)

from conftest import SMALL

S = Space(3)
COVERS = {"single": single_chart(S), "three-box": three_box_cube(S)}


def _gerbe(cover, seed=31):
    return random_trivializable_gerbe(S, COVERS[cover], seed=seed, maxdeg=2)


def _tau(seed):
    return random_form(S, 2, random.Random(seed), SMALL)


def _nu(data, seed):
    rng = random.Random(seed)
    return tuple(random_form(S, 1, rng, SMALL) for _ in range(data.cover.size))


def _ok(rep):
    assert rep.ok, rep.render()


@pytest.mark.parametrize("cover", COVERS)
@pytest.mark.parametrize("name", ["prequantization", "courant-atiyah", "gauge-courant", "gauge-atiyah", "gcanon"])
def test_isos(cover, name):
    data, curving, _ = _gerbe(cover)
    if name == "prequantization":
        iso = prequantization_iso(data, curving, SMALL)
    elif name == "courant-atiyah":
        iso = courant_atiyah_iso(data, curving, SMALL)
    elif name == "gauge-courant":
        iso = gauge_courant_iso(data, curving, _tau(1), SMALL)
    elif name == "gauge-atiyah":
        iso = gauge_atiyah_iso(data, curving, _tau(2), SMALL)
    else:
        iso = connection_shift_iso(data, curving, _nu(data, 3), SMALL)
    _ok(check_butterfly(iso.source, cases=4, seed=1))
    _ok(check_butterfly(iso.target, cases=4, seed=1))
    _ok(check_butterfly_iso(iso, cases=6, seed=2))


def test_shifted_connection_is_valid():
    data, curving, _ = _gerbe("three-box")
    nu = _nu(data, 4)
    data2, curving2 = shift_connection(data, curving, nu)
    assert validate_gerbe(data2).ok
    assert validate_connective(data2, curving2) == validate_connective(data, curving)


def test_zero_shift_is_identity():
    data, curving, _ = _gerbe("three-box")
    zero = tuple(Form.zero(S, 1) for _ in range(3))
    iso = connection_shift_iso(data, curving, zero, SMALL)
    e = iso.source.sample(random.Random(0))
    assert iso.m(e) == e


def test_single_chart_shift_moves_g_only():
    data, curving, _ = _gerbe("single")
    nu = _nu(data, 5)
    data2, _ = shift_connection(data, curving, nu)
    assert data2.Lam == data.Lam
    iso = connection_shift_iso(data, curving, nu, SMALL)
    e = iso.source.sample(random.Random(1))
    assert iso.m(e).g[0] == e.g[0] + interior(e.x, nu[0])


def test_mutation_wrong_sign_in_connection_shift():
    data, curving, _ = _gerbe("three-box")
    nu = _nu(data, 6)
    good = connection_shift_iso(data, curving, nu, SMALL)
    bad = ButterflyIso(good.source, good.target,
                       m=lambda e: GElem(e.x, e.f, tuple(g - interior(e.x, n) for g, n in zip(e.g, nu))),
                       m_inv=good.m_inv, name="wrong sign")
    rep = check_butterfly_iso(bad, cases=4)
    assert not rep.ok and rep.failures()[0].counterexample


def test_mutation_gauge_courant_wrong_tau():
    data, curving, _ = _gerbe("three-box")
    iso = gauge_courant_iso(data, curving, _tau(7), SMALL)
    other = gauge_courant_iso(data, curving, _tau(8), SMALL)
    bad = ButterflyIso(iso.source, other.target, m=iso.m, m_inv=iso.m_inv)
    assert not check_butterfly_iso(bad, cases=4).get("rho' m = rho").passed
