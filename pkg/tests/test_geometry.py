import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projcocycle.geometry import (
    IDENTITY,
    TWO_PI,
    MobiusMap,
    NumericalError,
    Su11Matrix,
    canon,
    circ_dist,
    disk_distance_to_origin,
    distance_from_gap,
    from_su11,
    mobius_apply,
    mobius_compose,
    mobius_distance,
    mobius_invert,
    mobius_jet,
    to_su11,
)

angles = st.floats(-20, 20, allow_nan=False)


@st.composite
def mobius_maps(draw, rmax=0.95):
    r = draw(st.floats(0, rmax))
    return MobiusMap(draw(angles), cmath.rect(r, draw(angles)))


def test_canon_range():
    for x in [0.0, -1e-300, TWO_PI, -TWO_PI, 7.5, -0.0, 1e6]:
        y = canon(x)
        assert 0.0 <= y < TWO_PI
        assert circ_dist(x, y) < 1e-9


def test_rejects_sigma_on_circle():
    with pytest.raises(ValueError):
        MobiusMap(0.0, 1.0)
    with pytest.raises(ValueError):
        MobiusMap(0.0, cmath.rect(1.0, 0.3))
    with pytest.raises(ValueError):
        MobiusMap(float("nan"), 0j)


def test_apply_examples():
    assert mobius_apply(MobiusMap(0.7, 0j), 1.0) == pytest.approx(1.7)
    assert mobius_apply(IDENTITY, 1.234) == 1.234
    assert mobius_apply(MobiusMap(0.0, 1 / 3), 0.0) == pytest.approx(0.0, abs=1e-15)


def test_jet_examples():
    j = mobius_jet(MobiusMap(0.4, 0j), 2.0)
    assert j == pytest.approx((2.4, 1.0, 0.0))
    j = mobius_jet(MobiusMap(0.0, 1 / 3), 0.0)
    assert (j.value, j.d1, j.d2) == pytest.approx((0.0, 2.0, 0.0), abs=1e-15)
    j = mobius_jet(MobiusMap(math.pi / 2, (1 + 1j) / 2), 0.0)
    assert circ_dist(j.value, 0.0) < 1e-15
    assert (j.d1, j.d2) == pytest.approx((1.0, 2.0), abs=1e-14)


def test_apply_matches_complex_arithmetic():
    rng = np.random.default_rng(0)
    for _ in range(200):
        m = MobiusMap(rng.uniform(0, TWO_PI), cmath.rect(rng.uniform(0, 0.99), rng.uniform(0, TWO_PI)))
        th = rng.uniform(-10, 10)
        z = cmath.exp(1j * th)
        w = cmath.exp(1j * m.kappa) * (z - m.sigma) / (1 - m.sigma.conjugate() * z)
        assert circ_dist(mobius_apply(m, th), cmath.phase(w)) < 1e-12


def test_jet_matches_finite_differences():
    rng = np.random.default_rng(1)
    h = 1e-4
    for _ in range(100):
        m = MobiusMap(rng.uniform(0, TWO_PI), cmath.rect(rng.uniform(0, 0.8), rng.uniform(0, TWO_PI)))
        th = rng.uniform(0, TWO_PI)
        j = mobius_jet(m, th)
        jp, jm = mobius_jet(m, th + h), mobius_jet(m, th - h)
        d1 = math.remainder(jp.value - jm.value, TWO_PI) / (2 * h)
        assert d1 == pytest.approx(j.d1, rel=1e-6)
        assert (jp.d1 - jm.d1) / (2 * h) == pytest.approx(j.d2, rel=1e-5, abs=1e-6)


def test_compose_examples():
    a, b = MobiusMap.rotation(2.0), MobiusMap.rotation(5.0)
    assert mobius_distance(mobius_compose(a, b), MobiusMap.rotation(7.0)) < 1e-15
    m = MobiusMap(1.1, 0.3 - 0.4j)
    assert mobius_distance(mobius_compose(m, IDENTITY), m) < 1e-15
    assert mobius_distance(mobius_compose(IDENTITY, m), m) < 1e-15
    assert mobius_distance(mobius_compose(m, mobius_invert(m)), IDENTITY) < 1e-10


def test_invert_examples():
    assert mobius_distance(mobius_invert(MobiusMap.rotation(1.0)), MobiusMap.rotation(-1.0)) < 1e-15
    assert mobius_invert(IDENTITY) == IDENTITY
    m = MobiusMap(0.0, 1 / 3)
    inv = mobius_invert(m)
    for th in np.linspace(0, TWO_PI, 100, endpoint=False):
        assert circ_dist(mobius_apply(inv, mobius_apply(m, th)), th) < 1e-10


def test_distance_examples():
    assert disk_distance_to_origin(0j) == 0.0
    assert disk_distance_to_origin(1 / 3) == pytest.approx(math.log(2), rel=1e-15)
    rs = np.linspace(0, 1 - 1e-9, 500)
    ds = [disk_distance_to_origin(r) for r in rs]
    assert all(np.diff(ds) > 0)
    with pytest.raises(ValueError):
        disk_distance_to_origin(1.0)


def test_distance_from_gap_near_one():
    # r rounds to 1 but the gap is known: the distance stays finite and exact
    gap = 1e-20
    assert distance_from_gap(1.0, gap) == pytest.approx(2 * math.log(2) - math.log(gap))


def test_su11_examples():
    mat = to_su11(IDENTITY)
    assert (mat.a, mat.b) == (1, 0)
    mat = to_su11(MobiusMap.rotation(1.2))
    assert abs(mat.a - cmath.exp(0.6j)) < 1e-15 and mat.b == 0
    mat = to_su11(MobiusMap(0.0, 1 / 3))
    assert abs(mat.b / mat.a) == pytest.approx(1 / 3)
    assert mat.det == pytest.approx(1.0, abs=1e-15)


def test_su11_rejects_bad_determinant():
    with pytest.raises(NumericalError):
        Su11Matrix(0.5, 1.0).normalized()


@given(mobius_maps())
def test_su11_round_trip(m):
    back = from_su11(to_su11(m))
    assert mobius_distance(back, m) < 1e-9


@given(mobius_maps(), mobius_maps(), st.floats(0, TWO_PI))
def test_compose_acts_as_composition(f, g, th):
    fg = mobius_compose(f, g)
    assert circ_dist(mobius_apply(fg, th), mobius_apply(f, mobius_apply(g, th))) < 1e-9


@settings(max_examples=50)
@given(mobius_maps(0.8), mobius_maps(0.8), mobius_maps(0.8))
def test_compose_associative(a, b, c):
    lhs = mobius_compose(mobius_compose(a, b), c)
    rhs = mobius_compose(a, mobius_compose(b, c))
    assert mobius_distance(lhs, rhs) < 1e-9


@given(st.floats(0, 0.999))
def test_distance_is_twice_artanh(r):
    assert disk_distance_to_origin(r) == pytest.approx(2 * math.atanh(r), rel=1e-12, abs=1e-300)


@given(st.floats(0, 0.999999), angles, angles)
def test_lift_offset_stays_off_the_branch_cut(r, a, th):
    # 1 - conj(sigma) e^{i theta} has positive real part, so atan2 never wraps
    w = 1 - (cmath.rect(r, a)).conjugate() * cmath.exp(1j * th)
    assert w.real > 0
