import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from projcocycle.analysis import (
    boundedness_bounds,
    drift_grid,
    drift_sequence,
    enlarged_drift_sequence,
    exponential_rate,
    hyperbolic_drift_lower_bound,
    reduce_with_conjugacy,
    sup_final_drift,
)
from projcocycle.enlarged import Triple
from projcocycle.geometry import TWO_PI, MobiusMap, NumericalError, disk_distance_to_origin
from projcocycle.maps import Arnold, Conjugate, Inverse, Mobius, Rotation, identity
from projcocycle.projective import osculating_radius

PHI = Mobius(MobiusMap(0.0, 0.3))
REDUCIBLE = Conjugate(PHI, Rotation(1.0))
LOG15 = math.log(1.5)


def test_drift_rotation_is_zero():
    for r in drift_sequence(Rotation(0.4), 1.0, 20):
        assert r.r_n == 0 and r.drift == 0


def test_drift_hyperbolic_fixed_point_closed_form():
    for r in drift_sequence(Arnold(0, 0.5), 0.0, 40):
        assert r.delta_n == 0
        assert r.r_n == pytest.approx((1.5**r.n - 1) / (1.5**r.n + 1), rel=1e-14)
        assert r.dist == pytest.approx(r.n * LOG15, rel=1e-12)


def test_drift_bounded_under_exact_reducibility():
    recs = drift_sequence(REDUCIBLE, 0.0, 1000)
    bound = 2 * disk_distance_to_origin(0.3)
    assert max(r.dist for r in recs) <= bound + 1e-8
    assert recs[-1].drift <= bound / 1000 + 1e-10


def test_drift_cross_check_catches_disagreement(monkeypatch):
    import projcocycle.analysis as an

    real = an.log_osculating_gap
    monkeypatch.setattr(an, "log_osculating_gap", lambda ld, y: (0.5 * real(ld, y)[0], real(ld, y)[1]))
    with pytest.raises(NumericalError):
        an.drift_sequence(Arnold(0.8, 0.5), 0.3, 5)


def test_gap_identity_on_records():
    # attracting orbit (last case) only while D^3 stays a normal float
    for f, th, n in [(Arnold(0.8, 0.5), 0.3, 400), (REDUCIBLE, 2.0, 400), (Arnold(0.1, 0.9), 4.0, 80)]:
        for r in drift_sequence(f, th, n):
            expected = 4 * r.d_n**3 / (r.d_n**2 * (r.d_n + 1) ** 2 + r.delta_n**2)
            assert r.gap == pytest.approx(expected, rel=1e-10)
            assert r.cocycle_gap == pytest.approx(r.gap, rel=1e-10)


def test_long_orbits_stay_representable():
    # D = 1.5^3000 overflows a double; the drift does not notice
    recs = drift_sequence(Arnold(0, 0.5), 0.0, 3000)
    assert recs[-1].d_n == math.inf
    assert recs[-1].drift == pytest.approx(LOG15, rel=1e-12)
    # attracting fixed point: D underflows, drift tends to |log Df|
    theta = math.pi + math.asin(1 / 9)
    mu = -math.log(1 - 0.9 * math.cos(math.asin(1 / 9)))
    recs = drift_sequence(Arnold(0.1, 0.9), theta, 3000)
    assert recs[-1].d_n == 0
    assert recs[-1].drift == pytest.approx(mu, rel=1e-3)


@pytest.mark.parametrize("a, b", [(0.0, 0.5), (0.0, 0.9), (0.2, 0.6), (-0.3, 0.7), (0.05, 0.2)])
def test_hyperbolic_lower_bound(a, b):
    # repelling fixed point theta0 = -asin(a/b) with cos(theta0) > 0
    theta0 = -math.asin(a / b)
    mu = math.log(1 + b * math.cos(theta0))
    for r in drift_sequence(Arnold(a, b), theta0, 30):
        assert r.drift >= hyperbolic_drift_lower_bound(mu, r.n)


def test_second_derivative_grows_subexponentially():
    recs = drift_sequence(REDUCIBLE, 0.0, 500)
    assert exponential_rate([r.delta_n for r in recs]) < 0.05


def test_exponential_rate_recovers_slope():
    assert exponential_rate([3 * math.exp(0.2 * n) for n in range(1, 50)]) == pytest.approx(0.2)


def test_drift_grid_order_and_workers():
    thetas = [0.3, 1.0, 5.0, 2.0]
    serial = drift_grid(Arnold(0.8, 0.5), thetas, 10)
    parallel = drift_grid(Arnold(0.8, 0.5), thetas, 10, workers=2)
    assert serial == parallel
    assert [recs[0].d_n for recs in serial] == [Arnold(0.8, 0.5).jet(t).d1 for t in thetas]


def test_grid_refinement_changes_sup_little():
    n = 200
    coarse = sup_final_drift(REDUCIBLE, np.linspace(0, TWO_PI, 256, endpoint=False), n)
    fine = sup_final_drift(REDUCIBLE, np.linspace(0, TWO_PI, 1024, endpoint=False), n)
    assert abs(fine - coarse) < 1e-3


def test_enlarged_drift_rotation():
    for r in enlarged_drift_sequence(Rotation(0.7), Triple(0.1, 2.0, 4.0), 30):
        assert r.r_n < 1e-12 and r.drift < 1e-12


def test_enlarged_drift_elliptic_mobius_is_bounded():
    m = MobiusMap(1.0, 0.2 * complex(math.cos(1), math.sin(1)))
    recs = enlarged_drift_sequence(Mobius(m), Triple(0.3, 2.0, 4.0), 300)
    assert max(r.dist for r in recs) < 1.0
    assert recs[-1].drift < 1.0 / 300


def test_enlarged_drift_straddling_triple():
    """Outer points fall into the attracting point pi (derivative 1/2): limit log 2."""
    recs = enlarged_drift_sequence(Arnold(0, 0.5), Triple(-0.1, 0.0, 0.1), 48)
    drift = [r.drift for r in recs]
    assert all(b > a for a, b in zip(drift[20:], drift[21:]))
    gaps = [r.n * (math.log(2) - r.drift) for r in recs[30:]]
    assert max(gaps) - min(gaps) < 0.05
    assert drift[39] > 1.5 * LOG15


def test_enlarged_drift_wide_triple_and_collapse():
    recs = enlarged_drift_sequence(Arnold(0, 0.5), Triple(0.5, 2.0, 4.0), 44)
    assert recs[-1].drift == pytest.approx(math.log(2), rel=0.01)
    with pytest.raises(NumericalError):
        enlarged_drift_sequence(Arnold(0, 0.5), Triple(0.5, 2.0, 4.0), 80)


def test_enlarged_drift_rejects_degenerate_triple():
    with pytest.raises(ValueError):
        enlarged_drift_sequence(Rotation(0.1), Triple(1.0, 1.0, 2.0), 3)


def test_reduce_examples():
    # phi o f o phi^-1 = rotation, with f = PHI o R o PHI^-1, needs phi = PHI^-1
    for rec in reduce_with_conjugacy(REDUCIBLE, Inverse(PHI), 32):
        assert rec.residual < 1e-9
        assert rec.angle == pytest.approx(1.0, abs=1e-9)
    for rec in reduce_with_conjugacy(Rotation(0.6), identity(), 8):
        assert rec.residual == 0 and rec.angle == pytest.approx(0.6)
    assert max(r.residual for r in reduce_with_conjugacy(Arnold(0.8, 0.5), identity(), 16)) > 0.1


def test_reduce_non_mobius_conjugacy_is_pointwise():
    psi = Arnold(0.2, 0.3)
    f = Conjugate(psi, Rotation(2.0))
    phi = Inverse(psi)
    base = reduce_with_conjugacy(f, phi, 8)
    shifted = reduce_with_conjugacy(f, phi, 8, offset=0.37)
    for rec in base + shifted:
        assert rec.residual < 1e-8
        assert rec.angle == pytest.approx(2.0, abs=1e-8)
    # same points on a finer grid give the same records
    finer = reduce_with_conjugacy(f, phi, 16)
    for rec, twin in zip(base, finer[::2]):
        assert rec.theta == twin.theta and rec.residual == twin.residual


def test_reduce_rejects_empty_grid():
    with pytest.raises(ValueError):
        reduce_with_conjugacy(Rotation(0.1), identity(), 0)


def test_bounds_examples():
    assert boundedness_bounds(0.0) == (1, 2)
    assert boundedness_bounds(Fraction(1, 3)) == (2, 6)
    lams = np.linspace(0, 0.999, 200)
    d, dd = zip(*(boundedness_bounds(x) for x in lams))
    assert all(np.diff(d) > 0) and all(np.diff(dd) > 0)
    assert boundedness_bounds(1 - 1e-9)[0] > 1e9
    with pytest.raises(ValueError):
        boundedness_bounds(1.0)
    with pytest.raises(ValueError):
        boundedness_bounds(-0.1)


@given(st.floats(0.01, 50), st.floats(-50, 50), st.floats(0, 1))
def test_bounds_contrapositive(d1, d2, t):
    r = osculating_radius(d1, d2)
    if r >= 1:
        return
    lam = r + t * (1 - r) * 0.999
    d_max, delta_max = boundedness_bounds(lam)
    assert d1 <= d_max + 1e-9
    assert abs(d2) <= delta_max + 1e-9


def test_reducible_sup_includes_random_points():
    rng = np.random.default_rng(7)
    thetas = np.concatenate([np.linspace(0, TWO_PI, 256, endpoint=False), rng.uniform(0, TWO_PI, 64)])
    assert sup_final_drift(REDUCIBLE, thetas, 1000) < 0.01
