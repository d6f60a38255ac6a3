import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from csbundle.quotient import (
    BranchProximity,
    covering_degree,
    fixed_points,
    jacobian,
    local_sign,
    preimage_count,
    preimages,
    quotient_map,
    reduce_mod1,
    weyl_orbit,
)

unit = st.floats(0, 1, exclude_max=True, allow_nan=False)


def test_fixed_points_exhaustive_grid():
    grid = np.arange(0, 1, 0.01)
    found = [(a, b) for a in grid for b in grid if len(weyl_orbit((a, b))) == 1]
    assert sorted(found) == sorted(fixed_points())


def test_weyl_orbit_examples():
    assert weyl_orbit((0.2, 0.7)) == [(0.2, 0.7), pytest.approx((0.8, 0.3))]
    assert weyl_orbit((0.5, 1.0)) == [(0.5, 0.0)]
    assert reduce_mod1((-0.25, 3.5)) == (0.75, 0.5)


@given(unit, unit)
def test_quotient_is_weyl_invariant(a, b):
    q1, q2 = quotient_map((a, b)), quotient_map((-a, -b))
    assert np.allclose(q1.as_array(), q2.as_array(), atol=1e-12)
    assert q1.relation_defect() < 1e-12


@given(unit, unit)
def test_jacobian_matches_finite_differences(a, b):
    h = 1e-6
    fd = np.column_stack([
        (quotient_map((a + h, b)).as_array() - quotient_map((a - h, b)).as_array()) / (2 * h),
        (quotient_map((a, b + h)).as_array() - quotient_map((a, b - h)).as_array()) / (2 * h),
    ])
    assert np.allclose(jacobian((a, b)), fd, atol=1e-6)


def test_jacobian_degenerates_at_fixed_points():
    for p in fixed_points():
        assert np.linalg.matrix_rank(jacobian(p), tol=1e-9) < 2


@given(unit, unit)
def test_preimages_are_the_weyl_orbit(a, b):
    q = quotient_map((a, b))
    try:
        pts = preimages(q)
    except BranchProximity:
        return
    orbit = weyl_orbit((a, b))
    assert len(pts) == len(orbit)
    for p in orbit:
        assert any(np.allclose(np.subtract(p, r) - np.round(np.subtract(p, r)), 0, atol=1e-6)
                   for r in pts)


def test_regular_value_has_two_positive_preimages():
    q = quotient_map((0.13, 0.71))
    assert preimage_count(q) == 2
    assert preimage_count(q, signed=True) == 2
    assert all(local_sign(p) == 1 for p in preimages(q))


@pytest.mark.parametrize("p", fixed_points())
def test_branch_proximity(p):
    with pytest.raises(BranchProximity):
        preimages(quotient_map(p))
    with pytest.raises(BranchProximity):
        preimages(quotient_map((p[0] + 1e-5, p[1] - 1e-5)))


def test_off_surface_rejected():
    from csbundle.quotient import PillowcasePoint
    with pytest.raises(ValueError):
        preimages(PillowcasePoint(0.1, 0.2, 0.9))


def test_covering_degree():
    assert covering_degree(200, np.random.default_rng(0)) == 2
    with pytest.raises(ValueError):
        covering_degree(0, np.random.default_rng(0))


def test_quotient_separates_orbits():
    rng = np.random.default_rng(11)
    checked = 0
    while checked < 1000:
        p, q = rng.uniform(0, 1, (2, 2))
        d1 = np.subtract(p, q) - np.round(np.subtract(p, q))
        d2 = np.add(p, q) - np.round(np.add(p, q))
        if min(np.abs(d1).max(), np.abs(d2).max()) < 1e-3:
            continue
        diff = quotient_map(p).as_array() - quotient_map(q).as_array()
        assert np.abs(diff).max() > 1e-6
        checked += 1


def test_orbit_and_map_examples():
    assert weyl_orbit((0, 0)) == [(0.0, 0.0)]
    assert weyl_orbit((0.5, 0)) == [(0.5, 0.0)]
    assert sorted(weyl_orbit((0.25, 0.25))) == [(0.25, 0.25), (0.75, 0.75)]
    assert len(fixed_points()) == 4
    assert all(weyl_orbit(p) == [p] for p in fixed_points())
    assert np.allclose(quotient_map((0.25, 0.25)).as_array(), [0, 0, 1], atol=1e-15)
