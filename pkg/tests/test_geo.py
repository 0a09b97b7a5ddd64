import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from driftpath.geo import (
    GeoPoint,
    Rotation,
    UnitVector3,
    angular_distance,
    from_cartesian,
    lonlat_to_xyz,
    normalize_lon,
    rotate_point,
    sample_uniform_rotation,
    to_cartesian,
    xyz_to_lonlat,
)

lons = st.floats(-180, 180, exclude_max=True, allow_nan=False)
lats = st.floats(-89.9, 89.9, allow_nan=False)
seeds = st.integers(0, 2**63 - 1)


def lon_gap(a, b):
    return abs((a - b + 180.0) % 360.0 - 180.0)


def test_cartesian_axes():
    assert to_cartesian(GeoPoint(0, 0)).as_array() == pytest.approx([1, 0, 0], abs=1e-15)
    assert to_cartesian(GeoPoint(0, 90)).as_array() == pytest.approx([0, 0, 1], abs=1e-15)
    assert to_cartesian(GeoPoint(90, 0)).as_array() == pytest.approx([0, 1, 0], abs=1e-15)


def test_from_cartesian_axes_and_poles():
    p = from_cartesian(UnitVector3(1.0, 0.0, 0.0))
    assert (p.lon, p.lat) == (0.0, 0.0)
    south = from_cartesian((0.0, 0.0, -1.0))
    assert (south.lon, south.lat) == (0.0, -90.0)
    assert from_cartesian((0.0, 0.0, 5.0)).lat == 90.0


def test_from_cartesian_rejects_zero_vector():
    with pytest.raises(ValueError):
        from_cartesian((0.0, 0.0, 0.0))


def test_unit_vector_invariant():
    with pytest.raises(ValueError):
        UnitVector3(1.0, 1.0, 0.0)


def test_round_trip_1000_points(rng):
    lon = rng.uniform(-180, 180, 1000)
    lat = np.degrees(np.arcsin(rng.uniform(-1, 1, 1000)))
    worst = 0.0
    for a, b in zip(lon, lat):
        q = from_cartesian(to_cartesian(GeoPoint(a, b)))
        worst = max(worst, lon_gap(q.lon, a), abs(q.lat - b))
    assert worst < 1e-9


@pytest.mark.parametrize(
    "raw, wrapped",
    [(180.0, -180.0), (-180.0, -180.0), (540.0, -180.0), (190.0, -170.0), (-190.0, 170.0), (359.5, -0.5), (12.25, 12.25)],
)
def test_normalize_lon(raw, wrapped):
    assert normalize_lon(raw) == wrapped
    assert normalize_lon(np.array([raw]))[0] == wrapped


@pytest.mark.parametrize("lat", [90.0001, -91.0, math.nan])
def test_geopoint_rejects_bad_latitude(lat):
    with pytest.raises(ValueError):
        GeoPoint(0.0, lat)


def test_geopoint_rejects_nonfinite_longitude():
    with pytest.raises(ValueError):
        GeoPoint(math.inf, 0.0)


def test_sampling_is_deterministic():
    a = sample_uniform_rotation(np.random.default_rng(99))
    b = sample_uniform_rotation(np.random.default_rng(99))
    assert a.q == b.q
    assert np.array_equal(a.m, b.m)


@pytest.fixture(scope="module")
def rotated_x_axis():
    g = np.random.default_rng(2024)
    m = np.array([sample_uniform_rotation(g).m[:, 0] for _ in range(100_000)])
    return m


def test_rotations_are_isotropic(rotated_x_axis):
    assert np.linalg.norm(rotated_x_axis.mean(axis=0)) < 0.02


def test_rotated_latitudes_are_area_uniform(rotated_x_axis):
    # a uniform point on the sphere has sin(latitude) uniform on [-1, 1]
    sin_lat = rotated_x_axis[:, 2]
    res = stats.kstest(sin_lat, stats.uniform(loc=-1, scale=2).cdf)
    assert res.pvalue > 0.01


@given(seeds)
def test_rotation_matrix_is_proper_orthogonal(seed):
    r = sample_uniform_rotation(np.random.default_rng(seed))
    assert abs(np.linalg.norm(r.q) - 1) < 1e-12
    assert np.allclose(r.m.T @ r.m, np.eye(3), atol=1e-12, rtol=0)
    assert abs(np.linalg.det(r.m) - 1) < 1e-12


def test_identity_rotation_returns_input():
    p = GeoPoint(-33.3, 12.1)
    assert rotate_point(Rotation.identity(), p) == p


def test_quarter_turn_about_pole():
    r = Rotation.about_axis((0, 0, 1), 90)
    q = rotate_point(r, GeoPoint(0, 0))
    assert q.lon == pytest.approx(90, abs=1e-9)
    assert q.lat == pytest.approx(0, abs=1e-9)


def test_distances_preserved_over_1000_pairs(rng):
    worst = 0.0
    for _ in range(1000):
        r = sample_uniform_rotation(rng)
        a = GeoPoint(rng.uniform(-180, 180), rng.uniform(-89, 89))
        b = GeoPoint(rng.uniform(-180, 180), rng.uniform(-89, 89))
        d0 = angular_distance(a, b)
        d1 = angular_distance(rotate_point(r, a), rotate_point(r, b))
        worst = max(worst, abs(d0 - d1))
    assert worst < 1e-9


@given(seeds, lons, lats)
@settings(max_examples=200)
def test_inverse_undoes_rotation(seed, lon, lat):
    r = sample_uniform_rotation(np.random.default_rng(seed))
    p = GeoPoint(lon, lat)
    q = rotate_point(r.inverse(), rotate_point(r, p))
    assert abs(q.lat - p.lat) < 1e-9
    if abs(p.lat) < 89.0:
        assert lon_gap(q.lon, p.lon) < 1e-9


def test_vectorised_rotation_matches_pointwise(rng):
    r = sample_uniform_rotation(rng)
    lon, lat = rng.uniform(-180, 180, 50), rng.uniform(-80, 80, 50)
    vl, va = r.apply_lonlat(lon, lat)
    for a, b, x, y in zip(lon, lat, vl, va):
        q = rotate_point(r, GeoPoint(a, b))
        assert lon_gap(q.lon, x) < 1e-12 and abs(q.lat - y) < 1e-12


def test_lonlat_xyz_inverse_vectorised(rng):
    lon, lat = rng.uniform(-180, 180, 100), rng.uniform(-89, 89, 100)
    back_lon, back_lat = xyz_to_lonlat(lonlat_to_xyz(lon, lat))
    assert np.max(np.abs(back_lat - lat)) < 1e-12
    assert np.max(np.abs((back_lon - lon + 180) % 360 - 180)) < 1e-9
