"""Points on the unit sphere and uniform random rotations of it.

Angles are degrees at the interface and radians internally.  Longitudes are
normalised into [-180, 180); at the poles the longitude is set to 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GeoPoint",
    "UnitVector3",
    "Rotation",
    "normalize_lon",
    "to_cartesian",
    "from_cartesian",
    "lonlat_to_xyz",
    "xyz_to_lonlat",
    "angular_distance",
    "sample_uniform_rotation",
    "rotate_point",
]

# |x|,|y| below this (relative to the unit sphere) count as a pole
_POLE_EPS = 1e-15


def normalize_lon(lon):
    """Wrap longitude(s) into [-180, 180)."""
    if np.ndim(lon) == 0:
        lon = float(lon)
        if -180.0 <= lon < 180.0:
            return lon
        wrapped = math.fmod(lon + 180.0, 360.0)
        if wrapped < 0:
            wrapped += 360.0
        wrapped -= 180.0
        return -180.0 if wrapped >= 180.0 else wrapped
    lon = np.asarray(lon, dtype=float)
    inside = (lon >= -180.0) & (lon < 180.0)
    if inside.all():
        return lon.copy()
    out = np.where(inside, lon, np.mod(lon + 180.0, 360.0) - 180.0)
    out[out >= 180.0] = -180.0
    return out


@dataclass(frozen=True, order=True)
class GeoPoint:
    """A longitude-latitude position in degrees."""

    lon: float
    lat: float

    def __post_init__(self):
        lat = float(self.lat)
        if not (-90.0 <= lat <= 90.0) or not math.isfinite(float(self.lon)):
            raise ValueError(f"invalid position lon={self.lon!r}, lat={self.lat!r}")
        object.__setattr__(self, "lat", lat)
        object.__setattr__(self, "lon", normalize_lon(float(self.lon)))

    def __iter__(self):
        yield self.lon
        yield self.lat


@dataclass(frozen=True)
class UnitVector3:
    x: float
    y: float
    z: float

    def __post_init__(self):
        if abs(self.x * self.x + self.y * self.y + self.z * self.z - 1.0) > 1e-12:
            raise ValueError("not a unit vector")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


def lonlat_to_xyz(lon, lat) -> np.ndarray:
    """Vectorised spherical-to-Cartesian map; returns shape (..., 3)."""
    lam = np.radians(np.asarray(lon, dtype=float))
    phi = np.radians(np.asarray(lat, dtype=float))
    cphi = np.cos(phi)
    return np.stack([cphi * np.cos(lam), cphi * np.sin(lam), np.sin(phi)], axis=-1)


def xyz_to_lonlat(xyz) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of :func:`lonlat_to_xyz`; vectors are renormalised first."""
    xyz = np.asarray(xyz, dtype=float)
    norm = np.linalg.norm(xyz, axis=-1)
    if np.any(norm == 0) or not np.all(np.isfinite(norm)):
        raise ValueError("cannot convert a zero or non-finite vector to a position")
    x, y, z = np.moveaxis(xyz / norm[..., None], -1, 0)
    h = np.hypot(x, y)
    lat = np.degrees(np.arctan2(z, h))
    pole = h < _POLE_EPS
    lon = np.where(pole, 0.0, np.degrees(np.arctan2(y, x)))
    lat = np.where(pole, np.copysign(90.0, z), lat)
    return normalize_lon(lon), lat


def to_cartesian(p: GeoPoint) -> UnitVector3:
    lam, phi = math.radians(p.lon), math.radians(p.lat)
    x, y, z = math.cos(phi) * math.cos(lam), math.cos(phi) * math.sin(lam), math.sin(phi)
    # renormalise so the stored vector meets the 1e-12 unit-norm invariant exactly
    n = math.sqrt(x * x + y * y + z * z)
    return UnitVector3(x / n, y / n, z / n)


def from_cartesian(v) -> GeoPoint:
    """Convert a (not necessarily unit) Cartesian vector to a position."""
    if isinstance(v, UnitVector3):
        v = (v.x, v.y, v.z)
    lon, lat = xyz_to_lonlat(np.asarray(v, dtype=float))
    return GeoPoint(float(lon), float(lat))


def angular_distance(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle separation in radians (atan2 form, accurate at all scales)."""
    u, w = to_cartesian(a).as_array(), to_cartesian(b).as_array()
    return math.atan2(np.linalg.norm(np.cross(u, w)), float(np.dot(u, w)))


def _quat_to_matrix(w, x, y, z) -> np.ndarray:
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
            [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
            [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
        ]
    )


@dataclass(frozen=True)
class Rotation:
    """A rotation of the sphere stored as a unit quaternion ``(w, x, y, z)``."""

    q: tuple[float, float, float, float]
    m: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        if q.shape != (4,):
            raise ValueError("quaternion must have four components")
        n = np.linalg.norm(q)
        if n == 0 or not np.isfinite(n):
            raise ValueError("quaternion must be non-zero and finite")
        if abs(n - 1.0) > 1e-12:
            q = q / n
        object.__setattr__(self, "q", tuple(float(c) for c in q))
        m = _quat_to_matrix(*self.q)
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @classmethod
    def identity(cls) -> "Rotation":
        return cls((1.0, 0.0, 0.0, 0.0))

    @classmethod
    def about_axis(cls, axis, angle_deg: float) -> "Rotation":
        """Right-handed rotation by ``angle_deg`` about ``axis``."""
        axis = np.asarray(axis, dtype=float)
        axis = axis / np.linalg.norm(axis)
        half = math.radians(angle_deg) / 2.0
        s = math.sin(half)
        return cls((math.cos(half), axis[0] * s, axis[1] * s, axis[2] * s))

    @property
    def is_identity(self) -> bool:
        return self.q[1:] == (0.0, 0.0, 0.0)

    def inverse(self) -> "Rotation":
        w, x, y, z = self.q
        return Rotation((w, -x, -y, -z))

    def apply_lonlat(self, lon, lat) -> tuple[np.ndarray, np.ndarray]:
        """Rotate arrays of positions; the identity returns copies of the input."""
        lon = np.asarray(lon, dtype=float)
        lat = np.asarray(lat, dtype=float)
        if self.is_identity:
            return lon.copy(), lat.copy()
        xyz = lonlat_to_xyz(lon, lat) @ self.m.T
        return xyz_to_lonlat(xyz)


def sample_uniform_rotation(rng: np.random.Generator) -> Rotation:
    """Draw a rotation uniformly from SO(3).

    Four i.i.d. standard normals normalised onto the unit 3-sphere give a
    uniformly distributed unit quaternion, which is Haar-uniform as a rotation.
    """
    q = rng.standard_normal(4)
    while np.linalg.norm(q) < 1e-12:
        q = rng.standard_normal(4)
    return Rotation(tuple(q / np.linalg.norm(q)))


def rotate_point(r: Rotation, p: GeoPoint) -> GeoPoint:
    if r.is_identity:
        return p
    return from_cartesian(r.m @ to_cartesian(p).as_array())
