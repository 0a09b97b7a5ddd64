"""Spatial indices mapping positions to discrete cells.

Two implementations share the :class:`SpatialIndex` interface:

* :class:`LonLatGrid` -- half-open boxes ``[x, x + d) x [y, y + d)`` anchored at
  (-180, -90).  The top row also holds latitude 90.
* :class:`HexGrid` -- the H3 hexagonal discrete global grid, backed by the
  ``h3`` core library, so ids are bit-compatible with other H3 tooling.

Cell ids are plain non-negative Python ints below 2**63.  H3 cells always
carry mode 1 in bits 59-62; lon-lat ids carry mode 0 and a kind tag in bits
56-58, so ids from different grids never collide.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
from h3.api import basic_int as h3

from .errors import ConfigError
from .geo import GeoPoint, lonlat_to_xyz, normalize_lon

CellId = int

__all__ = [
    "CellId",
    "SpatialIndex",
    "LonLatGrid",
    "HexGrid",
    "make_index",
    "cell_to_hex",
    "hex_to_cell",
]

_LONLAT_TAG = 1
_TAG_SHIFT = 56
_RES_SHIFT = 36
_ROW_SHIFT = 18
_FIELD_MASK = (1 << 18) - 1
_RES_MASK = (1 << 20) - 1


def cell_to_hex(c: CellId) -> str:
    return f"{int(c):015x}"


def hex_to_cell(s: str) -> CellId:
    return int(s.strip(), 16)


class SpatialIndex(ABC):
    kind: str
    resolution: object

    @abstractmethod
    def cells_of(self, lon, lat) -> np.ndarray:
        """Vectorised point lookup; returns an int64 array of cell ids."""

    @abstractmethod
    def owns(self, c: CellId) -> bool:
        """Whether ``c`` is a valid id produced by this index."""

    @abstractmethod
    def _centroid(self, c: CellId) -> tuple[float, float]: ...

    @abstractmethod
    def _vertices(self, c: CellId) -> list[tuple[float, float]]: ...

    @abstractmethod
    def neighbors(self, c: CellId) -> list[CellId]:
        """Cells sharing an edge or a vertex with ``c``."""

    def cell_of(self, p: GeoPoint) -> CellId:
        return int(self.cells_of([p.lon], [p.lat])[0])

    def _check(self, c: CellId) -> None:
        if not self.owns(c):
            raise ValueError(f"cell {int(c):x} does not belong to {self!r}")

    def cell_centroid(self, c: CellId) -> GeoPoint:
        self._check(c)
        lon, lat = self._centroid(c)
        return GeoPoint(lon, lat)

    def cell_boundary(self, c: CellId) -> list[GeoPoint]:
        """Cell corners, counterclockwise seen from outside the sphere.

        The ring is implicitly closed; the first vertex is not repeated.
        """
        self._check(c)
        return [GeoPoint(lon, lat) for lon, lat in self._vertices(c)]

    def describe(self) -> dict:
        return {"kind": self.kind, "resolution": self.resolution}


@dataclass(frozen=True)
class LonLatGrid(SpatialIndex):
    """Regular longitude-latitude boxes of ``resolution`` degrees on a side."""

    resolution: float = 1.0
    kind = "lonlat"

    def __post_init__(self):
        d = float(self.resolution)
        mdeg = round(d * 1000)
        if not (d > 0 and abs(d * 1000 - mdeg) < 1e-6 and 10 <= mdeg <= 90_000):
            raise ConfigError("lonlat resolution must be a multiple of 0.001 degrees in [0.01, 90]")
        for span in (180.0, 360.0):
            if abs(span / d - round(span / d)) > 1e-9:
                raise ConfigError(f"lonlat resolution {d} must divide {span:g} degrees")
        object.__setattr__(self, "resolution", d)

    @property
    def _mdeg(self) -> int:
        return round(self.resolution * 1000)

    @property
    def n_rows(self) -> int:
        return round(180.0 / self.resolution)

    @property
    def n_cols(self) -> int:
        return round(360.0 / self.resolution)

    def _encode(self, row, col):
        head = (_LONLAT_TAG << _TAG_SHIFT) | (self._mdeg << _RES_SHIFT)
        return head | (np.asarray(row, dtype=np.int64) << _ROW_SHIFT) | np.asarray(col, dtype=np.int64)

    def _decode(self, c: CellId) -> tuple[int, int]:
        c = int(c)
        return (c >> _ROW_SHIFT) & _FIELD_MASK, c & _FIELD_MASK

    def cells_of(self, lon, lat) -> np.ndarray:
        lon = normalize_lon(np.atleast_1d(np.asarray(lon, dtype=float)))
        lat = np.atleast_1d(np.asarray(lat, dtype=float))
        if np.any(~np.isfinite(lat)) or np.any(np.abs(lat) > 90):
            raise ValueError("latitudes must lie in [-90, 90]")
        d = self.resolution
        row = np.minimum(np.floor((lat + 90.0) / d).astype(np.int64), self.n_rows - 1)
        col = np.floor((lon + 180.0) / d).astype(np.int64) % self.n_cols
        return self._encode(row, col).astype(np.int64)

    def owns(self, c: CellId) -> bool:
        c = int(c)
        if c < 0 or c >> _TAG_SHIFT != _LONLAT_TAG or (c >> _RES_SHIFT) & _RES_MASK != self._mdeg:
            return False
        row, col = self._decode(c)
        return row < self.n_rows and col < self.n_cols

    def _centroid(self, c):
        row, col = self._decode(c)
        d = self.resolution
        return -180.0 + (col + 0.5) * d, -90.0 + (row + 0.5) * d

    def _vertices(self, c):
        row, col = self._decode(c)
        d = self.resolution
        w, s = -180.0 + col * d, -90.0 + row * d
        e, n = w + d, min(s + d, 90.0)
        return [(w, s), (e, s), (e, n), (w, n)]

    def neighbors(self, c):
        row, col = self._decode(c)
        out = set()
        for dr in (-1, 0, 1):
            r = row + dr
            if not 0 <= r < self.n_rows:
                continue
            for dc in (-1, 0, 1):
                if dr or dc:
                    out.add(int(self._encode(r, (col + dc) % self.n_cols)))
        out.discard(int(c))
        return sorted(out)


@dataclass(frozen=True)
class HexGrid(SpatialIndex):
    """H3 hexagonal cells at an integer resolution (0-15), default 3."""

    resolution: int = 3
    kind = "hexdggs"

    def __post_init__(self):
        if int(self.resolution) != self.resolution or not 0 <= int(self.resolution) <= 15:
            raise ConfigError("hexdggs resolution must be an integer in [0, 15]")
        object.__setattr__(self, "resolution", int(self.resolution))

    def cells_of(self, lon, lat) -> np.ndarray:
        lon = np.atleast_1d(np.asarray(lon, dtype=float))
        lat = np.atleast_1d(np.asarray(lat, dtype=float))
        if np.any(~np.isfinite(lat)) or np.any(np.abs(lat) > 90) or np.any(~np.isfinite(lon)):
            raise ValueError("positions must be finite with latitudes in [-90, 90]")
        res = self.resolution
        conv = h3.latlng_to_cell
        return np.fromiter(
            (conv(b, a, res) for a, b in zip(lon.tolist(), lat.tolist())),
            dtype=np.int64,
            count=lon.size,
        )

    def owns(self, c: CellId) -> bool:
        c = int(c)
        return 0 <= c < 1 << 63 and h3.is_valid_cell(c) and h3.get_resolution(c) == self.resolution

    def _centroid(self, c):
        lat, lon = h3.cell_to_latlng(int(c))
        return lon, lat

    def _vertices(self, c):
        c = int(c)
        pts = [h3.vertex_to_latlng(v) for v in h3.cell_to_vertexes(c)]
        lat0, lon0 = h3.cell_to_latlng(c)
        # order by bearing in the tangent plane at the centre: counterclockwise from outside
        centre = lonlat_to_xyz(lon0, lat0)
        north = np.array([0.0, 0.0, 1.0]) - centre[2] * centre
        if np.linalg.norm(north) < 1e-9:
            north = np.array([1.0, 0.0, 0.0])
        north /= np.linalg.norm(north)
        east = np.cross(north, centre)
        xyz = lonlat_to_xyz([p[1] for p in pts], [p[0] for p in pts])
        ang = np.arctan2(xyz @ north, xyz @ east)
        order = np.argsort(ang, kind="stable")
        return [(pts[i][1], pts[i][0]) for i in order]

    def neighbors(self, c):
        c = int(c)
        return sorted(x for x in h3.grid_disk(c, 1) if x != c)

    def is_pentagon(self, c: CellId) -> bool:
        return bool(h3.is_pentagon(int(c)))


def make_index(kind: str = "hexdggs", resolution=None) -> SpatialIndex:
    if kind == "hexdggs":
        return HexGrid(3 if resolution is None else resolution)
    if kind == "lonlat":
        return LonLatGrid(1.0 if resolution is None else float(resolution))
    raise ConfigError(f"unknown grid kind {kind!r} (expected 'hexdggs' or 'lonlat')")


def kind_of(c: CellId) -> str:
    """Grid family of a cell id, read from its tag bits."""
    c = int(c)
    if (c >> 59) & 0xF == 1:
        return "hexdggs"
    if c >> _TAG_SHIFT == _LONLAT_TAG:
        return "lonlat"
    return "unknown"


def mean_cell_area_km2(idx: SpatialIndex) -> float:
    if isinstance(idx, HexGrid):
        return h3.average_hexagon_area(idx.resolution, unit="km^2")
    earth_r = 6371.0088
    return 4 * math.pi * earth_r**2 / (idx.n_rows * idx.n_cols)
