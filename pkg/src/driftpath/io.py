"""File formats: matrix persistence, CSV tables and GeoJSON geometries.

Floats are written with ``repr`` so every file re-parses to the exact
in-memory value.  Cell ids are written as hexadecimal strings.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path as FsPath
from typing import Iterable

import numpy as np
import scipy.sparse as sp

from .errors import DataError
from .grid import SpatialIndex, cell_to_hex, hex_to_cell
from .pathing import Path, TravelTimeEstimate
from .transition import TransitionMatrix

STATES_FILE = "states.csv"
TRANSITIONS_FILE = "transitions.csv"
METADATA_FILE = "matrix.json"


def _fmt(x: float) -> str:
    x = float(x)
    return "" if math.isnan(x) else repr(x)


def _parse(s: str) -> float:
    return math.nan if s == "" else float(s)


def write_csv(path, header: Iterable[str], rows: Iterable[Iterable]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(list(header))
        w.writerows(rows)


def read_csv(path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, allow_nan=False)
        fh.write("\n")


# -- transition matrices ------------------------------------------------------


def save_matrix(T: TransitionMatrix, directory) -> FsPath:
    """Write ``states.csv``, ``transitions.csv`` and ``matrix.json`` into ``directory``."""
    d = FsPath(directory)
    d.mkdir(parents=True, exist_ok=True)
    write_csv(
        d / STATES_FILE,
        ("cell", "row_count"),
        ((cell_to_hex(c), int(n)) for c, n in zip(T.states.tolist(), T.row_counts.tolist())),
    )
    P = T.probabilities
    rows = np.repeat(np.arange(T.n_states), np.diff(P.indptr))
    write_csv(
        d / TRANSITIONS_FILE,
        ("row", "col", "prob"),
        ((int(r), int(c), repr(float(v))) for r, c, v in zip(rows.tolist(), P.indices.tolist(), P.data.tolist())),
    )
    write_json(
        d / METADATA_FILE,
        {
            "grid": dict(T.grid),
            "lagrangian_cutoff_days": T.lagrangian_cutoff_days,
            "gap_steps": T.gap_steps,
            "sample_interval_hours": T.sample_interval,
            "edited": T.edited,
            "removed": [cell_to_hex(c) for c in T.removed],
            "n_states": T.n_states,
            "n_entries": int(P.nnz),
        },
    )
    return d


def load_matrix(directory) -> TransitionMatrix:
    d = FsPath(directory)
    try:
        meta = json.loads((d / METADATA_FILE).read_text(encoding="utf-8"))
        states_rows = read_csv(d / STATES_FILE)
        trip = read_csv(d / TRANSITIONS_FILE)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read matrix from {d}: {exc}") from exc
    try:
        states = np.array([hex_to_cell(r["cell"]) for r in states_rows], dtype=np.int64)
        counts = np.array([int(r["row_count"]) for r in states_rows], dtype=np.int64)
        r = np.array([int(x["row"]) for x in trip], dtype=np.int64)
        c = np.array([int(x["col"]) for x in trip], dtype=np.int64)
        v = np.array([float(x["prob"]) for x in trip], dtype=float)
    except (KeyError, ValueError) as exc:
        raise DataError(f"malformed matrix files in {d}: {exc}") from exc
    n = states.size
    if meta.get("n_states", n) != n or meta.get("n_entries", v.size) != v.size:
        raise DataError(f"matrix files in {d} disagree with their metadata")
    P = sp.csr_matrix((v, (r, c)), shape=(n, n))
    return TransitionMatrix(
        states=states,
        probabilities=P,
        row_counts=counts,
        lagrangian_cutoff_days=float(meta["lagrangian_cutoff_days"]),
        gap_steps=int(meta["gap_steps"]),
        sample_interval=float(meta.get("sample_interval_hours", 6.0)),
        grid=dict(meta.get("grid", {})),
        edited=bool(meta.get("edited", False)),
        removed=tuple(hex_to_cell(x) for x in meta.get("removed", [])),
    )


# -- GeoJSON ------------------------------------------------------------------


def _unwrap(lons: list[float]) -> list[float]:
    """Shift longitudes by multiples of 360 so consecutive vertices never jump across the antimeridian."""
    out = []
    for x in lons:
        if out:
            while x - out[-1] > 180:
                x -= 360
            while x - out[-1] < -180:
                x += 360
        out.append(x)
    return out


def _ring(idx: SpatialIndex, c: int) -> list[list[float]]:
    pts = idx.cell_boundary(c)
    lons = _unwrap([p.lon for p in pts])
    ring = [[x, p.lat] for x, p in zip(lons, pts)]
    ring.append(list(ring[0]))
    return ring


def line_coords(points) -> list[list[float]]:
    pts = list(points)
    lons = _unwrap([float(p[0]) for p in pts])
    return [[x, float(p[1])] for x, p in zip(lons, pts)]


def path_feature_collection(
    idx: SpatialIndex,
    path: Path,
    estimate: TravelTimeEstimate | None = None,
    with_cells: bool = True,
    properties: dict | None = None,
) -> dict:
    """A path as a LineString of centroids, plus optionally its cells as a MultiPolygon."""
    props = dict(properties or {})
    props.update(
        origin=cell_to_hex(path.origin),
        destination=cell_to_hex(path.destination),
        cells=[cell_to_hex(c) for c in path.cells],
        log_probability=path.log_probability,
    )
    if estimate is not None:
        props.update(steps=estimate.steps, days=estimate.days)
    centroids = [tuple(idx.cell_centroid(c)) for c in path.cells]
    if len(centroids) == 1:
        geom = {"type": "Point", "coordinates": list(centroids[0])}
    else:
        geom = {"type": "LineString", "coordinates": line_coords(centroids)}
    features = [{"type": "Feature", "geometry": geom, "properties": props}]
    if with_cells:
        features.append(
            {
                "type": "Feature",
                "geometry": {"type": "MultiPolygon", "coordinates": [[_ring(idx, c)] for c in path.cells]},
                "properties": {"role": "cells"},
            }
        )
    return {"type": "FeatureCollection", "features": features}


def cells_feature_collection(idx: SpatialIndex, values: dict[int, dict]) -> dict:
    """One Polygon feature per cell with the given property dict."""
    feats = []
    for c, props in values.items():
        feats.append(
            {
                "type": "Feature",
                "geometry": {"type": "Polygon", "coordinates": [_ring(idx, c)]},
                "properties": {"cell": cell_to_hex(c), **props},
            }
        )
    return {"type": "FeatureCollection", "features": feats}


def path_bundle(paths: list) -> dict:
    """Member paths (lists of ``(lon, lat)``) merged by identical geometry, with usage counts as ``weight``."""
    weights: dict[tuple, int] = {}
    for p in paths:
        if p is None or len(p) < 2:
            continue
        key = tuple((float(a), float(b)) for a, b in p)
        weights[key] = weights.get(key, 0) + 1
    feats = [
        {
            "type": "Feature",
            "geometry": {"type": "LineString", "coordinates": line_coords(k)},
            "properties": {"weight": w},
        }
        for k, w in sorted(weights.items(), key=lambda kv: (-kv[1], kv[0]))
    ]
    return {"type": "FeatureCollection", "features": feats}


# -- tables -------------------------------------------------------------------

TRAVEL_TIME_HEADER = ("origin", "destination", "status", "steps", "days", "years")


def write_travel_times(path, ttm) -> None:
    """Long table of a :class:`~driftpath.analysis.TravelTimeMatrix`, one row per ordered pair."""
    rows = []
    n = len(ttm.labels)
    for a in range(n):
        for b in range(n):
            d = ttm.days[a, b]
            rows.append((ttm.labels[a], ttm.labels[b], ttm.status[a, b], _fmt(ttm.steps[a, b]), _fmt(d), _fmt(d / 365.25)))
    write_csv(path, TRAVEL_TIME_HEADER, rows)


def write_day_matrix(path, ttm) -> None:
    """Square table of days, origins down and destinations across; blank where unavailable."""
    n = len(ttm.labels)
    write_csv(path, ("origin", *ttm.labels), ([ttm.labels[a], *(_fmt(ttm.days[a, b]) for b in range(n))] for a in range(n)))


def read_travel_times(path):
    """Inverse of :func:`write_travel_times`: ``(labels, days, steps, status)``."""
    rows = read_csv(path)
    labels = list(dict.fromkeys(r["origin"] for r in rows))
    pos = {x: i for i, x in enumerate(labels)}
    n = len(labels)
    days, steps = np.full((n, n), np.nan), np.full((n, n), np.nan)
    status = np.full((n, n), "", dtype=object)
    for r in rows:
        a, b = pos[r["origin"]], pos[r["destination"]]
        days[a, b], steps[a, b], status[a, b] = _parse(r["days"]), _parse(r["steps"]), r["status"]
    return labels, days, steps, status


ENSEMBLE_HEADER = ("member", "kind", "seed", "days", "status")


def write_ensemble(path, result) -> None:
    write_csv(
        path,
        ENSEMBLE_HEADER,
        ((m, result.kind, seed, _fmt(d), st) for m, (seed, d, st) in enumerate(zip(result.seeds, result.days, result.statuses))),
    )


def read_ensemble(path) -> list[dict]:
    return [dict(member=int(r["member"]), kind=r["kind"], seed=int(r["seed"]), days=_parse(r["days"]), status=r["status"]) for r in read_csv(path)]


MAP_HEADER = ("cell", "lon", "lat", "steps", "days", "years", "n_edges")


def write_map(path, idx: SpatialIndex, times: dict[int, TravelTimeEstimate]) -> None:
    rows = []
    for c in sorted(times):
        e = times[c]
        p = idx.cell_centroid(c)
        rows.append((cell_to_hex(c), repr(p.lon), repr(p.lat), _fmt(e.steps), _fmt(e.days), _fmt(e.years), e.n_edges))
    write_csv(path, MAP_HEADER, rows)


def read_map(path) -> dict[int, float]:
    return {hex_to_cell(r["cell"]): float(r["days"]) for r in read_csv(path)}
