"""Synthetic trajectory worlds with hand-computable transition structure.

Used by the test suite and by ``driftpath validate``.
"""

from __future__ import annotations

import numpy as np

from .ingest import TrajectoryStore


def random_store(
    rng: np.random.Generator,
    n_traj: int,
    max_len: int,
    region=(0.0, 10.0, 0.0, 10.0),
    step_deg: float = 0.8,
    sample_interval: float = 6.0,
) -> TrajectoryStore:
    """Clipped Gaussian random walks inside a lon-lat box ``(lon0, lon1, lat0, lat1)``."""
    lon0, lon1, lat0, lat1 = region
    tracks = []
    for _ in range(n_traj):
        n = int(rng.integers(1, max_len + 1))
        steps = rng.normal(0.0, step_deg, size=(n, 2))
        steps[0] = (rng.uniform(lon0, lon1), rng.uniform(lat0, lat1))
        path = np.cumsum(steps, axis=0)
        lon = np.clip(path[:, 0], lon0, lon1 - 1e-9)
        lat = np.clip(path[:, 1], lat0, lat1 - 1e-9)
        tracks.append((lon, lat))
    return TrajectoryStore.from_arrays(tracks, sample_interval)


def ring_world(n_cells: int = 12, gap_steps: int = 20, laps: int = 2, sample_interval: float = 6.0) -> TrajectoryStore:
    """Deterministic eastward flow along the equator advancing one cell per cutoff period.

    Meant for a lon-lat grid of ``360 / n_cells`` degree cells.  A single
    drifter starts a quarter-degree east of a cell edge and moves
    ``width / gap_steps`` degrees per sample, so every gap pair joins a cell
    to its eastern neighbour and ``T[i][i+1 mod n] = 1``.
    """
    width = 360.0 / n_cells
    step = width / gap_steps
    n = laps * n_cells * gap_steps + 1
    lon = -180.0 + 0.25 + step * np.arange(n)
    lon = np.mod(lon + 180.0, 360.0) - 180.0
    lat = np.full(n, width / 4.0 if width / 4.0 < 90 else 0.5)
    return TrajectoryStore.from_arrays([(lon, lat)], sample_interval)


def chain_store(
    rng: np.random.Generator,
    moves: dict,
    centres: dict,
    n_traj: int,
    n_periods: int,
    gap_steps: int,
    jitter: float = 0.0,
    sample_interval: float = 6.0,
) -> TrajectoryStore:
    """Trajectories that follow a cell-level random walk, one move per cutoff period.

    ``moves[c]`` lists the cells reachable from ``c`` in one period (including
    ``c`` itself to allow dwelling); ``centres[c]`` is a ``(lon, lat)`` inside
    cell ``c``.  Each walk state is held for ``gap_steps`` samples, so every
    gap pair of the store is one walk transition.  ``jitter`` adds uniform
    noise of that half-width (degrees) and must keep points inside their cell.
    """
    keys = sorted(moves)
    tracks = []
    for _ in range(n_traj):
        c = keys[int(rng.integers(len(keys)))]
        walk = [c]
        for _ in range(n_periods - 1):
            options = moves[c]
            c = options[int(rng.integers(len(options)))]
            walk.append(c)
        pts = np.repeat(np.array([centres[w] for w in walk], dtype=float), gap_steps, axis=0)
        if jitter:
            pts = pts + rng.uniform(-jitter, jitter, size=pts.shape)
        tracks.append((pts[:, 0], pts[:, 1]))
    return TrajectoryStore.from_arrays(tracks, sample_interval)


def two_basin_world(rng: np.random.Generator, n_traj: int = 60, n_periods: int = 40, gap_steps: int = 20) -> TrajectoryStore:
    """Two 3x3 basins of 1-degree cells joined only through the cell ``[3,4) x [1,2)``.

    West basin: lon 0-3, east basin: lon 4-7, latitude 0-3.  The corridor cell
    is a cut vertex: every path between the basins passes through it.
    """
    west = [(x, y) for x in range(3) for y in range(3)]
    east = [(x, y) for x in range(4, 7) for y in range(3)]
    gate = (3, 1)
    cells = set(west) | set(east) | {gate}

    def nbrs(c):
        x, y = c
        out = [c]
        for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            q = (x + dx, y + dy)
            if q in cells:
                out.append(q)
        return out

    moves = {c: nbrs(c) for c in cells}
    centres = {c: (c[0] + 0.5, c[1] + 0.5) for c in cells}
    return chain_store(rng, moves, centres, n_traj, n_periods, gap_steps, jitter=0.3)


TWO_BASIN_GATE = (3.5, 1.5)


def solid_body_flow(
    rng: np.random.Generator,
    n_traj: int = 500,
    n_samples: int = 200,
    deg_per_day: float = 1.0,
    band_deg: float = 6.0,
    spread_deg: float = 0.05,
    sample_interval: float = 6.0,
) -> TrajectoryStore:
    """Eastward solid-body rotation about the polar axis, within ``band_deg`` of the equator.

    The flow is a rigid rotation of the sphere, so rotating the whole dataset
    gives the same flow about a rotated axis: travel times between rotated
    query points change only through the grid discretisation.
    ``spread_deg`` adds a cross-stream random walk of that standard deviation
    per sample, which lets the chain move between neighbouring streamlines.
    """
    step = deg_per_day * sample_interval / 24.0
    tracks = []
    for _ in range(n_traj):
        lat0 = np.degrees(np.arcsin(rng.uniform(-1, 1) * np.sin(np.radians(band_deg))))
        lon = rng.uniform(-180, 180) + step * np.arange(n_samples)
        lat = lat0 + np.cumsum(np.r_[0.0, rng.normal(0.0, spread_deg, n_samples - 1)]) if spread_deg else np.full(n_samples, lat0)
        tracks.append((np.mod(lon + 180.0, 360.0) - 180.0, np.clip(lat, -89.0, 89.0)))
    return TrajectoryStore.from_arrays(tracks, sample_interval)
