"""Pairwise travel-time tables, rank correlation and cutoff sensitivity."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from .errors import ConfigError, DisconnectedError, UnknownStateError
from .geo import GeoPoint
from .grid import SpatialIndex
from .ingest import TrajectoryStore
from .pathing import Path, PathGraph, expected_travel_time, most_likely_path, shortest_time_path
from .transition import TransitionMatrix, estimate_matrix, gap_steps_for, remove_states

OK, ZERO, DISCONNECTED, UNKNOWN = "ok", "zero", "disconnected", "unknown_state"


@dataclass(frozen=True)
class PairOutcome:
    """Result of one origin-destination query.

    ``status`` is ``ok`` (a path was found), ``zero`` (both points fall in
    one cell, time 0), ``disconnected`` or ``unknown_state``.
    """

    status: str
    days: float = math.nan
    steps: float = math.nan
    path: Path | None = None

    @property
    def succeeded(self) -> bool:
        return self.status in (OK, ZERO)


def pair_outcome(g: PathGraph, idx: SpatialIndex, origin: GeoPoint, destination: GeoPoint, objective: str = "most_likely") -> PairOutcome:
    o, d = idx.cell_of(origin), idx.cell_of(destination)
    if o == d:
        return PairOutcome(ZERO, 0.0, 0.0, Path((o,), 0.0))
    try:
        if objective == "most_likely":
            path = most_likely_path(g, o, d)
            est = expected_travel_time(g.matrix, path)
        else:
            path, est = shortest_time_path(g, o, d)
    except UnknownStateError:
        return PairOutcome(UNKNOWN)
    except DisconnectedError:
        return PairOutcome(DISCONNECTED)
    return PairOutcome(OK, est.days, est.steps, path)


def prepare_matrix(
    s: TrajectoryStore,
    idx: SpatialIndex,
    cutoff_days: float,
    barriers: Sequence[GeoPoint] = (),
    min_row_count: int = 0,
) -> TransitionMatrix:
    """Estimate ``T`` and strip the barrier cells."""
    T = estimate_matrix(s, idx, cutoff_days, min_row_count=min_row_count)
    return remove_states(T, list(barriers), idx)


@dataclass
class TravelTimeMatrix:
    """Directional travel times between labelled locations.

    ``days[a, b]`` is the time from ``a`` to ``b`` (NaN unless the status is
    ``ok``); the diagonal is 0 with status ``ok``.
    """

    labels: list[str]
    locations: list[GeoPoint]
    days: np.ndarray
    steps: np.ndarray
    status: np.ndarray
    paths: dict = field(default_factory=dict)

    @property
    def attempted(self) -> int:
        n = len(self.labels)
        return n * (n - 1)

    def years(self) -> np.ndarray:
        return self.days / 365.25


def travel_time_matrix(
    T: TransitionMatrix | PathGraph,
    idx: SpatialIndex,
    locations: Sequence[GeoPoint],
    labels: Sequence[str] | None = None,
    objective: str = "most_likely",
) -> TravelTimeMatrix:
    """Query every ordered pair of distinct locations on one graph."""
    g = T if isinstance(T, PathGraph) else PathGraph(T)
    n = len(locations)
    labels = [str(i + 1) for i in range(n)] if labels is None else [str(x) for x in labels]
    days = np.full((n, n), np.nan)
    steps = np.full((n, n), np.nan)
    status = np.full((n, n), OK, dtype=object)
    paths = {}
    for a in range(n):
        days[a, a] = steps[a, a] = 0.0
        for b in range(n):
            if a == b:
                continue
            out = pair_outcome(g, idx, locations[a], locations[b], objective)
            status[a, b] = OK if out.status == ZERO else out.status
            if out.succeeded:
                days[a, b], steps[a, b] = out.days, out.steps
                paths[(a, b)] = out.path
    return TravelTimeMatrix(list(labels), list(locations), days, steps, status, paths)


def spearman(a: Sequence[float], b: Sequence[float]) -> float:
    """Rank correlation: Pearson correlation of average ranks.

    Returns NaN if either sequence is constant (the correlation is undefined).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or a.size < 2:
        raise ConfigError("spearman needs two sequences of equal length >= 2")
    ra, rb = stats.rankdata(a), stats.rankdata(b)
    if np.all(ra == ra[0]) or np.all(rb == rb[0]):
        return math.nan
    ra -= ra.mean()
    rb -= rb.mean()
    r = float(ra @ rb / math.sqrt((ra @ ra) * (rb @ rb)))
    return max(-1.0, min(1.0, r))


@dataclass(frozen=True)
class SensitivityRow:
    cutoff_days: float
    correlation: float
    n_used: int
    n_excluded: int


def compare_offdiagonal(ref: TravelTimeMatrix, other: TravelTimeMatrix) -> SensitivityRow:
    n = len(ref.labels)
    off = ~np.eye(n, dtype=bool)
    ok = off & (ref.status == OK) & (other.status == OK)
    used = int(ok.sum())
    excluded = int(off.sum()) - used
    rho = spearman(ref.days[ok], other.days[ok]) if used >= 2 else math.nan
    return SensitivityRow(math.nan, rho, used, excluded)


def sensitivity(
    s: TrajectoryStore,
    idx: SpatialIndex,
    locations: Sequence[GeoPoint],
    cutoffs: Sequence[float],
    reference: float,
    barriers: Sequence[GeoPoint] = (),
    objective: str = "most_likely",
    labels: Sequence[str] | None = None,
) -> tuple[list[SensitivityRow], dict[float, TravelTimeMatrix]]:
    """Rank correlation of off-diagonal travel times at each cutoff against ``reference``.

    Pairs that fail at either cutoff are left out of that comparison and counted.
    """
    cutoffs = [float(c) for c in cutoffs]
    if len(cutoffs) < 2:
        raise ConfigError("at least two cutoffs are needed")
    if float(reference) not in cutoffs:
        raise ConfigError(f"reference cutoff {reference:g} is not among the cutoffs")
    for c in cutoffs:
        gap_steps_for(c, s.sample_interval)
    tables = {}
    for c in cutoffs:
        T = prepare_matrix(s, idx, c, barriers)
        tables[c] = travel_time_matrix(T, idx, locations, labels, objective)
    ref = tables[float(reference)]
    rows = []
    for c in cutoffs:
        r = compare_offdiagonal(ref, tables[c])
        rows.append(SensitivityRow(c, r.correlation, r.n_used, r.n_excluded))
    return rows, tables
