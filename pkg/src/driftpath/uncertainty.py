"""Bootstrap and random-rotation ensembles over the full estimation pipeline.

Every ensemble member draws from its own generator, seeded from the master
seed and the member's ``(kind, index)`` via :class:`numpy.random.SeedSequence`,
so results do not depend on execution order or on the number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .analysis import DISCONNECTED, OK, UNKNOWN, ZERO, PairOutcome, pair_outcome, prepare_matrix
from .errors import ConfigError, DataError
from .geo import GeoPoint, Rotation, rotate_point, sample_uniform_rotation
from .grid import SpatialIndex
from .ingest import TrajectoryStore, resample_with_replacement, rotate_store
from .pathing import PathGraph
from .transition import DEFAULT_CUTOFF_DAYS

NO_DATA = "no_data"
_KIND_CODES = {"bootstrap": 1, "rotation": 2, "rotation_bootstrap": 3}

Pair = tuple[GeoPoint, GeoPoint]


def member_seed(seed: int, kind: str, *index: int) -> int:
    """64-bit seed of one ensemble member, mixed from the master seed and its index."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(_KIND_CODES[kind], *index))
    return int(ss.generate_state(1, np.uint64)[0])


def sample_sd(x) -> float:
    """Sample standard deviation (divisor ``n - 1``); NaN below two values."""
    x = np.asarray(x, dtype=float)
    return float(np.std(x, ddof=1)) if x.size >= 2 else math.nan


@dataclass
class PairEnsemble:
    """Per-member travel times for one origin-destination pair.

    ``days`` holds one entry per member (NaN for failed members); members
    whose two endpoints share a cell count as successes with time 0.
    ``paths`` holds, per member, the path as a list of ``(lon, lat)`` cell
    centroids in the unrotated frame, or ``None``.
    """

    origin: GeoPoint
    destination: GeoPoint
    seeds: list[int]
    days: np.ndarray
    statuses: list[str]
    paths: list = field(default_factory=list)
    kind: str = "bootstrap"

    @property
    def n_members(self) -> int:
        return len(self.statuses)

    @property
    def success_mask(self) -> np.ndarray:
        return np.array([s in (OK, ZERO) for s in self.statuses], dtype=bool)

    @property
    def samples(self) -> np.ndarray:
        return self.days[self.success_mask]

    @property
    def failure_count(self) -> int:
        return int((~self.success_mask).sum())

    @property
    def zero_count(self) -> int:
        return sum(s == ZERO for s in self.statuses)

    @property
    def available(self) -> bool:
        return self.failure_count < self.n_members

    @property
    def mean(self) -> float:
        s = self.samples
        return float(s.mean()) if s.size else math.nan

    @property
    def sd(self) -> float:
        return sample_sd(self.samples)

    def bit_equal(self, other: "PairEnsemble") -> bool:
        return (
            self.seeds == other.seeds
            and self.statuses == other.statuses
            and np.array_equal(self.days, other.days, equal_nan=True)
            and self.paths == other.paths
        )


class BootstrapResult(PairEnsemble):
    """Bootstrap ensemble of one pair; ``sd`` is the bootstrap standard error."""


class RotationEnsembleResult(PairEnsemble):
    """Rotation ensemble of one pair; ``mean`` includes same-cell zeros."""


@dataclass(frozen=True)
class _Job:
    store: TrajectoryStore
    idx: SpatialIndex
    pairs: tuple
    cutoff_days: float
    barriers: tuple
    objective: str
    keep_paths: bool


_WORKER_JOB: _Job | None = None


def _init_worker(job: _Job) -> None:
    global _WORKER_JOB
    _WORKER_JOB = job


def _display_path(idx: SpatialIndex, outcome: PairOutcome, back: Rotation | None):
    if outcome.path is None:
        return None
    pts = [idx.cell_centroid(c) for c in outcome.path.cells]
    if back is not None:
        pts = [rotate_point(back, p) for p in pts]
    return [(p.lon, p.lat) for p in pts]


def _evaluate(job: _Job, store: TrajectoryStore, rotation: Rotation | None) -> list[tuple[str, float, object]]:
    if rotation is None or rotation.is_identity:
        pairs, barriers, back = job.pairs, job.barriers, None
    else:
        pairs = tuple((rotate_point(rotation, a), rotate_point(rotation, b)) for a, b in job.pairs)
        barriers = tuple(rotate_point(rotation, p) for p in job.barriers)
        back = rotation.inverse()
    idx = job.idx
    try:
        T = prepare_matrix(store, idx, job.cutoff_days, barriers)
    except DataError:
        return [(NO_DATA, math.nan, None)] * len(pairs)
    g = PathGraph(T)
    out = []
    for a, b in pairs:
        res = pair_outcome(g, idx, a, b, job.objective)
        path = _display_path(idx, res, back) if job.keep_paths else None
        out.append((res.status, res.days, path))
    return out


def _run_member(member):
    kind, seed, extra = member
    job = _WORKER_JOB
    rng = np.random.default_rng(seed)
    if kind == "bootstrap":
        return _evaluate(job, resample_with_replacement(job.store, rng), None)
    if kind == "rotation":
        r = extra if extra is not None else sample_uniform_rotation(rng)
        return _evaluate(job, rotate_store(job.store, r), r)
    if kind == "rotation_bootstrap":
        r = extra
        return _evaluate(job, resample_with_replacement(rotate_store(job.store, r), rng), r)
    raise ValueError(kind)


def _run_all(job: _Job, members: list, jobs: int):
    global _WORKER_JOB
    if jobs <= 1 or len(members) <= 1:
        previous, _WORKER_JOB = _WORKER_JOB, job
        try:
            return [_run_member(s) for s in members]
        finally:
            _WORKER_JOB = previous
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(job,)) as pool:
        return list(pool.map(_run_member, members))


def _collect(cls, job: _Job, seeds: list[int], results, kind: str) -> list:
    out = []
    for k, (a, b) in enumerate(job.pairs):
        statuses = [r[k][0] for r in results]
        days = np.array([r[k][1] for r in results], dtype=float)
        paths = [r[k][2] for r in results]
        out.append(cls(a, b, list(seeds), days, statuses, paths, kind))
    return out


def _make_job(s, idx, pairs, cutoff_days, barriers, objective, keep_paths) -> _Job:
    pairs = tuple((GeoPoint(*a), GeoPoint(*b)) for a, b in pairs)
    return _Job(s, idx, pairs, float(cutoff_days), tuple(barriers), objective, keep_paths)


def bootstrap_travel_times(
    s: TrajectoryStore,
    idx: SpatialIndex,
    pairs: Sequence[Pair],
    B: int,
    cutoff_days: float = DEFAULT_CUTOFF_DAYS,
    barriers: Sequence[GeoPoint] = (),
    seed: int = 0,
    objective: str = "most_likely",
    jobs: int = 1,
    keep_paths: bool = True,
) -> list[BootstrapResult]:
    """Travel times on ``B`` matrices estimated from trajectory resamples.

    Each member resamples whole trajectories with replacement, re-estimates
    the matrix, removes the barrier cells and queries every pair.
    """
    if B < 2:
        raise ConfigError("a bootstrap needs B >= 2")
    if len(s) == 0:
        raise DataError("cannot bootstrap an empty trajectory store")
    job = _make_job(s, idx, pairs, cutoff_days, barriers, objective, keep_paths)
    seeds = [member_seed(seed, "bootstrap", b) for b in range(B)]
    results = _run_all(job, [("bootstrap", x, None) for x in seeds], jobs)
    return _collect(BootstrapResult, job, seeds, results, "bootstrap")


def rotation_ensemble(
    s: TrajectoryStore,
    idx: SpatialIndex,
    pairs: Sequence[Pair],
    n_rot: int,
    cutoff_days: float = DEFAULT_CUTOFF_DAYS,
    barriers: Sequence[GeoPoint] = (),
    seed: int = 0,
    objective: str = "most_likely",
    jobs: int = 1,
    keep_paths: bool = True,
    rotations: Sequence[Rotation] | None = None,
) -> list[RotationEnsembleResult]:
    """Travel times after rotating data, query points and barriers together.

    Each member draws a uniform random rotation (or takes the next entry of
    ``rotations``), rotates the whole problem, re-discretises and re-estimates.
    Member paths are mapped back to the unrotated frame.
    """
    if rotations is not None:
        rotations = list(rotations)
        n_rot = len(rotations)
    if n_rot < 1:
        raise ConfigError("a rotation ensemble needs at least one rotation")
    job = _make_job(s, idx, pairs, cutoff_days, barriers, objective, keep_paths)
    seeds = [member_seed(seed, "rotation", r) for r in range(n_rot)]
    extras = rotations if rotations is not None else [None] * n_rot
    results = _run_all(job, [("rotation", x, e) for x, e in zip(seeds, extras)], jobs)
    return _collect(RotationEnsembleResult, job, seeds, results, "rotation")


def member_rotation(seed: int, index: int) -> Rotation:
    """The rotation drawn by member ``index`` of a seeded :func:`rotation_ensemble`."""
    return sample_uniform_rotation(np.random.default_rng(member_seed(seed, "rotation", index)))


def rotation_bootstrap_samples(
    s: TrajectoryStore,
    idx: SpatialIndex,
    pairs: Sequence[Pair],
    n_rot: int,
    B: int,
    cutoff_days: float = DEFAULT_CUTOFF_DAYS,
    barriers: Sequence[GeoPoint] = (),
    seed: int = 0,
    objective: str = "most_likely",
    jobs: int = 1,
) -> list[np.ndarray]:
    """``n_rot x B`` day arrays per pair (NaN for failures): B resamples inside each rotation."""
    if n_rot < 1 or B < 2:
        raise ConfigError("need n_rot >= 1 and B >= 2")
    job = _make_job(s, idx, pairs, cutoff_days, barriers, objective, False)
    rots = [member_rotation(seed, r) for r in range(n_rot)]
    specs = [("rotation_bootstrap", member_seed(seed, "rotation_bootstrap", r, b), rots[r]) for r in range(n_rot) for b in range(B)]
    results = _run_all(job, specs, jobs)
    out = []
    for k in range(len(job.pairs)):
        vals = np.array([res[k][1] if res[k][0] in (OK, ZERO) else math.nan for res in results])
        out.append(vals.reshape(n_rot, B))
    return out


def pooled_standard_error(rot_boot, mode: str = "pooled") -> float:
    """Spread of an ``n_rot x B`` table of bootstrap samples under rotations.

    ``pooled`` takes the sample standard deviation of all entries at once, so
    it reflects both grid-placement and data-sampling uncertainty.
    ``per_rotation_mean`` averages the within-rotation standard deviations,
    which reflects data-sampling uncertainty alone.  NaN entries are ignored.
    """
    x = np.asarray(rot_boot, dtype=float)
    if x.ndim != 2:
        raise ConfigError("expected an n_rot x B table")
    if mode == "pooled":
        vals = x[np.isfinite(x)]
        if vals.size < 2:
            raise DataError("fewer than two usable samples")
        return sample_sd(vals)
    if mode == "per_rotation_mean":
        per_row = [sample_sd(row[np.isfinite(row)]) for row in x]
        per_row = [v for v in per_row if not math.isnan(v)]
        if not per_row:
            raise DataError("no rotation has two usable samples")
        return float(np.mean(per_row))
    raise ConfigError(f"unknown pooling mode {mode!r}")


STATUSES = (OK, ZERO, DISCONNECTED, UNKNOWN, NO_DATA)
