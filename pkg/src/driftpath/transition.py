"""Discretisation of trajectories and gap-method transition matrix estimation.

A trajectory sampled every ``dt`` hours is turned into cell ids; every pair of
fixes ``gap_steps = T_L * 24 / dt`` samples apart contributes one count to the
row of the earlier cell.  Rows are normalised by their total counts.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .errors import ComputationError, DataError, UnknownStateError
from .geo import GeoPoint
from .grid import CellId, SpatialIndex
from .ingest import Trajectory, TrajectoryStore

log = logging.getLogger(__name__)

DEFAULT_CUTOFF_DAYS = 5.0

#: Panama (two points) and the Strait of Gibraltar (two points), as (lon, lat)
DEFAULT_BARRIERS = (
    GeoPoint(-79.7, 9.07),
    GeoPoint(-80.73, 8.66),
    GeoPoint(-5.6, 36.0),
    GeoPoint(-5.61, 35.88),
)


@dataclass(frozen=True, eq=False)
class CellSequence:
    cells: np.ndarray
    sample_interval: float

    def __len__(self):
        return self.cells.size


def discretize(t: Trajectory, idx: SpatialIndex) -> CellSequence:
    return CellSequence(idx.cells_of(t.lon, t.lat), t.sample_interval)


def gap_steps_for(cutoff_days: float, sample_interval_hours: float) -> int:
    """Number of samples spanning ``cutoff_days``; must be a positive integer."""
    steps = cutoff_days * 24.0 / sample_interval_hours
    if not math.isfinite(steps) or steps < 1 - 1e-9 or abs(steps - round(steps)) > 1e-9:
        raise DataError(
            f"a cutoff of {cutoff_days:g} days is not a whole number of "
            f"{sample_interval_hours:g} h samples"
        )
    return int(round(steps))


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """Sparse transition probabilities over the visited cells.

    ``states`` is sorted ascending, so matrix index order equals CellId order.
    Rows of cells that were only ever observed as a pair's destination are
    empty and have ``row_counts == 0``.
    """

    states: np.ndarray
    probabilities: sp.csr_matrix
    row_counts: np.ndarray
    lagrangian_cutoff_days: float = DEFAULT_CUTOFF_DAYS
    gap_steps: int = 20
    sample_interval: float = 6.0
    grid: dict = field(default_factory=dict)
    edited: bool = False
    removed: tuple = ()

    def __post_init__(self):
        states = np.asarray(self.states, dtype=np.int64)
        if states.size > 1 and np.any(np.diff(states) <= 0):
            raise ValueError("states must be strictly increasing")
        n = states.size
        P = sp.csr_matrix(self.probabilities, dtype=float)
        if P.shape != (n, n):
            raise ValueError("probability matrix shape does not match the state count")
        P.sort_indices()
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "probabilities", P)
        object.__setattr__(self, "row_counts", np.asarray(self.row_counts, dtype=np.int64))
        object.__setattr__(self, "_pos", {int(c): i for i, c in enumerate(states.tolist())})

    @property
    def n_states(self) -> int:
        return self.states.size

    def __contains__(self, c) -> bool:
        return int(c) in self._pos

    def index(self, c: CellId) -> int:
        try:
            return self._pos[int(c)]
        except KeyError:
            raise UnknownStateError(int(c)) from None

    def prob(self, i: CellId, j: CellId) -> float:
        """``T[i][j]`` addressed by cell id (0 for absent entries)."""
        return float(self.probabilities[self.index(i), self.index(j)])

    def self_prob(self, i: CellId) -> float:
        return self.prob(i, i)

    def row(self, i: CellId) -> dict[int, float]:
        r = self.index(i)
        P = self.probabilities
        lo, hi = P.indptr[r], P.indptr[r + 1]
        return {int(self.states[k]): float(v) for k, v in zip(P.indices[lo:hi], P.data[lo:hi])}

    def row_sums(self) -> np.ndarray:
        return np.asarray(self.probabilities.sum(axis=1)).ravel()

    def diagonal(self) -> np.ndarray:
        return self.probabilities.diagonal()

    def check_stochastic(self, tol: float = 1e-12) -> float:
        """Largest row-sum deviation over non-empty rows; raises above ``tol``."""
        if self.edited:
            raise ComputationError("edited matrices are not row-stochastic by design")
        sums = self.row_sums()
        nonempty = self.row_counts > 0
        dev = float(np.max(np.abs(sums[nonempty] - 1.0))) if nonempty.any() else 0.0
        if dev > tol or np.any(sums[~nonempty] != 0):
            raise ComputationError(f"row sums deviate from 1 by {dev:.3e}")
        return dev

    def same_as(self, other: "TransitionMatrix") -> bool:
        """Exact equality of states, entries, counts and metadata."""
        a, b = self.probabilities, other.probabilities
        return (
            np.array_equal(self.states, other.states)
            and np.array_equal(self.row_counts, other.row_counts)
            and np.array_equal(a.indptr, b.indptr)
            and np.array_equal(a.indices, b.indices)
            and np.array_equal(a.data, b.data)
            and self.lagrangian_cutoff_days == other.lagrangian_cutoff_days
            and self.gap_steps == other.gap_steps
            and self.edited == other.edited
        )


def count_pairs(cell_seqs: Sequence[np.ndarray], gap_steps: int) -> tuple[np.ndarray, np.ndarray]:
    """Origins and destinations of all overlapping gap pairs, pooled."""
    src, dst = [], []
    for cells in cell_seqs:
        if cells.size > gap_steps:
            src.append(cells[:-gap_steps])
            dst.append(cells[gap_steps:])
    if not src:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    return np.concatenate(src), np.concatenate(dst)


def matrix_from_pairs(src, dst, *, cutoff_days, gap_steps, sample_interval, grid=None, min_row_count=0):
    """Normalised counts of ``(src[k], dst[k])`` pairs."""
    states, inv = np.unique(np.concatenate([src, dst]), return_inverse=True)
    n = states.size
    i, j = inv[: src.size], inv[src.size :]
    counts = sp.coo_matrix((np.ones(src.size, dtype=np.int64), (i, j)), shape=(n, n)).tocsr()
    counts.sum_duplicates()
    row_counts = np.bincount(i, minlength=n).astype(np.int64)
    if min_row_count > 0:
        thin = (row_counts > 0) & (row_counts < min_row_count)
        if thin.any():
            keep = sp.diags((~thin).astype(np.int64))
            counts = (keep @ counts).tocsr()
            counts.eliminate_zeros()
            row_counts = np.where(thin, 0, row_counts)
            log.info("emptied %d rows with fewer than %d pairs", int(thin.sum()), min_row_count)
    data = counts.data.astype(float)
    rows = np.repeat(np.arange(n), np.diff(counts.indptr))
    data /= row_counts[rows]
    P = sp.csr_matrix((data, counts.indices, counts.indptr), shape=(n, n))
    return TransitionMatrix(
        states=states,
        probabilities=P,
        row_counts=row_counts,
        lagrangian_cutoff_days=float(cutoff_days),
        gap_steps=gap_steps,
        sample_interval=sample_interval,
        grid=dict(grid or {}),
    )


def estimate_matrix(
    s: TrajectoryStore,
    idx: SpatialIndex,
    cutoff_days: float = DEFAULT_CUTOFF_DAYS,
    min_row_count: int = 0,
) -> TransitionMatrix:
    """Estimate ``T`` from every pair of fixes ``cutoff_days`` apart.

    ``T[s][q]`` is the fraction of pairs starting in ``s`` that end in ``q``,
    pooled over all trajectories.  The state set is every cell seen as either
    end of at least one pair.  ``min_row_count`` empties rows supported by
    fewer pairs (off by default).
    """
    if len(s) == 0:
        raise DataError("cannot estimate a transition matrix from an empty store")
    gap = gap_steps_for(cutoff_days, s.sample_interval)
    seqs = [discretize(t, idx).cells for t in s.trajectories]
    src, dst = count_pairs(seqs, gap)
    if src.size == 0:
        raise DataError(f"no trajectory is longer than the {gap}-sample gap")
    return matrix_from_pairs(
        src,
        dst,
        cutoff_days=cutoff_days,
        gap_steps=gap,
        sample_interval=s.sample_interval,
        grid=idx.describe(),
        min_row_count=min_row_count,
    )


def from_dense(states, dense, *, cutoff_days=DEFAULT_CUTOFF_DAYS, gap_steps=None, row_counts=None, edited=False):
    """Wrap an explicit probability table, e.g. a hand-built test matrix.

    ``states`` may be in any order; rows and columns are reordered to match
    ascending ids.
    """
    states = np.asarray(states, dtype=np.int64)
    dense = np.asarray(dense, dtype=float)
    order = np.argsort(states)
    dense = dense[np.ix_(order, order)]
    if row_counts is None:
        row_counts = (dense.sum(axis=1) > 0).astype(np.int64)
    else:
        row_counts = np.asarray(row_counts)[order]
    return TransitionMatrix(
        states=states[order],
        probabilities=sp.csr_matrix(dense),
        row_counts=row_counts,
        lagrangian_cutoff_days=float(cutoff_days),
        gap_steps=gap_steps if gap_steps is not None else int(round(cutoff_days * 4)),
        edited=edited,
    )


def remove_states(T: TransitionMatrix, barriers: Sequence[GeoPoint], idx: SpatialIndex) -> TransitionMatrix:
    """Delete the rows and columns of every cell containing a barrier point.

    Remaining rows are not renormalised: probability mass that flowed into a
    removed cell is lost, and the result is flagged ``edited``.
    """
    if not barriers:
        return T
    cells = sorted({idx.cell_of(p) for p in barriers})
    present = [c for c in cells if c in T]
    for c in cells:
        if c not in T:
            log.info("barrier cell %x is not a state; nothing removed for it", c)
    if not present:
        return T
    drop = np.array([T.index(c) for c in present])
    keep = np.setdiff1d(np.arange(T.n_states), drop)
    P = T.probabilities[keep][:, keep].tocsr()
    log.info("removed %d barrier states: %s", len(present), ", ".join(f"{c:x}" for c in present))
    return replace(
        T,
        states=T.states[keep],
        probabilities=P,
        row_counts=T.row_counts[keep],
        edited=True,
        removed=tuple(T.removed) + tuple(present),
    )


def inject_transition(
    T: TransitionMatrix,
    origin: GeoPoint,
    target: GeoPoint,
    idx: SpatialIndex,
    crossing_days: float,
) -> TransitionMatrix:
    """Add an artificial link tuned to a prescribed expected crossing time.

    With ``e`` and ``w`` the cells of ``origin`` and ``target``, ``T[e][w]`` is
    set so that ``(T[e][e] / T[e][w] + 1) * T_L == crossing_days``.  Row ``e``
    then no longer sums to one and the matrix is flagged ``edited``.
    """
    tl = T.lagrangian_cutoff_days
    if not crossing_days > tl:
        raise ComputationError(f"crossing time must exceed the cutoff of {tl:g} days")
    e, w = idx.cell_of(origin), idx.cell_of(target)
    if e == w:
        raise ComputationError("origin and target fall in the same cell")
    stay = T.self_prob(e)
    T.index(w)
    if stay <= 0:
        raise ComputationError(f"cell {e:x} has no self-transition; crossing time cannot be tuned")
    P = T.probabilities.tolil(copy=True)
    P[T.index(e), T.index(w)] = stay / (crossing_days / tl - 1.0)
    return replace(T, probabilities=P.tocsr(), edited=True)
