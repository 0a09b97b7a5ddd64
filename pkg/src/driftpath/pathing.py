"""Most likely paths and expected travel times on a transition matrix.

The product of transition probabilities along a path is maximised by a
shortest-path search on edge weights ``-ln T[i][j]``, which are non-negative.
Each edge ``i -> j`` of a path is traversed after a shifted geometric holding
time with mean ``T[i][i] / T[i][j] + 1`` cutoff periods.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from heapq import heappop, heappush
from typing import Literal

import numpy as np

from .errors import ComputationError, DisconnectedError
from .grid import CellId
from .transition import TransitionMatrix

Objective = Literal["most_likely", "shortest_time"]
Direction = Literal["from_anchor", "to_anchor"]
OBJECTIVES = ("most_likely", "shortest_time")
DIRECTIONS = ("from_anchor", "to_anchor")


@dataclass(frozen=True)
class Path:
    """Cells from origin to destination, consecutive entries distinct.

    A path from a cell to itself holds just that cell and has no edges.
    """

    cells: tuple[int, ...]
    log_probability: float = 0.0

    @property
    def origin(self) -> int:
        return self.cells[0]

    @property
    def destination(self) -> int:
        return self.cells[-1]

    @property
    def n_edges(self) -> int:
        return len(self.cells) - 1

    @property
    def edges(self):
        return list(zip(self.cells[:-1], self.cells[1:]))

    @property
    def probability(self) -> float:
        return math.exp(self.log_probability)


@dataclass(frozen=True)
class TravelTimeEstimate:
    """Expected travel time in cutoff periods (``steps``) and in days."""

    steps: float
    days: float
    per_edge: tuple[float, ...] = ()
    n_edges: int = 0

    @property
    def years(self) -> float:
        return self.days / 365.25


class PathGraph:
    """Directed graph over the states of ``T`` with one edge per positive off-diagonal entry.

    Two weights are kept per edge: ``-ln T[i][j]`` (most likely objective) and
    the expected holding time ``T[i][i] / T[i][j] + 1`` (shortest-time objective).
    """

    def __init__(self, T: TransitionMatrix):
        self.matrix = T
        P = T.probabilities
        n = T.n_states
        rows = np.repeat(np.arange(n), np.diff(P.indptr))
        cols = P.indices
        vals = P.data
        keep = (rows != cols) & (vals > 0)
        rows, cols, vals = rows[keep], cols[keep], vals[keep]
        stay = T.diagonal()
        self.n_vertices = n
        self.n_edges = int(rows.size)
        self._csr = self._pack(n, rows, cols, -np.log(vals), stay[rows] / vals + 1.0)
        self._csr_rev = self._pack(n, cols, rows, -np.log(vals), stay[rows] / vals + 1.0)

    @staticmethod
    def _pack(n, src, dst, w_log, w_time):
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return (
            indptr.tolist(),
            dst.tolist(),
            {"most_likely": w_log[order].tolist(), "shortest_time": w_time[order].tolist()},
        )

    @property
    def states(self) -> np.ndarray:
        return self.matrix.states

    def edge_weights(self) -> dict[tuple[int, int], float]:
        """``{(i, j): -ln T[i][j]}`` keyed by cell id."""
        indptr, indices, w = self._csr
        st = self.states.tolist()
        out = {}
        for u in range(self.n_vertices):
            for k in range(indptr[u], indptr[u + 1]):
                out[(st[u], st[indices[k]])] = w["most_likely"][k]
        return out

    def search(self, source: int, objective: Objective = "most_likely", reverse: bool = False, target: int = -1):
        """Single-source Dijkstra over matrix indices.

        Returns ``(dist, pred, order, via)``: distances, tree predecessors,
        settle order, and for each vertex the position of its tree edge in
        :meth:`edge_list`.  Among equal-distance predecessors the one with the
        smallest index (equivalently smallest cell id) is kept.  With
        ``reverse`` the edges are flipped, so ``pred[v]`` is the next hop from
        ``v`` towards ``source``.
        """
        if objective not in OBJECTIVES:
            raise ValueError(f"unknown objective {objective!r}")
        indptr, indices, weights = self._csr_rev if reverse else self._csr
        weights = weights[objective]
        n = self.n_vertices
        inf = math.inf
        dist = [inf] * n
        pred = [-1] * n
        via = [-1] * n
        done = [False] * n
        dist[source] = 0.0
        heap = [(0.0, source)]
        order = []
        while heap:
            du, u = heappop(heap)
            if done[u]:
                continue
            done[u] = True
            order.append(u)
            if u == target:
                break
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if done[v]:
                    continue
                nd = du + weights[k]
                if nd < dist[v]:
                    dist[v] = nd
                    pred[v] = u
                    via[v] = k
                    heappush(heap, (nd, v))
                elif nd == dist[v] and u < pred[v]:
                    pred[v] = u
                    via[v] = k
        return dist, pred, order, via

    def edge_list(self, objective: Objective, reverse: bool = False) -> list[float]:
        return (self._csr_rev if reverse else self._csr)[2][objective]


def build_graph(T: TransitionMatrix) -> PathGraph:
    return PathGraph(T)


def _as_graph(g) -> PathGraph:
    return g if isinstance(g, PathGraph) else PathGraph(g)


def _log_probability(T: TransitionMatrix, cells) -> float:
    return math.fsum(math.log(T.prob(a, b)) for a, b in zip(cells[:-1], cells[1:]))


def _best_path(g: PathGraph, o: CellId, d: CellId, objective: Objective) -> Path:
    T = g.matrix
    io, id_ = T.index(o), T.index(d)
    if io == id_:
        return Path((int(o),), 0.0)
    dist, pred, _, _ = g.search(io, objective, target=id_)
    if math.isinf(dist[id_]):
        raise DisconnectedError(int(o), int(d))
    chain = [id_]
    while chain[-1] != io:
        chain.append(pred[chain[-1]])
    cells = tuple(int(T.states[k]) for k in reversed(chain))
    if objective == "most_likely":
        return Path(cells, 0.0 - dist[id_])
    return Path(cells, _log_probability(T, cells))


def most_likely_path(g, o: CellId, d: CellId) -> Path:
    """Path from ``o`` to ``d`` maximising the product of transition probabilities.

    Raises
    ------
    UnknownStateError
        If ``o`` or ``d`` is not a state.
    DisconnectedError
        If ``d`` cannot be reached from ``o``.
    """
    return _best_path(_as_graph(g), o, d, "most_likely")


def negbinom_pmf(a: float, k: int) -> float:
    """``P(k) = a**(k-1) * (1-a)`` for ``k >= 1``: holding time of a single edge."""
    if k < 1:
        return 0.0
    if a == 0.0:
        return 1.0 if k == 1 else 0.0
    return a ** (k - 1) * (1.0 - a)


def holding_time_pmf(T: TransitionMatrix, i: CellId, j: CellId, k: int) -> float:
    """Probability that the jump ``i -> j`` happens exactly ``k`` periods after entering ``i``,
    conditional on the chain only staying in ``i`` or moving to ``j``."""
    if int(i) == int(j):
        raise ValueError("holding time needs two distinct cells")
    stay, move = T.prob(i, i), T.prob(i, j)
    if stay + move <= 0:
        raise ComputationError(f"T[{int(i):x}][{int(i):x}] and T[{int(i):x}][{int(j):x}] are both zero")
    return negbinom_pmf(stay / (stay + move), k)


def edge_expected_steps(stay: float, move: float) -> float:
    return stay / move + 1.0


def expected_travel_time(T: TransitionMatrix, p: Path) -> TravelTimeEstimate:
    """Sum of per-edge expected holding times along ``p``."""
    per_edge = []
    for a, b in p.edges:
        move = T.prob(a, b)
        if move <= 0:
            raise ComputationError(f"edge {a:x} -> {b:x} has zero transition probability")
        per_edge.append(edge_expected_steps(T.prob(a, a), move))
    steps = 0.0
    for x in per_edge:
        steps += x
    return TravelTimeEstimate(steps, steps * T.lagrangian_cutoff_days, tuple(per_edge), len(per_edge))


def shortest_time_path(T, o: CellId, d: CellId) -> tuple[Path, TravelTimeEstimate]:
    """Path minimising the expected travel time, and that time."""
    g = _as_graph(T)
    path = _best_path(g, o, d, "shortest_time")
    return path, expected_travel_time(g.matrix, path)


@dataclass
class PathTree:
    """Result of one single-source search, able to rebuild any tree path."""

    graph: PathGraph
    anchor: int
    direction: str
    objective: str
    pred: list
    order: list
    via: list

    def path(self, c: CellId) -> Path:
        T = self.graph.matrix
        k = T.index(c)
        a = T.index(self.anchor)
        if k != a and self.pred[k] < 0:
            raise DisconnectedError(*((self.anchor, int(c)) if self.direction == "from_anchor" else (int(c), self.anchor)))
        chain = [k]
        while chain[-1] != a:
            chain.append(self.pred[chain[-1]])
        if self.direction == "from_anchor":
            chain.reverse()
        cells = tuple(int(T.states[i]) for i in chain)
        return Path(cells, _log_probability(T, cells))


def shortest_path_tree(T, anchor: CellId, direction: Direction = "from_anchor", objective: Objective = "most_likely") -> PathTree:
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    g = _as_graph(T)
    a = g.matrix.index(anchor)
    _, pred, order, via = g.search(a, objective, reverse=direction == "to_anchor")
    return PathTree(g, int(anchor), direction, objective, pred, order, via)


def one_to_all_times(
    T,
    anchor: CellId,
    direction: Direction = "from_anchor",
    objective: Objective = "most_likely",
) -> dict[int, TravelTimeEstimate]:
    """Expected travel time between ``anchor`` and every reachable state.

    One search builds a path tree under ``objective``; times are then summed
    along the tree paths, so for ``most_likely`` each value is the expected
    time of that cell's most likely path.  Unreachable cells are omitted.
    Per-edge breakdowns are not kept (use :meth:`PathTree.path`).
    """
    tree = shortest_path_tree(T, anchor, direction, objective)
    g = tree.graph
    times = g.edge_list("shortest_time", reverse=direction == "to_anchor")
    a = g.matrix.index(anchor)
    steps = {a: 0.0}
    depth = {a: 0}
    for v in tree.order[1:]:
        u = tree.pred[v]
        # from_anchor sums in path order, matching expected_travel_time exactly
        if direction == "from_anchor":
            steps[v] = steps[u] + times[tree.via[v]]
        else:
            steps[v] = times[tree.via[v]] + steps[u]
        depth[v] = depth[u] + 1
    tl = g.matrix.lagrangian_cutoff_days
    st = g.matrix.states.tolist()
    return {st[v]: TravelTimeEstimate(x, x * tl, (), depth[v]) for v, x in steps.items()}
