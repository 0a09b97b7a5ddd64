"""Brute-force validators for transition matrices and path searches.

These deliberately avoid the code paths they check: the chain simulator and
the holding-time sampler draw random numbers instead of using closed forms,
and path enumeration visits every simple path instead of searching.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .errors import ComputationError, ConfigError, DisconnectedError
from .grid import CellId, SpatialIndex
from .ingest import TrajectoryStore
from .pathing import Path, PathGraph, expected_travel_time, most_likely_path, shortest_time_path
from .transition import TransitionMatrix, from_dense, gap_steps_for

MAX_ENUMERATION_STATES = 12


@dataclass(frozen=True)
class ChainRun:
    states: tuple[int, ...]
    steps: int


def simulate_chain(T: TransitionMatrix, start: CellId, max_steps: int, rng: np.random.Generator) -> ChainRun:
    """Sample a realisation of the chain from ``start``.

    Stops after ``max_steps`` transitions or on reaching a state whose row is empty.
    """
    if T.edited:
        raise ComputationError("cannot simulate an edited matrix: its rows need not sum to 1")
    P = T.probabilities
    k = T.index(start)
    out = [int(T.states[k])]
    for _ in range(max_steps):
        lo, hi = P.indptr[k], P.indptr[k + 1]
        if lo == hi:
            break
        cdf = np.cumsum(P.data[lo:hi])
        pick = min(int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right")), hi - lo - 1)
        k = int(P.indices[lo + pick])
        out.append(int(T.states[k]))
    return ChainRun(tuple(out), len(out) - 1)


def constrained_edge_time_mc(T: TransitionMatrix, i: CellId, j: CellId, n_samples: int, rng: np.random.Generator):
    """Monte Carlo holding time of the jump ``i -> j``.

    Each period the walker either stays in ``i`` or jumps to ``j``, with the two
    probabilities renormalised to sum to one; the sample is the period of the
    jump.  Returns ``(mean, standard_error)``.
    """
    stay, move = T.prob(i, i), T.prob(i, j)
    if stay + move <= 0:
        raise ComputationError(f"T[{int(i):x}][{int(i):x}] and T[{int(i):x}][{int(j):x}] are both zero")
    if move <= 0:
        raise ComputationError(f"T[{int(i):x}][{int(j):x}] is zero: the jump never happens")
    p_stay = stay / (stay + move)
    times = np.ones(n_samples, dtype=np.int64)
    active = np.arange(n_samples)
    while active.size:
        stayed = rng.random(active.size) < p_stay
        active = active[stayed]
        times[active] += 1
    mean = float(times.mean())
    se = float(times.std(ddof=1) / math.sqrt(n_samples)) if n_samples > 1 else 0.0
    return mean, se


def _edges(T: TransitionMatrix):
    P = T.probabilities
    st = T.states.tolist()
    out = defaultdict(list)
    for r in range(T.n_states):
        for k in range(P.indptr[r], P.indptr[r + 1]):
            c = int(P.indices[k])
            if c != r and P.data[k] > 0:
                out[st[r]].append((st[c], float(P.data[k])))
    return out


def enumerate_best_path(T: TransitionMatrix, o: CellId, d: CellId, objective: str = "most_likely") -> Path:
    """Best path from ``o`` to ``d`` by visiting every simple path.

    Restricting to simple paths loses nothing: every edge has a non-negative
    cost (``-ln T`` or an expected time of at least one period), so cutting a
    cycle out of a path never makes it worse.  Equal-cost paths are resolved
    towards the lexicographically smallest cell sequence.
    """
    if T.n_states > MAX_ENUMERATION_STATES:
        raise ConfigError(f"enumeration is limited to {MAX_ENUMERATION_STATES} states, got {T.n_states}")
    if objective not in ("most_likely", "shortest_time"):
        raise ConfigError(f"unknown objective {objective!r}")
    o, d = int(o), int(d)
    T.index(o)
    T.index(d)
    if o == d:
        return Path((o,), 0.0)
    adj = _edges(T)
    stay = {int(c): float(v) for c, v in zip(T.states.tolist(), T.diagonal().tolist())}

    def cost(a, p):
        return -math.log(p) if objective == "most_likely" else stay[a] / p + 1.0

    best = [math.inf, None]
    stack = [(o, (o,), 0.0)]
    while stack:
        node, cells, c = stack.pop()
        if node == d:
            if c < best[0] or (c == best[0] and cells < best[1]):
                best[0], best[1] = c, cells
            continue
        for nxt, p in adj[node]:
            if nxt not in cells:
                stack.append((nxt, cells + (nxt,), c + cost(node, p)))
    if best[1] is None:
        raise DisconnectedError(o, d)
    cells = best[1]
    logp = math.fsum(math.log(T.prob(a, b)) for a, b in zip(cells[:-1], cells[1:]))
    return Path(cells, logp)


def path_cost(T: TransitionMatrix, p: Path, objective: str) -> float:
    """``-ln`` probability or expected steps of ``p``, summed in path order."""
    total = 0.0
    for a, b in p.edges:
        q = T.prob(a, b)
        total += -math.log(q) if objective == "most_likely" else T.prob(a, a) / q + 1.0
    return total


def naive_matrix(s: TrajectoryStore, idx: SpatialIndex, cutoff_days: float) -> dict[int, dict[int, float]]:
    """Gap-pair frequencies counted one pair at a time, as nested dicts."""
    gap = gap_steps_for(cutoff_days, s.sample_interval)
    counts: dict[int, dict[int, int]] = defaultdict(lambda: defaultdict(int))
    for t in s.trajectories:
        cells = [idx.cell_of(p) for p in t.positions]
        for k in range(len(cells) - gap):
            counts[cells[k]][cells[k + gap]] += 1
    out = {}
    for a, row in counts.items():
        total = sum(row.values())
        out[a] = {b: n / total for b, n in row.items()}
    return out


def random_matrix(rng: np.random.Generator, n_states: int, density: float = 0.4, ids=None) -> TransitionMatrix:
    """Random row-stochastic matrix with a random sparsity pattern; for oracle runs."""
    mask = rng.random((n_states, n_states)) < density
    w = rng.random((n_states, n_states)) * mask
    sums = w.sum(axis=1)
    empty = sums == 0
    w[empty, np.arange(n_states)[empty]] = 1.0
    dense = w / w.sum(axis=1, keepdims=True)
    ids = np.arange(1, n_states + 1) if ids is None else np.asarray(ids)
    return from_dense(ids, dense)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def self_check(seed: int = 0, n_matrices: int = 200, mc_samples: int = 100_000) -> list[CheckResult]:
    """Run the searches against the brute-force validators on random instances."""
    rng = np.random.default_rng(seed)
    results = []
    for objective in ("most_likely", "shortest_time"):
        agree = checked = 0
        for _ in range(n_matrices):
            T = random_matrix(rng, int(rng.integers(2, 9)))
            g = PathGraph(T)
            o, d = (int(x) for x in rng.choice(T.states, size=2, replace=False))
            try:
                ref = enumerate_best_path(T, o, d, objective)
            except DisconnectedError:
                ref = None
            try:
                got = most_likely_path(g, o, d) if objective == "most_likely" else shortest_time_path(T, o, d)[0]
            except DisconnectedError:
                got = None
            checked += 1
            if ref is None or got is None:
                agree += ref is None and got is None
                continue
            a, b = path_cost(T, got, objective), path_cost(T, ref, objective)
            agree += got.cells == ref.cells or math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12)
        results.append(CheckResult(f"path search vs enumeration ({objective})", agree == checked, f"{agree}/{checked} agree"))
    T = from_dense([1, 2], [[0.5, 0.25], [0.0, 1.0]], row_counts=[4, 1])
    expected = expected_travel_time(T, Path((1, 2))).steps
    mean, se = constrained_edge_time_mc(T, 1, 2, mc_samples, rng)
    ok = expected == 3.0 and abs(mean - expected) < 3 * se and abs(mean - expected) / expected < 0.02
    results.append(CheckResult("edge time vs Monte Carlo", ok, f"expected {expected:g}, sampled {mean:.4f} +/- {se:.4f}"))
    return results
