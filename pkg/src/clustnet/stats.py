"""Snapshot observables and holding-time weighted averages."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .graph_state import GraphState

CSV_COLUMNS = ("seed", "sim_time", "jumps", "n", "e", "d_bar", "CL_bar",
               "CGL", "N_tri", "N_2path", "largest_comp")


@dataclass
class SnapshotStats:
    n: int
    edge_count: int
    edge_density: float
    avg_degree: float
    degree_histogram: list[int]
    avg_local_clustering: float
    global_clustering: float
    n_triangles: int
    n_two_paths: int
    largest_component: int
    frac_degree_ge2: float
    mean_triangles: float
    clustering_curve: list[float] = field(default_factory=list)

    def csv_row(self, seed: int, sim_time: float, jumps: int) -> list:
        return [seed, repr(float(sim_time)), jumps, self.n,
                repr(self.edge_density), repr(self.avg_degree),
                repr(self.avg_local_clustering), repr(self.global_clustering),
                self.n_triangles, self.n_two_paths, self.largest_component]


def local_clustering(graph: GraphState, v: int, triangles: int | None = None) -> float:
    """Fraction of neighbour pairs of ``v`` that are adjacent; 0 when ``d_v <= 1``."""
    d = graph.degrees[v]
    if d <= 1:
        return 0.0
    t = graph.triangles_at(v) if triangles is None else triangles
    return t / (d * (d - 1) / 2)


def clustering_curve(degrees: Sequence[int], local: Sequence[float]) -> list[float]:
    """Mean local clustering per degree, ``f[k]`` for ``k = 0..max degree``.

    Degrees that do not occur get 0.
    """
    kmax = max(degrees) if len(degrees) else 0
    total = [0.0] * (kmax + 1)
    count = [0] * (kmax + 1)
    for d, c in zip(degrees, local):
        total[d] += c
        count[d] += 1
    return [total[k] / count[k] if count[k] else 0.0 for k in range(kmax + 1)]


def snapshot(graph: GraphState, with_curve: bool = True) -> SnapshotStats:
    n = graph.n
    deg = graph.degrees
    tri = graph.triangle_counts()
    local = [local_clustering(graph, v, tri[v]) for v in range(n)]
    n_tri = sum(tri) // 3
    n_2p = graph.two_path_count()
    hist = [0] * (max(deg) + 1)
    for d in deg:
        hist[d] += 1
    pairs = n * (n - 1) / 2
    return SnapshotStats(
        n=n,
        edge_count=graph.edge_count,
        edge_density=graph.edge_count / pairs if n > 1 else 0.0,
        avg_degree=2 * graph.edge_count / n,
        degree_histogram=hist,
        avg_local_clustering=sum(local) / n,
        global_clustering=3 * n_tri / n_2p if n_tri > 0 else 0.0,
        n_triangles=n_tri,
        n_two_paths=n_2p,
        largest_component=graph.largest_component_size(),
        frac_degree_ge2=sum(1 for d in deg if d >= 2) / n,
        mean_triangles=sum(tri) / n,
        clustering_curve=clustering_curve(deg, local) if with_curve else [],
    )


@dataclass(frozen=True)
class Estimate:
    mean: float
    se: float
    n_samples: int
    n_batches: int

    def within(self, target: float, k: float = 3.0) -> bool:
        return abs(self.mean - target) <= k * self.se

    def __str__(self) -> str:
        return f"{self.mean:.6g} +/- {self.se:.3g}"


def weighted_batch_means(values: Sequence[float], weights: Sequence[float] | None = None,
                         n_batches: int | None = None) -> Estimate:
    """Weighted mean with a batch-means standard error.

    The series is split into ``ceil(sqrt(N))`` contiguous batches unless
    ``n_batches`` is given.
    """
    x = np.asarray(values, dtype=float)
    N = x.size
    if N < 2:
        raise ValueError("need at least two samples")
    w = np.ones(N) if weights is None else np.asarray(weights, dtype=float)
    if w.shape != x.shape or np.any(w < 0) or not w.sum() > 0:
        raise ValueError("weights must be non-negative, not all zero, and match the values")
    b = n_batches if n_batches is not None else math.ceil(math.sqrt(N))
    b = max(2, min(b, N))
    mean = float(np.dot(w, x) / w.sum())
    means = []
    for xs, ws in zip(np.array_split(x, b), np.array_split(w, b)):
        sw = ws.sum()
        if sw > 0:
            means.append(float(np.dot(ws, xs) / sw))
    means = np.array(means)
    if np.all(means == means[0]):
        se = 0.0
    else:
        se = float(np.std(means, ddof=1) / math.sqrt(len(means)))
    return Estimate(mean, se, N, len(means))


def time_average(observer: str | Callable, trajectory: Sequence) -> Estimate:
    """Holding-time weighted mean of an observable over a recorded trajectory.

    ``observer`` is either a :class:`SnapshotStats` attribute name, a key in
    the samples' ``values`` mapping, or a callable taking a sample.  Each
    element of ``trajectory`` must expose ``weight``; plain ``(weight,
    value)`` tuples are also accepted.
    """
    values, weights = [], []
    for s in trajectory:
        if isinstance(s, tuple):
            w, v = s
        else:
            w = s.weight
            if callable(observer):
                v = observer(s)
            elif observer in s.values:
                v = s.values[observer]
            else:
                v = getattr(s.stats, observer)
        weights.append(w)
        values.append(v)
    if len(values) < 2:
        raise ValueError("time average needs at least two samples")
    return weighted_batch_means(values, weights)
