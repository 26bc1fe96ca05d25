"""Exact stationary law of the triadic chain on tiny vertex sets.

States are edge bitmasks over the pairs ``(i, j)``, ``i < j``, in
lexicographic order; bit ``k`` is set when pair ``k`` is an edge.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.sparse.csgraph import connected_components

from .graph_state import GraphState
from .triadic import Chain, TriadicParams, pair_intensity

MAX_N = 5


class ReducibleChainError(ValueError):
    """The generator is not irreducible, so no unique stationary law exists."""


@dataclass(frozen=True)
class StateSpace:
    n: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise ValueError(f"state space enumeration supports 1 <= n <= {MAX_N}, got {self.n}")

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(itertools.combinations(range(self.n), 2))

    @property
    def size(self) -> int:
        return 1 << len(self.pairs)

    def pair_bit(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        return self.pairs.index((i, j))

    def decode(self, mask: int) -> GraphState:
        g = GraphState(self.n)
        for k, (i, j) in enumerate(self.pairs):
            if mask >> k & 1:
                g.toggle_edge(i, j)
        return g

    def encode(self, graph: GraphState) -> int:
        mask = 0
        for k, (i, j) in enumerate(self.pairs):
            if graph.has_edge(i, j):
                mask |= 1 << k
        return mask


def generator(params: TriadicParams, n: int) -> np.ndarray:
    """Dense rate matrix over all graphs on ``n`` vertices (rows sum to zero)."""
    space = StateSpace(n)
    pairs = space.pairs
    Q = np.zeros((space.size, space.size))
    for s in range(space.size):
        g = space.decode(s)
        for k, (i, j) in enumerate(pairs):
            Q[s, s ^ (1 << k)] = pair_intensity(g, params, i, j)
        Q[s, s] = -Q[s].sum()
    return Q


@dataclass(frozen=True)
class StationaryDistribution:
    n: int
    pi: np.ndarray
    residual: float

    def expectation(self, observable: Callable[[GraphState], float]) -> float:
        return exact_expectation(self, observable)


def solve_stationary(Q: np.ndarray, n: int | None = None) -> StationaryDistribution:
    """Solve ``pi Q = 0`` with ``sum(pi) = 1`` by a dense linear solve."""
    size = Q.shape[0]
    if n is None:
        n = _n_from_size(size)
    adj = (Q > 0).astype(np.int8)
    np.fill_diagonal(adj, 0)
    n_comp, _ = connected_components(adj, directed=True, connection="strong")
    if n_comp != 1:
        raise ReducibleChainError(f"generator has {n_comp} communicating classes")
    A = Q.T.copy()
    A[-1, :] = 1.0
    b = np.zeros(size)
    b[-1] = 1.0
    pi = np.linalg.solve(A, b)
    pi[(pi < 0) & (pi > -1e-13)] = 0.0
    if np.any(pi < 0):
        raise ReducibleChainError("negative stationary mass; generator is ill-conditioned")
    pi = pi / pi.sum()
    residual = float(np.max(np.abs(pi @ Q)))
    return StationaryDistribution(n, pi, residual)


def _n_from_size(size: int) -> int:
    for n in range(1, MAX_N + 1):
        if 1 << (n * (n - 1) // 2) == size:
            return n
    raise ValueError(f"{size} is not a graph state-space size")


def exact_expectation(dist: StationaryDistribution,
                      observable: Callable[[GraphState], float]) -> float:
    space = StateSpace(dist.n)
    return float(sum(p * observable(space.decode(s)) for s, p in enumerate(dist.pi)))


def stationary(params: TriadicParams, n: int) -> StationaryDistribution:
    return solve_stationary(generator(params, n), n)


def empirical_occupancy(params: TriadicParams, n: int, jumps: int, seed: int = 0,
                        burnin: int | None = None, backend_name: str | None = None) -> np.ndarray:
    """Holding-time weighted state frequencies of a simulated trajectory."""
    space = StateSpace(n)
    bit = {}
    for k, (i, j) in enumerate(space.pairs):
        bit[(i, j)] = 1 << k
    chain = Chain(n, params, seed=seed, backend_name=backend_name)
    chain.advance(3 * n * n if burnin is None else burnin)
    mask = space.encode(chain.graph())
    occ = np.zeros(space.size)
    step = chain.engine.step
    for _ in range(jumps):
        dt, i, j = step()
        occ[mask] += dt
        mask ^= bit[(i, j)]
    return occ / occ.sum()


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


# observables --------------------------------------------------------------

def edge_density(g: GraphState) -> float:
    return g.edge_count / (g.n * (g.n - 1) / 2)


def mean_local_clustering(g: GraphState) -> float:
    from .stats import local_clustering
    return sum(local_clustering(g, v) for v in range(g.n)) / g.n


def mean_triangles(g: GraphState) -> float:
    return sum(g.triangle_counts()) / g.n


def frac_degree_ge2(g: GraphState) -> float:
    return sum(1 for d in g.degrees if d >= 2) / g.n


def rate_balance(params: TriadicParams) -> Callable[[GraphState], float]:
    def f(g: GraphState) -> float:
        ins = dele = 0.0
        for i in range(g.n):
            for j in range(i + 1, g.n):
                a = pair_intensity(g, params, i, j)
                if g.has_edge(i, j):
                    dele += a
                else:
                    ins += a
        return ins - dele
    return f
