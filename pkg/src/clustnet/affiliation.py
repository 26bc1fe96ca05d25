"""Dynamic affiliation network: a bipartite actor/attribute chain and its projection.

Each actor-attribute pair ``(i, u)`` is an independent two-state chain that
joins at rate ``y_i * x_u`` and leaves at rate ``mu``.  Two actors are
adjacent in the projection when they share an attribute.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import backend
from .graph_state import GraphState


def stationary_edge_prob(y_i: float, x_u: float, mu: float) -> float:
    if not (y_i > 0 and x_u > 0 and mu > 0):
        raise ValueError("weights and mu must be strictly positive")
    w = y_i * x_u
    return w / (w + mu)


def _check_weights(y, x, mu):
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    if y.ndim != 1 or x.ndim != 1 or y.size == 0 or x.size == 0:
        raise ValueError("weights must be non-empty 1-d sequences")
    if np.any(y <= 0) or np.any(x <= 0) or not mu > 0:
        raise ValueError("weights and mu must be strictly positive")
    return y, x, float(mu)


@dataclass
class BipartiteState:
    """Incidence sets of a bipartite graph plus the weights that drive it."""

    y: np.ndarray
    x: np.ndarray
    mu: float
    attrs: list[set[int]] = field(default_factory=list)
    members: list[set[int]] = field(default_factory=list)

    def __post_init__(self):
        self.y, self.x, self.mu = _check_weights(self.y, self.x, self.mu)
        if not self.attrs:
            self.attrs = [set() for _ in range(self.n)]
        if not self.members:
            self.members = [set() for _ in range(self.m)]

    @property
    def n(self) -> int:
        return self.y.size

    @property
    def m(self) -> int:
        return self.x.size

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.attrs)

    def has(self, i: int, u: int) -> bool:
        return u in self.attrs[i]

    def toggle(self, i: int, u: int) -> bool:
        if u in self.attrs[i]:
            self.attrs[i].discard(u)
            self.members[u].discard(i)
            return False
        self.attrs[i].add(u)
        self.members[u].add(i)
        return True

    def rate(self, i: int, u: int) -> float:
        return self.mu if u in self.attrs[i] else self.y[i] * self.x[u]

    def incidence_matrix(self) -> np.ndarray:
        b = np.zeros((self.n, self.m), dtype=bool)
        for i, a in enumerate(self.attrs):
            for u in a:
                b[i, u] = True
        return b

    def check(self) -> None:
        for i, a in enumerate(self.attrs):
            for u in a:
                assert i in self.members[u]
        for u, mem in enumerate(self.members):
            for i in mem:
                assert u in self.attrs[i]


def edge_prob_matrix(y, x, mu) -> np.ndarray:
    y, x, mu = _check_weights(y, x, mu)
    w = np.outer(y, x)
    return w / (w + mu)


def _random_subset(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    if k > n // 4:
        return rng.permutation(n)[:k]
    while True:
        cand = rng.integers(0, n, size=k)
        if np.unique(cand).size == k:
            return cand


def sample_stationary(y, x, mu, rng: np.random.Generator, chunk: int = 512) -> BipartiteState:
    """Independent draw from the stationary law: each incidence present w.p. ``p_iu``."""
    y, x, mu = _check_weights(y, x, mu)
    state = BipartiteState(y, x, mu)
    n, m = y.size, x.size
    if np.all(y == y[0]):
        # equal activities: the member count of an attribute is binomial and
        # the members a uniform subset
        p = y[0] * x / (y[0] * x + mu)
        counts = rng.binomial(n, p)
        for u in np.flatnonzero(counts):
            for i in _random_subset(rng, n, int(counts[u])):
                state.attrs[int(i)].add(int(u))
                state.members[int(u)].add(int(i))
        return state
    for start in range(0, m, chunk):
        cols = slice(start, min(m, start + chunk))
        w = np.outer(y, x[cols])
        hit = rng.random(w.shape) < w / (w + mu)
        for i, du in zip(*np.nonzero(hit)):
            u = int(du) + start
            state.attrs[int(i)].add(u)
            state.members[u].add(int(i))
    return state


def project(state: BipartiteState) -> GraphState:
    """Actors adjacent iff they share at least one attribute."""
    g = GraphState(state.n)
    adj = g.adjacency
    for mem in state.members:
        if len(mem) < 2:
            continue
        ms = sorted(mem)
        for a in range(len(ms)):
            ia = ms[a]
            for b in range(a + 1, len(ms)):
                ib = ms[b]
                if ib not in adj[ia]:
                    g.toggle_edge(ia, ib)
    return g


def actor_degree(state: BipartiteState, i: int) -> int:
    """Degree of actor ``i`` in the projection, without building it."""
    nbrs: set[int] = set()
    for u in state.attrs[i]:
        nbrs |= state.members[u]
    nbrs.discard(i)
    return len(nbrs)


def sample_actor_degree(y, x, mu, i: int, rng: np.random.Generator, size: int) -> np.ndarray:
    """Projected degree of actor ``i`` in ``size`` independent stationary snapshots.

    Only the incidences that can affect actor ``i`` are drawn: its own
    attributes, then the other members of each of those attributes.
    """
    y, x, mu = _check_weights(y, x, mu)
    n = y.size
    p_i = y[i] * x / (y[i] * x + mu)
    others = np.delete(np.arange(n), i)
    y_o = y[others]
    out = np.empty(size, dtype=np.int64)
    for s in range(size):
        mine = np.flatnonzero(rng.random(x.size) < p_i)
        if mine.size == 0:
            out[s] = 0
            continue
        w = np.outer(y_o, x[mine])
        hit = rng.random(w.shape) < w / (w + mu)
        out[s] = int(np.count_nonzero(hit.any(axis=1)))
    return out


class BipartiteChain:
    """Event-driven simulation of the bipartite chain over the ``n*m`` pair slots."""

    def __init__(self, y, x, mu, seed: int = 0):
        self.state = BipartiteState(y, x, mu)
        self.rng = backend.SplitMix64(seed)
        self.tree = backend.SumTree(self.state.n * self.state.m)
        m = self.state.m
        for i in range(self.state.n):
            for u in range(m):
                self.tree.set(i * m + u, self.state.rate(i, u))
        self.sim_time = 0.0
        self.jumps = 0

    @property
    def total_rate(self) -> float:
        return self.tree.total

    def step(self) -> tuple[float, tuple[int, int]]:
        dt = -math.log(self.rng.random()) / self.tree.total
        p = self.tree.sample(self.rng)
        i, u = divmod(p, self.state.m)
        self.state.toggle(i, u)
        self.tree.set(p, self.state.rate(i, u))
        self.sim_time += dt
        self.jumps += 1
        return dt, (i, u)

    def occupancy(self, n_jumps: int) -> tuple[np.ndarray, float]:
        """Fraction of time each incidence is present over the next ``n_jumps`` jumps.

        Returns the ``n x m`` fractions and the elapsed time.
        """
        st = self.state
        m = st.m
        on = np.zeros((st.n, m))
        since = np.full((st.n, m), np.nan)
        t0 = self.sim_time
        for i, a in enumerate(st.attrs):
            for u in a:
                since[i, u] = t0
        for _ in range(n_jumps):
            _, (i, u) = self.step()
            if st.has(i, u):
                since[i, u] = self.sim_time
            else:
                on[i, u] += self.sim_time - since[i, u]
                since[i, u] = np.nan
        open_ = ~np.isnan(since)
        on[open_] += self.sim_time - since[open_]
        elapsed = self.sim_time - t0
        return on / elapsed, elapsed


def bipartite_step(chain: BipartiteChain) -> tuple[float, tuple[int, int]]:
    return chain.step()


def two_state_time_average_sd(on_rate: float, off_rate: float, elapsed: float) -> float:
    """Asymptotic sd of the time-averaged indicator of a two-state chain."""
    r = on_rate + off_rate
    return math.sqrt(2.0 * on_rate * off_rate / r ** 3 / elapsed)


# --------------------------------------------------------------------------
# weight generators

def read_weights(path: str | Path) -> np.ndarray:
    vals = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            vals.append(float(line))
    w = np.array(vals)
    if w.size == 0 or np.any(w <= 0):
        raise ValueError(f"{path}: weights must be positive, one per line")
    return w


def bounded_pareto(rng: np.random.Generator, shape: float, low: float, high: float,
                   size: int) -> np.ndarray:
    """Inverse-CDF draw from a Pareto law truncated to ``[low, high]``."""
    u = rng.random(size)
    la, ha = low ** shape, high ** shape
    return (-(u * ha - u * la - ha) / (ha * la)) ** (-1.0 / shape)


def make_weights(spec: str, count: int, rng: np.random.Generator) -> np.ndarray:
    """Build ``count`` weights from a short spec string.

    ``const:c``, ``uniform:a:b``, ``pareto:shape:low:high``, ``cycle:v1,v2,...``
    (deterministic repetition) or ``file:path``.
    """
    kind, _, rest = spec.partition(":")
    args = rest.split(":") if rest else []
    if kind == "const":
        w = np.full(count, float(args[0]) if args else 1.0)
    elif kind == "uniform":
        a, b = float(args[0]), float(args[1])
        w = rng.uniform(a, b, size=count)
    elif kind == "pareto":
        w = bounded_pareto(rng, float(args[0]), float(args[1]), float(args[2]), count)
    elif kind == "cycle":
        vals = [float(v) for v in rest.split(",")]
        w = np.array([vals[k % len(vals)] for k in range(count)])
    elif kind == "file":
        w = read_weights(rest)
        if w.size != count:
            raise ValueError(f"{rest}: expected {count} weights, found {w.size}")
    else:
        raise ValueError(f"unknown weight spec {spec!r}")
    if np.any(w <= 0):
        raise ValueError("weights must be positive")
    return w


def degree_identity_holds(state: BipartiteState, g: GraphState, actors: Iterable[int]) -> bool:
    return all(g.degrees[i] == actor_degree(state, i) for i in actors)


def weights_summary(values: Sequence[float]) -> str:
    v = np.asarray(values)
    return f"mean={v.mean():.4g} min={v.min():.4g} max={v.max():.4g}"
