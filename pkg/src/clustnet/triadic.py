"""Graph-valued Markov chain with triadic-closure intensities.

A vertex pair ``{i, j}`` toggles its adjacency status at rate ``a_ij(G)``.
Four rate families are supported (see :class:`TriadicParams`):

``general``
    ``lambda_i*lambda_j + lam*nu_ij(G, alpha)`` for non-edges and
    ``(mu_i*mu_j - mu*nu_ij(G, beta))_+`` for edges, with per-vertex weights.
    Without per-vertex weights the products become the scalars ``lambda0``
    and ``mu0``.
``simplified``
    Same formula with scalar ``lambda0``/``mu0``.
``corrected``
    ``lambda0 + lam*nu_star_ij + lam*kappa_ij`` for non-edges, constant
    ``mu0`` for edges.
``independent``
    ``lam = mu = 0``: every pair is an independent two-state chain.

Simulation is delegated to the engine picked in :mod:`clustnet.backend`.
The functions in this module evaluate rates on a :class:`GraphState` from
scratch with the same arithmetic as the engines, so cached and recomputed
rates compare equal exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from . import backend
from .errors import AbsorbedError
from .graph_state import GraphState

VARIANTS = ("general", "simplified", "corrected", "independent")

__all__ = [
    "AbsorbedError",
    "Chain",
    "Sample",
    "TriadicParams",
    "affected_pairs",
    "clustering_weight",
    "correction_term",
    "pair_intensity",
    "reference_step",
    "run",
    "star_weight",
    "step",
]


@dataclass(frozen=True)
class TriadicParams:
    """Model constants for one rate family.

    ``lam`` and ``mu`` are the triadic birth boost and triadic protection.
    ``lambda_v``/``mu_v`` are optional per-vertex weights (general and
    independent variants only); when absent the scalar ``lambda0``/``mu0``
    stand in for the pair products.
    """

    variant: str = "simplified"
    alpha: float = 0.0
    beta: float = 0.0
    lam: float = 0.0
    mu: float = 0.0
    lambda0: float = 1.0
    mu0: float = 1.0
    lambda_v: tuple[float, ...] | None = None
    mu_v: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")
        for name in ("alpha", "beta", "lam", "mu"):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be a finite non-negative number, got {value}")
        if self.variant == "independent" and (self.lam != 0 or self.mu != 0):
            raise ValueError("independent variant requires lam = mu = 0")
        if self.variant == "corrected" and self.mu != 0:
            raise ValueError("corrected variant has a constant deletion rate; mu must be 0")
        if (self.lambda_v is None) != (self.mu_v is None):
            raise ValueError("lambda_v and mu_v must be given together")
        if self.lambda_v is not None:
            if self.variant not in ("general", "independent"):
                raise ValueError(f"per-vertex weights are not used by the {self.variant} variant")
            object.__setattr__(self, "lambda_v", tuple(float(v) for v in self.lambda_v))
            object.__setattr__(self, "mu_v", tuple(float(v) for v in self.mu_v))
            if len(self.lambda_v) != len(self.mu_v):
                raise ValueError("lambda_v and mu_v must have equal length")
            if min(self.lambda_v + self.mu_v) <= 0:
                raise ValueError("per-vertex weights must be strictly positive")
        else:
            if not (self.lambda0 > 0 and self.mu0 > 0):
                raise ValueError("lambda0 and mu0 must be strictly positive")

    @property
    def per_vertex(self) -> bool:
        return self.lambda_v is not None

    def check_size(self, n: int) -> None:
        if self.per_vertex and len(self.lambda_v) != n:
            raise ValueError(f"{len(self.lambda_v)} vertex weights given for n={n}")
        if self.variant == "corrected" and n < 3:
            raise ValueError("corrected variant needs n >= 3")

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in
             ("variant", "alpha", "beta", "lam", "mu", "lambda0", "mu0")}
        if self.per_vertex:
            d["lambda_v"] = list(self.lambda_v)
            d["mu_v"] = list(self.mu_v)
        return d


# --------------------------------------------------------------------------
# intensities

def _check_distinct(i: int, j: int) -> None:
    if i == j:
        raise ValueError(f"pair ({i}, {j}) is not a pair of distinct vertices")


def clustering_weight(graph: GraphState, i: int, j: int, s: float) -> float:
    """Sum of ``d_v ** -s`` over the common neighbours ``v`` of ``i`` and ``j``."""
    _check_distinct(i, j)
    deg = graph.degrees
    nu = 0.0
    for v in sorted(graph.common_neighbors(i, j)):
        nu += math.pow(deg[v], -s)
    return nu


def star_weight(graph: GraphState, i: int, j: int) -> float:
    """Sum of ``1 / C(d_w, 2)`` over the common neighbours ``w``."""
    _check_distinct(i, j)
    deg = graph.degrees
    nu = 0.0
    for w in sorted(graph.common_neighbors(i, j)):
        d = deg[w]
        nu += 2.0 / (d * (d - 1))
    return nu


def correction_term(graph: GraphState, i: int, j: int, n: int | None = None) -> float:
    """Boost for pairs with an endpoint of degree 0 or 1."""
    _check_distinct(i, j)
    n = graph.n if n is None else n
    if n < 3:
        raise ValueError("correction term needs n >= 3")
    di, dj = graph.degrees[i], graph.degrees[j]
    return (((di == 0) + (dj == 0)) / (n - 1)
            + ((di == 1) + (dj == 1)) / (n - 2))


def pair_intensity(graph: GraphState, params: TriadicParams, i: int, j: int) -> float:
    """Toggle rate of ``{i, j}`` in ``graph``."""
    _check_distinct(i, j)
    if i > j:
        i, j = j, i
    present = graph.has_edge(i, j)
    if params.variant == "corrected":
        if present:
            return params.mu0
        nu = star_weight(graph, i, j)
        kappa = correction_term(graph, i, j)
        return params.lambda0 + params.lam * nu + params.lam * kappa
    if present:
        base = params.mu_v[i] * params.mu_v[j] if params.per_vertex else params.mu0
        r = base - params.mu * clustering_weight(graph, i, j, params.beta)
        return r if r > 0.0 else 0.0
    base = params.lambda_v[i] * params.lambda_v[j] if params.per_vertex else params.lambda0
    return base + params.lam * clustering_weight(graph, i, j, params.alpha)


def all_intensities(graph: GraphState, params: TriadicParams) -> dict[tuple[int, int], float]:
    n = graph.n
    return {(i, j): pair_intensity(graph, params, i, j)
            for i in range(n) for j in range(i + 1, n)}


def affected_pairs(graph: GraphState, i: int, j: int,
                   params: TriadicParams | None = None) -> set[tuple[int, int]]:
    """Pairs other than ``{i, j}`` whose rate may change when ``{i, j}`` toggles.

    Works on either the pre- or post-toggle graph: neighbourhoods are taken
    without the toggled partner, which is the same set before and after.
    Pairs are returned as ``(min, max)`` tuples.
    """
    _check_distinct(i, j)
    adj = graph.adjacency
    out: set[tuple[int, int]] = set()

    def add(a: int, b: int) -> None:
        out.add((a, b) if a < b else (b, a))

    ni = sorted(adj[i] - {j})
    nj = sorted(adj[j] - {i})
    # membership of i (resp. j) in common-neighbour sets
    for w in nj:
        add(i, w)
    for w in ni:
        add(j, w)
    # the degree of i (resp. j) enters the weights of pairs it is common to
    for nb in (ni, nj):
        for a in range(len(nb)):
            for b in range(a + 1, len(nb)):
                add(nb[a], nb[b])
    if params is not None and params.variant == "corrected":
        limit = 2 if graph.has_edge(i, j) else 1
        for c in (i, j):
            if graph.degrees[c] <= limit:
                for k in range(graph.n):
                    if k != c:
                        add(c, k)
    out.discard((min(i, j), max(i, j)))
    return out


# --------------------------------------------------------------------------
# simulation

def make_engine(n: int, params: TriadicParams, seed: int = 0, backend_name: str | None = None):
    params.check_size(n)
    cls = backend.engine_class(backend_name)
    mode = backend.MODE_CORRECTED if params.variant == "corrected" else backend.MODE_TRIADIC
    return cls(n, mode, params.alpha, params.beta, params.lam, params.mu,
               params.lambda0, params.mu0,
               params.lambda_v, params.mu_v, seed)


class Chain:
    """A running chain: graph, parameters, rate cache, clock and generator.

    Parameters
    ----------
    n : int
        Vertex count.
    params : TriadicParams
    seed : int
        Seed of the chain's private SplitMix64 stream.
    backend_name : {"cython", "python"}, optional
        Force an engine backend; defaults to the one chosen at import.
    """

    def __init__(self, n: int, params: TriadicParams, seed: int = 0,
                 backend_name: str | None = None):
        self.n = n
        self.params = params
        self.seed = seed
        self.engine = make_engine(n, params, seed, backend_name)

    @property
    def sim_time(self) -> float:
        return self.engine.sim_time

    @property
    def jump_count(self) -> int:
        return self.engine.jumps

    @property
    def total_rate(self) -> float:
        return self.engine.total_rate

    def step(self) -> tuple[float, tuple[int, int]]:
        dt, i, j = self.engine.step()
        return dt, (i, j)

    def advance(self, jumps: int) -> None:
        self.engine.advance(jumps)

    def toggle(self, i: int, j: int) -> bool:
        return self.engine.toggle(i, j)

    def graph(self) -> GraphState:
        """Copy of the current graph as a :class:`GraphState`."""
        g = GraphState(self.n)
        for i, j in self.engine.edges():
            g.toggle_edge(i, j)
        return g

    def pair_rate(self, i: int, j: int) -> float:
        return self.engine.pair_rate(i, j)

    def rate_balance(self) -> float:
        """Total insertion rate minus total deletion rate (the drift of ``|E|``)."""
        edge_sum = self.engine.edge_rate_sum()
        return (self.engine.total_rate - edge_sum) - edge_sum

    def cached_rates(self) -> dict[tuple[int, int], float]:
        n = self.n
        return {(i, j): self.engine.pair_rate(i, j)
                for i in range(n) for j in range(i + 1, n)}


def step(chain: Chain) -> tuple[float, tuple[int, int]]:
    """Advance ``chain`` by one jump; return the holding time and toggled pair."""
    return chain.step()


@dataclass
class Sample:
    """One recorded epoch of a trajectory.

    ``weight`` is the expected holding time ``1 / total_rate`` of the
    recorded state, used to turn jump-epoch samples into time averages.
    """

    sim_time: float
    jumps: int
    weight: float
    stats: "SnapshotStats"
    values: dict[str, float] = field(default_factory=dict)


Observer = Callable[[Chain, GraphState], float]


def default_burnin(n: int) -> int:
    return 3 * n * n


def run(chain: Chain, burnin_jumps: int | None = None, n_samples: int = 100,
        sample_interval_jumps: int | None = None,
        observers: Mapping[str, Observer] | None = None,
        with_curve: bool = False) -> list[Sample]:
    """Burn in, then record ``n_samples`` snapshots every ``sample_interval_jumps`` jumps.

    Defaults: burn-in ``3 n^2`` jumps, interval ``n`` jumps.  The built-in
    observer ``rate_balance`` is always recorded.
    """
    from .stats import snapshot

    n = chain.n
    burnin = default_burnin(n) if burnin_jumps is None else burnin_jumps
    interval = n if sample_interval_jumps is None else sample_interval_jumps
    if burnin < 0 or n_samples < 1 or interval < 1:
        raise ValueError("burn-in must be >= 0, samples and interval >= 1")
    observers = dict(observers or {})
    chain.advance(burnin)
    out = []
    for k in range(n_samples):
        if k:
            chain.advance(interval)
        g = chain.graph()
        total = chain.total_rate
        if not total > 0:
            raise AbsorbedError("chain absorbed: total event rate is zero")
        values = {"rate_balance": chain.rate_balance()}
        for name, fn in observers.items():
            values[name] = float(fn(chain, g))
        out.append(Sample(chain.sim_time, chain.jump_count, 1.0 / total,
                          snapshot(g, with_curve=with_curve), values))
    return out


# --------------------------------------------------------------------------
# test-only reference stepper

def reference_step(graph: GraphState, params: TriadicParams,
                   rng: np.random.Generator) -> tuple[float, tuple[int, int]]:
    """Literal scheme: draw an exponential clock for every pair, fire the minimum.

    Mutates ``graph``.  Cost is O(n^2) per step; for cross-checking only.
    """
    rates = all_intensities(graph, params)
    pairs = list(rates)
    r = np.array([rates[p] for p in pairs])
    live = r > 0
    if not live.any():
        raise AbsorbedError("total event rate is zero")
    clocks = np.full(len(pairs), np.inf)
    clocks[live] = rng.exponential(1.0 / r[live])
    k = int(np.argmin(clocks))
    i, j = pairs[k]
    graph.toggle_edge(i, j)
    return float(clocks[k]), (i, j)


def derive_seed(base_seed: int, index: int) -> int:
    """Per-cell seed for parameter sweeps."""
    return (int(base_seed) ^ int(index)) & ((1 << 64) - 1)


def params_from_mapping(cfg: Mapping) -> TriadicParams:
    keys = ("variant", "alpha", "beta", "lam", "mu", "lambda0", "mu0", "lambda_v", "mu_v")
    return TriadicParams(**{k: cfg[k] for k in keys if k in cfg and cfg[k] is not None})


def vertex_weights(values: Sequence[float]) -> tuple[float, ...]:
    return tuple(float(v) for v in values)
