"""Pure-Python event engine, used when the compiled core is unavailable.

Every floating-point operation here is performed in the same order as in
``_core.pyx`` so that, for equal seeds, both backends produce bit-identical
trajectories.  Keep the two files in lockstep.
"""
from __future__ import annotations

import math

from .errors import AbsorbedError
from .graph_state import GraphState

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
TWO_M53 = 2.0 ** -53

MODE_TRIADIC = 0
MODE_CORRECTED = 1

RESUM_EVERY = 1_000_000


class SplitMix64:
    """Counter-based 64-bit generator (Steele, Lea and Flood's SplitMix64)."""

    def __init__(self, seed: int = 0):
        self.state = int(seed) & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform double on the open interval (0, 1)."""
        return ((self.next_u64() >> 11) + 0.5) * TWO_M53


class SumTree:
    """Binary partial-sum tree over ``size`` non-negative slots."""

    def __init__(self, size: int):
        if size < 1:
            raise ValueError("SumTree needs at least one slot")
        cap = 1
        while cap < size:
            cap <<= 1
        self.size = size
        self.cap = cap
        self.tree = [0.0] * (2 * cap)

    @property
    def total(self) -> float:
        return self.tree[1]

    def get(self, p: int) -> float:
        return self.tree[p + self.cap]

    def set(self, p: int, value: float) -> None:
        tree = self.tree
        k = p + self.cap
        tree[k] = value
        k >>= 1
        while k:
            tree[k] = tree[2 * k] + tree[2 * k + 1]
            k >>= 1

    def resum(self) -> None:
        tree = self.tree
        for k in range(self.cap - 1, 0, -1):
            tree[k] = tree[2 * k] + tree[2 * k + 1]

    def find(self, target: float) -> int:
        """Slot whose cumulative interval contains ``target``."""
        tree = self.tree
        cap = self.cap
        k = 1
        while k < cap:
            left = tree[2 * k]
            if target < left:
                k = 2 * k
            else:
                target -= left
                k = 2 * k + 1
        return k - cap

    def sample(self, rng: SplitMix64) -> int:
        while True:
            p = self.find(rng.random() * self.tree[1])
            if p < self.size and self.tree[p + self.cap] > 0.0:
                return p
            self.resum()


class TriadicEngine:
    """Gillespie engine for the triadic-closure graph chain.

    Rates live in a :class:`SumTree` indexed by ``i * n + j`` (``i < j``).
    """

    def __init__(self, n, mode, alpha, beta, lam, mu, lambda0, mu0,
                 lambda_v=None, mu_v=None, seed=0):
        if n < 2:
            raise ValueError("engine needs at least two vertices")
        if mode == MODE_CORRECTED and n < 3:
            raise ValueError("corrected rates need n >= 3")
        self.n = n
        self.mode = mode
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.lam = float(lam)
        self.mu = float(mu)
        self.lambda0 = float(lambda0)
        self.mu0 = float(mu0)
        self.per_vertex = lambda_v is not None and len(lambda_v) > 0
        self.lambda_v = [float(v) for v in lambda_v] if self.per_vertex else []
        self.mu_v = [float(v) for v in mu_v] if self.per_vertex else []
        if mode == MODE_CORRECTED:
            self.need_a = self.need_b = self.lam > 0
        else:
            self.need_a = self.lam > 0 or self.mu > 0
            self.need_b = ((self.lam > 0 and self.alpha != 0.0)
                           or (self.mu > 0 and self.beta != 0.0))
        self.rng = SplitMix64(seed)
        self.graph = GraphState(n)
        self.tree = SumTree(n * n)
        self.sim_time = 0.0
        self.jumps = 0
        self.rebuild()

    # rates -------------------------------------------------------------
    def _rate(self, i: int, j: int) -> float:
        adj = self.graph.adjacency
        deg = self.graph.degrees
        present = j in adj[i]
        if self.mode == MODE_CORRECTED:
            if present:
                return self.mu0
            nu = 0.0
            for v in sorted(adj[i] & adj[j]):
                d = deg[v]
                nu += 2.0 / (d * (d - 1))
            n = self.n
            di, dj = deg[i], deg[j]
            kappa = (((di == 0) + (dj == 0)) / (n - 1)
                     + ((di == 1) + (dj == 1)) / (n - 2))
            return self.lambda0 + self.lam * nu + self.lam * kappa
        if present:
            if self.per_vertex:
                base = self.mu_v[i] * self.mu_v[j]
            else:
                base = self.mu0
            if self.mu > 0:
                nu = 0.0
                for v in sorted(adj[i] & adj[j]):
                    nu += math.pow(deg[v], -self.beta)
                r = base - self.mu * nu
                return r if r > 0.0 else 0.0
            return base
        if self.per_vertex:
            base = self.lambda_v[i] * self.lambda_v[j]
        else:
            base = self.lambda0
        if self.lam > 0:
            nu = 0.0
            for v in sorted(adj[i] & adj[j]):
                nu += math.pow(deg[v], -self.alpha)
            return base + self.lam * nu
        return base

    def _refresh(self, i: int, j: int) -> None:
        if i > j:
            i, j = j, i
        self.tree.set(i * self.n + j, self._rate(i, j))

    def rebuild(self) -> None:
        n = self.n
        tree = self.tree
        for i in range(n):
            for j in range(i + 1, n):
                tree.tree[tree.cap + i * n + j] = self._rate(i, j)
        tree.resum()

    def resum(self) -> None:
        self.tree.resum()

    def _update_after_toggle(self, i: int, j: int) -> None:
        adj = self.graph.adjacency
        self._refresh(i, j)
        if self.need_a:
            for w in sorted(adj[j]):
                if w != i:
                    self._refresh(i, w)
            for w in sorted(adj[i]):
                if w != j:
                    self._refresh(j, w)
        if self.need_b:
            for c, other in ((i, j), (j, i)):
                nb = [w for w in sorted(adj[c]) if w != other]
                for a in range(len(nb)):
                    for b in range(a + 1, len(nb)):
                        self._refresh(nb[a], nb[b])
        if self.mode == MODE_CORRECTED and self.lam > 0:
            present = j in adj[i]
            limit = 2 if present else 1
            deg = self.graph.degrees
            for c in (i, j):
                if deg[c] <= limit:
                    for k in range(self.n):
                        if k != c:
                            self._refresh(c, k)

    # public API ----------------------------------------------------------
    @property
    def total_rate(self) -> float:
        return self.tree.tree[1]

    def pair_rate(self, i: int, j: int) -> float:
        if i > j:
            i, j = j, i
        return self.tree.get(i * self.n + j)

    def toggle(self, i: int, j: int) -> bool:
        now = self.graph.toggle_edge(i, j)
        self._update_after_toggle(i, j)
        return now

    def step(self):
        total = self.tree.tree[1]
        if not total > 0.0:
            raise AbsorbedError("total event rate is zero")
        dt = -math.log(self.rng.random()) / total
        p = self.tree.sample(self.rng)
        i, j = divmod(p, self.n)
        self.graph.toggle_edge(i, j)
        self._update_after_toggle(i, j)
        self.sim_time += dt
        self.jumps += 1
        if self.jumps % RESUM_EVERY == 0:
            self.tree.resum()
        return dt, i, j

    def advance(self, k: int) -> None:
        for _ in range(k):
            self.step()

    def has_edge(self, i: int, j: int) -> bool:
        return self.graph.has_edge(i, j)

    def degree(self, v: int) -> int:
        return self.graph.degrees[v]

    def degrees(self) -> list[int]:
        return list(self.graph.degrees)

    @property
    def edge_count(self) -> int:
        return self.graph.edge_count

    def edges(self) -> list[tuple[int, int]]:
        return list(self.graph.edges())

    def edge_rate_sum(self) -> float:
        s = 0.0
        n = self.n
        get = self.tree.get
        for i, j in self.graph.edges():
            s += get(i * n + j)
        return s

    def rng_state(self) -> int:
        return self.rng.state
