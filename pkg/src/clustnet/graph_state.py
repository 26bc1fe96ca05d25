"""Mutable simple graph on the dense vertex set ``0..n-1``.

Adjacency is kept as one Python ``set`` per vertex plus a cached degree
array, so degree queries are O(1) and common-neighbour queries cost
O(min degree).  Iteration helpers always return sorted output so that
anything summing over neighbourhoods is reproducible.
"""
from __future__ import annotations

from typing import Iterable, Iterator, TextIO


class GraphState:
    """Simple undirected graph with incremental edge toggles.

    Parameters
    ----------
    n : int
        Number of vertices, labelled ``0..n-1``.
    """

    __slots__ = ("n", "adjacency", "degrees", "edge_count")

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"vertex count must be positive, got {n}")
        self.n = int(n)
        self.adjacency: list[set[int]] = [set() for _ in range(self.n)]
        self.degrees: list[int] = [0] * self.n
        self.edge_count = 0

    def __repr__(self) -> str:
        return f"GraphState(n={self.n}, edges={self.edge_count})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphState):
            return NotImplemented
        return self.n == other.n and self.adjacency == other.adjacency

    def _check_pair(self, i: int, j: int) -> None:
        if i == j:
            raise ValueError(f"self-loop ({i}, {j}) is not allowed")
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise IndexError(f"pair ({i}, {j}) out of range for n={self.n}")

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.adjacency[i]

    def toggle_edge(self, i: int, j: int) -> bool:
        """Flip the adjacency status of ``{i, j}``; return the new status."""
        self._check_pair(i, j)
        adj_i, adj_j = self.adjacency[i], self.adjacency[j]
        if j in adj_i:
            adj_i.discard(j)
            adj_j.discard(i)
            self.degrees[i] -= 1
            self.degrees[j] -= 1
            self.edge_count -= 1
            return False
        adj_i.add(j)
        adj_j.add(i)
        self.degrees[i] += 1
        self.degrees[j] += 1
        self.edge_count += 1
        return True

    def add_edges(self, edges: Iterable[tuple[int, int]]) -> "GraphState":
        for i, j in edges:
            if not self.has_edge(i, j):
                self.toggle_edge(i, j)
        return self

    def neighbors(self, v: int) -> list[int]:
        return sorted(self.adjacency[v])

    def common_neighbors(self, i: int, j: int) -> set[int]:
        if i == j:
            raise ValueError("common neighbours need two distinct vertices")
        a, b = self.adjacency[i], self.adjacency[j]
        if len(a) > len(b):
            a, b = b, a
        return {v for v in a if v in b}

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield edges ``(i, j)`` with ``i < j`` in ascending order."""
        for i in range(self.n):
            for j in sorted(self.adjacency[i]):
                if j > i:
                    yield i, j

    def copy(self) -> "GraphState":
        g = GraphState.__new__(GraphState)
        g.n = self.n
        g.adjacency = [set(a) for a in self.adjacency]
        g.degrees = list(self.degrees)
        g.edge_count = self.edge_count
        return g

    def triangles_at(self, v: int) -> int:
        """Number of edges inside the neighbourhood of ``v``."""
        nbrs = self.adjacency[v]
        if len(nbrs) < 2:
            return 0
        adj = self.adjacency
        return sum(len(nbrs & adj[u]) for u in nbrs) // 2

    def triangle_counts(self) -> list[int]:
        return [self.triangles_at(v) for v in range(self.n)]


    def triangle_count(self) -> int:
        return sum(self.triangle_counts()) // 3

    def two_path_count(self) -> int:
        return sum(d * (d - 1) // 2 for d in self.degrees)

    def component_sizes(self) -> list[int]:
        uf = UnionFind(self.n)
        for i, j in self.edges():
            uf.union(i, j)
        return uf.sizes()

    def largest_component_size(self) -> int:
        return max(self.component_sizes())

    def write_edgelist(self, fh: TextIO) -> None:
        for i, j in self.edges():
            fh.write(f"{i} {j}\n")


def new_empty(n: int) -> GraphState:
    return GraphState(n)


def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> GraphState:
    return GraphState(n).add_edges(edges)


def complete_graph(n: int) -> GraphState:
    return from_edges(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def read_edgelist(n: int, fh: TextIO) -> GraphState:
    g = GraphState(n)
    for line in fh:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        i, j = (int(t) for t in line.split())
        if not g.has_edge(i, j):
            g.toggle_edge(i, j)
    return g


class UnionFind:
    """Disjoint sets with union by size and path halving."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def sizes(self) -> list[int]:
        return [self.size[r] for r in range(len(self.parent)) if self.parent[r] == r]
