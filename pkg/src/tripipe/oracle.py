"""Brute-force triangle counters used as ground truth.

These are written in the most direct style available and capped in size;
they exist to be obviously correct, not fast.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .graph_io import Edge, NodeLabel

MAX_NODES = 2000
MAX_EDGES = 50000


class DenseGraph:
    """Adjacency-matrix graph over nodes indexed 0..n-1.

    Simple graphs use 0/1 rows; multigraphs keep an occurrence count per
    pair.  The matrix is symmetric with a zero diagonal.
    """

    __slots__ = ("n", "matrix", "labels", "multigraph")

    def __init__(self, n: int, multigraph: bool = False,
                 labels: Sequence[NodeLabel] | None = None):
        if n > MAX_NODES:
            raise ValueError(f"oracle graphs are capped at {MAX_NODES} nodes, got {n}")
        self.n = n
        self.multigraph = multigraph
        self.matrix = [bytearray(n) if not multigraph else [0] * n for _ in range(n)]
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[NodeLabel, NodeLabel]],
                   multigraph: bool = False) -> "DenseGraph":
        edges = [Edge(u, v) for u, v in edges]
        if len(edges) > MAX_EDGES:
            raise ValueError(f"oracle graphs are capped at {MAX_EDGES} edges, got {len(edges)}")
        index: dict[NodeLabel, int] = {}
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop {u!r}")
            index.setdefault(u, len(index))
            index.setdefault(v, len(index))
        g = cls(len(index), multigraph, labels=list(index))
        m = g.matrix
        for u, v in edges:
            i, j = index[u], index[v]
            if multigraph:
                m[i][j] += 1
                m[j][i] += 1
            else:
                m[i][j] = 1
                m[j][i] = 1
        return g

    def neighbors(self, i: int) -> list[int]:
        row = self.matrix[i]
        return [j for j in range(self.n) if row[j]]

    def edge_count(self) -> int:
        total = sum(sum(row) for row in self.matrix)
        return total // 2


def ordered_path_hits(g: DenseGraph) -> int:
    """Raw accumulator of the naive triple loop.

    Counts ordered (v, u, w) with u, w neighbours of v and (u, w) an edge.
    Every triangle produces exactly six such hits, so the total is always
    divisible by six.
    """
    if g.multigraph:
        raise ValueError("naive counting is defined on simple graphs")
    matrix = g.matrix
    hits = 0
    for v in range(g.n):
        nbrs = g.neighbors(v)
        for u in nbrs:
            row_u = matrix[u]
            s = 0
            for w in nbrs:
                s += row_u[w]
            hits += s
    return hits


def naive_count(g: DenseGraph) -> int:
    """Triple-loop count over the adjacency matrix, exact."""
    hits = ordered_path_hits(g)
    assert hits % 6 == 0, f"six-fold counting broken: {hits} ordered hits"
    return hits // 6


def node_iterator_count(g: DenseGraph) -> int:
    """Sum over nodes of the edges among their neighbours, divided by 3."""
    if g.multigraph:
        raise ValueError("node-iterator counting is defined on simple graphs")
    matrix = g.matrix
    total = 0
    for v in range(g.n):
        nbrs = g.neighbors(v)
        t_v = 0
        for i, u in enumerate(nbrs):
            row_u = matrix[u]
            for w in nbrs[i + 1:]:
                t_v += row_u[w]
        total += t_v
    assert total % 3 == 0, f"per-node triangle sum not divisible by 3: {total}"
    return total // 3


def multigraph_count(edges: Iterable[tuple[NodeLabel, NodeLabel]]) -> int:
    """Triangles over distinct edge occurrences.

    A triple of distinct occurrences forms a triangle exactly when its
    three underlying edges join three distinct nodes pairwise, so each
    node triangle contributes the product of its edge multiplicities.
    """
    g = DenseGraph.from_edges(edges, multigraph=True)
    m = g.matrix
    total = 0
    for u in range(g.n):
        row_u = m[u]
        for v in range(u + 1, g.n):
            muv = row_u[v]
            if not muv:
                continue
            row_v = m[v]
            for w in range(v + 1, g.n):
                if row_v[w] and row_u[w]:
                    total += muv * row_v[w] * row_u[w]
    return total
