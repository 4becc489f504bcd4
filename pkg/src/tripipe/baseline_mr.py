"""In-memory simulation of the two-round MapReduce node-iterator baseline.

Round one materializes every 2-path (wedge) in the graph; round two joins
the wedges against the edge set to find the closed ones.  The point of
the simulation is the intermediate data volume: the wedge count is
sum-over-nodes of C(deg, 2), while the pipeline stores one adjacency
entry per deduplicated edge.  No shuffling or partitioning is simulated;
the volume is partition-independent.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

from .engine import RunConfig, run_instrumented
from .graph_io import Edge, IoFailure, MemorySource, NodeLabel

VOLUME_CSV_HEADER = "graph_id,nodes,edges,mr_two_paths,pipeline_storage,triangles"


@dataclass(frozen=True)
class TwoPath:
    """A wedge: two edges sharing a middle node; ends stored sorted."""

    middle: NodeLabel
    ends: tuple[NodeLabel, NodeLabel]


@dataclass(frozen=True)
class MrStats:
    two_paths_emitted: int
    clustered_keys: int
    triangles: int


@dataclass(frozen=True)
class VolumeReport:
    graph_id: str
    nodes: int
    edges: int
    mr_two_paths: int
    pipeline_storage: int
    triangles: int

    def csv_row(self) -> str:
        return (f"{self.graph_id},{self.nodes},{self.edges},"
                f"{self.mr_two_paths},{self.pipeline_storage},{self.triangles}")


def _dedup_adjacency(edges: Iterable[Edge]) -> dict[NodeLabel, list[NodeLabel]]:
    neighbours: dict[NodeLabel, dict[NodeLabel, None]] = {}
    for u, v in edges:
        neighbours.setdefault(u, {}).setdefault(v)
        neighbours.setdefault(v, {}).setdefault(u)
    return {v: list(nbs) for v, nbs in neighbours.items()}


def mr_round1(edges: Sequence[Edge]) -> list[TwoPath]:
    """Emit every unordered pair of distinct neighbours of every node."""
    wedges: list[TwoPath] = []
    for middle, nbs in _dedup_adjacency(edges).items():
        for i, a in enumerate(nbs):
            for b in nbs[i + 1:]:
                ends = (a, b) if a <= b else (b, a)
                wedges.append(TwoPath(middle, ends))
    return wedges


def mr_round2(two_paths: Sequence[TwoPath], edges: Sequence[Edge]) -> MrStats:
    """Join wedges against edges by end pair and count the closed ones.

    Each key cluster holding an edge record contributes its wedge count
    (cluster size minus the edge record).  Every triangle is closed from
    its three middle nodes, so the joined total is divided by three.
    """
    wedge_clusters = Counter(tp.ends for tp in two_paths)
    edge_keys = {e.key() for e in edges}
    raw = sum(wedge_clusters[key] for key in edge_keys)
    assert raw % 3 == 0, f"closed-wedge total not divisible by 3: {raw}"
    return MrStats(
        two_paths_emitted=len(two_paths),
        clustered_keys=len(set(wedge_clusters) | edge_keys),
        triangles=raw // 3,
    )


def count_triangles_mr(edges: Sequence[Edge]) -> MrStats:
    return mr_round2(mr_round1(edges), edges)


def compare_volumes(edges: Sequence[Edge], graph_id: str = "graph") -> VolumeReport:
    """Contrast the baseline's wedge volume with the pipeline's storage.

    Runs both on the same edge list; their triangle totals must agree.
    """
    edges = [Edge(u, v) for u, v in edges]
    stats = count_triangles_mr(edges)
    diag = run_instrumented(MemorySource(edges), RunConfig(mode="set"))
    storage = sum(r.stored for r in diag.stage_reports)
    assert stats.triangles == diag.result.total, (
        f"baseline found {stats.triangles} triangles, pipeline {diag.result.total}")
    nodes = set()
    for u, v in edges:
        nodes.add(u)
        nodes.add(v)
    return VolumeReport(
        graph_id=graph_id,
        nodes=len(nodes),
        edges=diag.dedup_edge_count,
        mr_two_paths=stats.two_paths_emitted,
        pipeline_storage=storage,
        triangles=stats.triangles,
    )


def write_volume_csv(reports: Iterable[VolumeReport], out: IO[str]) -> None:
    out.write(VOLUME_CSV_HEADER + "\n")
    for r in reports:
        out.write(r.csv_row() + "\n")


def export_volume_csv(reports: Iterable[VolumeReport], path: str | Path) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            write_volume_csv(reports, fh)
    except OSError as exc:
        raise IoFailure(f"cannot write volume report to {path}: {exc}") from exc
