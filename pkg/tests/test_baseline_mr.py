import io
from math import comb

from tripipe.baseline_mr import (
    VOLUME_CSV_HEADER,
    compare_volumes,
    count_triangles_mr,
    mr_round1,
    mr_round2,
    write_volume_csv,
)
from tripipe.graph_io import Edge, GeneratorSpec, generate
from tripipe.oracle import DenseGraph, naive_count


def edges_of(model, n, p=None, seed=0):
    return list(generate(GeneratorSpec(model, n, p, seed)))


def star_edges(k):
    return [Edge("hub", f"leaf{i}") for i in range(1, k + 1)]


def test_round1_triangle_emits_three_wedges():
    wedges = mr_round1(edges_of("complete", 3))
    assert len(wedges) == 3
    assert {w.middle for w in wedges} == {"1", "2", "3"}


def test_round1_star_emits_all_hub_wedges():
    k = 9
    wedges = mr_round1(star_edges(k))
    assert len(wedges) == comb(k, 2)
    assert all(w.middle == "hub" for w in wedges)


def test_round1_path_emits_interior_wedges():
    assert len(mr_round1(edges_of("path", 4))) == 2


def test_round1_cardinality_is_sum_of_degree_choose_two():
    edges = edges_of("gnp", 40, 0.3, 5)
    degree = {}
    for u, v in edges:
        degree[u] = degree.get(u, 0) + 1
        degree[v] = degree.get(v, 0) + 1
    assert len(mr_round1(edges)) == sum(comb(d, 2) for d in degree.values())


def test_round2_normalizes_triple_discovery():
    k3 = edges_of("complete", 3)
    stats = mr_round2(mr_round1(k3), k3)
    assert stats.triangles == 1
    assert stats.two_paths_emitted == 3


def test_round2_path_closes_nothing():
    path = edges_of("path", 6)
    assert mr_round2(mr_round1(path), path).triangles == 0


def test_mr_matches_oracle_on_random_graph():
    edges = edges_of("gnp", 100, 0.1, 3)
    stats = count_triangles_mr(edges)
    assert stats.triangles == naive_count(DenseGraph.from_edges(edges))
    assert stats.triangles <= stats.two_paths_emitted


def test_compare_volumes_star():
    report = compare_volumes(star_edges(50), graph_id="star51")
    assert report.mr_two_paths == 1225
    assert report.pipeline_storage == 50
    assert report.nodes == 51
    assert report.triangles == 0


def test_compare_volumes_complete_ten():
    report = compare_volumes(edges_of("complete", 10), graph_id="k10")
    assert report.mr_two_paths == 360
    assert report.pipeline_storage == 45
    assert report.triangles == 120


def test_compare_volumes_path_hundred():
    report = compare_volumes(edges_of("path", 100), graph_id="path100")
    assert report.mr_two_paths == 98
    assert report.pipeline_storage == 99
    assert report.triangles == 0


def test_pipeline_storage_always_equals_edge_count():
    for spec in [("gnp", 60, 0.2, 1), ("complete", 8, None, 0), ("cycle", 12, None, 0)]:
        edges = edges_of(*spec)
        report = compare_volumes(edges)
        assert report.pipeline_storage == report.edges == len({e.key() for e in edges})


def test_csv_row_format():
    report = compare_volumes(edges_of("complete", 4), graph_id="k4")
    assert report.csv_row() == "k4,4,6,12,6,4"
    buf = io.StringIO()
    write_volume_csv([report], buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == VOLUME_CSV_HEADER
    assert lines[1] == report.csv_row()
