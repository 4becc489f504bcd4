import io
import random

import pytest

from tripipe.graph_io import (
    EOF,
    Edge,
    Eof,
    FileSource,
    GeneratorSource,
    GeneratorSpec,
    InvalidSpec,
    IoFailure,
    MalformedLine,
    MemorySource,
    SelfLoop,
    generate,
    parse_edge_list,
    replay,
    serialize_edges,
)


def test_parse_plain_edges():
    assert list(parse_edge_list(["1 2", "1 3", "2 3"])) == [
        Edge("1", "2"), Edge("1", "3"), Edge("2", "3")]


def test_parse_skips_comments_and_blank_lines():
    assert list(parse_edge_list(["# comment", "", "   ", "a b"])) == [Edge("a", "b")]


def test_parse_rejects_self_loop_with_line_number():
    with pytest.raises(SelfLoop) as exc:
        list(parse_edge_list(["1 1"]))
    assert exc.value.line_no == 1
    assert "SelfLoop 1" in str(exc.value)


def test_parse_rejects_wrong_token_count():
    with pytest.raises(MalformedLine) as exc:
        list(parse_edge_list(["1 2", "a b c"]))
    assert exc.value.line_no == 2
    assert "MalformedLine 2" in str(exc.value)


def test_parse_passes_duplicates_through():
    edges = list(parse_edge_list(["1 2", "2 1", "1 2"]))
    assert len(edges) == 3
    assert {e.key() for e in edges} == {("1", "2")}


def test_edge_key_is_orientation_free():
    assert Edge("b", "a").key() == Edge("a", "b").key() == ("a", "b")


def test_generate_complete_counts():
    assert len(list(generate(GeneratorSpec("complete", 4)))) == 6
    assert len(list(generate(GeneratorSpec("complete", 1)))) == 0


def test_generate_path_and_cycle_counts():
    assert len(list(generate(GeneratorSpec("path", 5)))) == 4
    assert len(list(generate(GeneratorSpec("path", 1)))) == 0
    assert len(list(generate(GeneratorSpec("cycle", 3)))) == 3
    assert len(list(generate(GeneratorSpec("cycle", 7)))) == 7


def test_gnp_is_seed_deterministic():
    spec = GeneratorSpec("gnp", 100, 0.1, 7)
    assert list(generate(spec)) == list(generate(spec))


def test_gnp_different_seeds_differ():
    a = list(generate(GeneratorSpec("gnp", 60, 0.3, 1)))
    b = list(generate(GeneratorSpec("gnp", 60, 0.3, 2)))
    assert a != b


@pytest.mark.parametrize("kwargs", [
    dict(model="complete", n=0),
    dict(model="gnp", n=10, p=1.5),
    dict(model="gnp", n=10, p=-0.1),
    dict(model="gnp", n=10),
    dict(model="cycle", n=2),
    dict(model="path", n=5, p=0.5),
    dict(model="torus", n=5),
])
def test_invalid_specs_rejected(kwargs):
    with pytest.raises(InvalidSpec):
        GeneratorSpec(**kwargs)


def test_replay_appends_single_eof():
    items = list(replay(MemorySource([Edge("1", "2")])))
    assert items == [Edge("1", "2"), EOF]


def test_replay_of_empty_source_is_just_eof():
    assert list(replay(MemorySource([]))) == [EOF]


def test_eof_is_a_singleton():
    assert Eof() is EOF
    import copy
    assert copy.deepcopy(EOF) is EOF


def test_replays_are_identical(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("1 2\n# note\n2 3\n3 4\n")
    src = FileSource(path)
    runs = [list(src.replay()) for _ in range(3)]
    assert runs[0] == runs[1] == runs[2]
    assert src.replay_count == 3


def test_generator_source_replays_identically():
    src = GeneratorSource(GeneratorSpec("gnp", 40, 0.2, 5))
    assert list(src.replay()) == list(src.replay())
    assert src.known_node_count == 40


def test_serialize_parse_round_trip():
    rng = random.Random(3)
    edges = [Edge(str(rng.randint(1, 30)), str(rng.randint(31, 60))) for _ in range(50)]
    buf = io.StringIO()
    assert serialize_edges(edges, buf) == 50
    assert list(parse_edge_list(buf.getvalue().splitlines())) == edges


def test_file_source_missing_file_is_io_failure(tmp_path):
    src = FileSource(tmp_path / "nope.txt")
    with pytest.raises(IoFailure):
        list(src.replay())


def test_file_source_parse_error_carries_line(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("1 2\n1 2 3\n")
    with pytest.raises(MalformedLine) as exc:
        list(FileSource(path).replay())
    assert exc.value.line_no == 2
