"""Edge-list parsing, graph generators, and replayable edge streams.

The counting pipeline reads its input twice, so every source defined here
guarantees that consecutive full passes yield the same edges in the same
order, without the consumer ever needing random access or an in-memory
copy of the stream.
"""

from __future__ import annotations

import random
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Iterator, NamedTuple, Union

NodeLabel = str

GENERATOR_MODELS = ("complete", "path", "cycle", "gnp")


class GraphInputError(Exception):
    """Base for malformed input data or invalid generator parameters."""


class MalformedLine(GraphInputError):
    def __init__(self, line_no: int, detail: str):
        self.line_no = line_no
        super().__init__(f"MalformedLine {line_no}: {detail}")


class SelfLoop(GraphInputError):
    def __init__(self, line_no: int, token: str):
        self.line_no = line_no
        super().__init__(f"SelfLoop {line_no}: edge joins {token!r} to itself")


class InvalidSpec(GraphInputError):
    pass


class IoFailure(GraphInputError):
    pass


class Eof:
    """In-band end-of-stream sentinel, appended after the last edge.

    There is exactly one instance (``EOF``); consumers compare by identity.
    """

    _instance = None

    def __new__(cls) -> "Eof":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "eof"

    # Copying must preserve identity so that `item is EOF` stays valid.
    def __copy__(self) -> "Eof":
        return self

    def __deepcopy__(self, memo) -> "Eof":
        return self

    def __reduce__(self):
        return (Eof, ())


EOF = Eof()


class Edge(NamedTuple):
    """Undirected edge, stored in arrival order.

    (u, v) and (v, u) name the same edge; the stored order still matters
    because the first endpoint of an unclaimed edge becomes a stage's
    responsible node.  Use :meth:`key` wherever orientation-free identity
    is needed (deduplication, multiplicity counting).
    """

    u: NodeLabel
    v: NodeLabel

    def key(self) -> tuple[NodeLabel, NodeLabel]:
        return (self.u, self.v) if self.u <= self.v else (self.v, self.u)


StreamItem = Union[Edge, Eof]


def parse_edge_list(lines: Iterable[str]) -> Iterator[Edge]:
    """Parse a line-oriented edge list into edges, preserving file order.

    Each data line holds exactly two whitespace-separated tokens.  Blank
    lines and lines starting with ``#`` are skipped.  Raises
    :class:`MalformedLine` for any other token count and :class:`SelfLoop`
    when both tokens are equal.  Duplicate edges are passed through
    untouched; how they are interpreted is the pipeline's concern.
    """
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise MalformedLine(line_no, f"expected 2 tokens, got {len(tokens)}")
        u, v = tokens
        if u == v:
            raise SelfLoop(line_no, u)
        yield Edge(sys.intern(u), sys.intern(v))


def serialize_edges(edges: Iterable[Edge], out: IO[str]) -> int:
    """Write edges one per line in ``u v`` form; returns the line count."""
    n = 0
    for e in edges:
        out.write(f"{e.u} {e.v}\n")
        n += 1
    return n


def write_edge_list(path: str | Path, edges: Iterable[Edge]) -> int:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            return serialize_edges(edges, fh)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters for a deterministic graph generator.

    ``gnp`` draws each unordered node pair independently with probability
    ``p`` from a generator seeded with ``seed``, so repeated calls produce
    bit-identical edge sequences.
    """

    model: str
    n: int
    p: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.model not in GENERATOR_MODELS:
            raise InvalidSpec(f"unknown model {self.model!r}; choose from {GENERATOR_MODELS}")
        if self.n < 1:
            raise InvalidSpec(f"n must be >= 1, got {self.n}")
        if self.model == "cycle" and self.n < 3:
            raise InvalidSpec("cycle needs n >= 3 to avoid loops and duplicate edges")
        if self.model == "gnp":
            if self.p is None:
                raise InvalidSpec("gnp requires an edge probability p")
            if not 0.0 <= self.p <= 1.0:
                raise InvalidSpec(f"p must lie in [0, 1], got {self.p}")
        elif self.p is not None:
            raise InvalidSpec(f"model {self.model!r} takes no edge probability")

    def describe(self) -> str:
        if self.model == "gnp":
            return f"gnp(n={self.n}, p={self.p}, seed={self.seed})"
        return f"{self.model}(n={self.n})"


def generate(spec: GeneratorSpec) -> Iterator[Edge]:
    """Yield the edge sequence for ``spec``; node labels are "1".."n"."""
    label = [sys.intern(str(i)) for i in range(spec.n + 1)]
    if spec.model == "complete":
        for i in range(1, spec.n + 1):
            for j in range(i + 1, spec.n + 1):
                yield Edge(label[i], label[j])
    elif spec.model == "path":
        for i in range(1, spec.n):
            yield Edge(label[i], label[i + 1])
    elif spec.model == "cycle":
        for i in range(1, spec.n):
            yield Edge(label[i], label[i + 1])
        yield Edge(label[spec.n], label[1])
    elif spec.model == "gnp":
        rng = random.Random(spec.seed)
        p = spec.p
        for i in range(1, spec.n + 1):
            for j in range(i + 1, spec.n + 1):
                if rng.random() < p:
                    yield Edge(label[i], label[j])
    else:  # pragma: no cover - __post_init__ rejects everything else
        raise InvalidSpec(spec.model)


class EdgeSource:
    """A replayable edge stream.

    ``replay`` yields the edges followed by exactly one :data:`EOF`
    sentinel; calling it again yields the identical sequence.  Only one
    pass should read a source at a time (a finished pass's downstream
    consumers may still be draining, which is fine).
    """

    known_node_count: int | None = None

    def __init__(self):
        self.replay_count = 0

    def _edges(self) -> Iterator[Edge]:
        raise NotImplementedError

    def replay(self) -> Iterator[StreamItem]:
        self.replay_count += 1
        return self._items()

    def _items(self) -> Iterator[StreamItem]:
        yield from self._edges()
        yield EOF

    def describe(self) -> str:
        return type(self).__name__


class FileSource(EdgeSource):
    """Edge list read from a text file; every replay re-opens the file."""

    def __init__(self, path: str | Path):
        super().__init__()
        self.path = Path(path)

    def _edges(self) -> Iterator[Edge]:
        try:
            fh = open(self.path, "r", encoding="utf-8")
        except OSError as exc:
            raise IoFailure(f"cannot read {self.path}: {exc}") from exc
        with fh:
            yield from parse_edge_list(fh)

    def describe(self) -> str:
        return str(self.path)


class GeneratorSource(EdgeSource):
    """Edge stream produced by a :class:`GeneratorSpec`."""

    def __init__(self, spec: GeneratorSpec):
        super().__init__()
        self.spec = spec
        self.known_node_count = spec.n

    def _edges(self) -> Iterator[Edge]:
        return generate(self.spec)

    def describe(self) -> str:
        return self.spec.describe()


class MemorySource(EdgeSource):
    """In-memory edge list, mainly for tests and small library callers."""

    def __init__(self, edges: Iterable[Edge], node_count: int | None = None):
        super().__init__()
        self.edges = tuple(Edge(u, v) for u, v in edges)
        self.known_node_count = node_count

    def _edges(self) -> Iterator[Edge]:
        return iter(self.edges)

    def describe(self) -> str:
        return f"memory({len(self.edges)} edges)"


def replay(source: EdgeSource) -> Iterator[StreamItem]:
    """Replay ``source`` from the start: all edges, then one EOF."""
    return source.replay()
