"""Streaming triangle counting with a dynamic two-pass pipeline.

The library turns an edge stream into a chain of stage actors.  Each
stage claims a responsible node from the first edge it sees, collects
that node's neighbours during the first pass, and counts the edges that
close a triangle over two of them during the second pass.  Brute-force
counters, a MapReduce-style baseline simulation, and parallelism-profile
instrumentation ride along for verification and comparison.
"""

from .baseline_mr import (
    MrStats,
    TwoPath,
    VolumeReport,
    compare_volumes,
    count_triangles_mr,
    mr_round1,
    mr_round2,
)
from .engine import (
    BoundExceeded,
    Channel,
    ConfigError,
    Deadlock,
    Pipeline,
    PipelineResult,
    RunConfig,
    RunDiagnostics,
    StageReport,
    aggregate,
    run_cooperative,
    run_instrumented,
    run_two_rounds,
)
from .graph_io import (
    EOF,
    Edge,
    EdgeSource,
    Eof,
    FileSource,
    GeneratorSource,
    GeneratorSpec,
    GraphInputError,
    InvalidSpec,
    IoFailure,
    MalformedLine,
    MemorySource,
    NodeLabel,
    SelfLoop,
    StreamItem,
    generate,
    parse_edge_list,
    replay,
    serialize_edges,
    write_edge_list,
)
from .metrics import (
    ParallelismProfile,
    ProfileEntry,
    StageSnapshot,
    count_fireable,
    export_profile,
)
from .oracle import DenseGraph, multigraph_count, naive_count, node_iterator_count
from .stage import (
    AdjacencySet,
    ProtocolViolation,
    Role,
    StageState,
    StepOutput,
    closure_increment,
    initial_state,
    step,
    step_collect,
    step_count,
    step_pick,
)

__version__ = "0.1.0"
