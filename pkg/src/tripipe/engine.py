"""Two-pass pipeline construction and execution.

The pipeline is a linear chain of stage actors joined by FIFO channels.
Pass one grows the chain lazily: an edge that no existing stage absorbs
falls past the tail and becomes the responsible node of a freshly
spawned stage, so the chain never exceeds one stage per node minus one.
Pass two replays the stream through the finished chain; every stage
counts its triangles, reports its local count in chain order, and dies,
leaving an empty pipeline.

Three interchangeable drivers execute the chain and must produce
identical results:

* a fast single-threaded driver that sweeps the chain in capacity-sized
  chunks (the default),
* a lockstep single-threaded driver that fires the maximal ready set of
  stages once per superstep and records the parallelism profile,
* a pool of worker threads pulling ready stages from a shared queue.

End of stream is an in-band sentinel item, never a channel close, and a
channel has exactly one producer and one consumer.  Because the chain is
acyclic, the run-when-ready rule cannot deadlock; a Deadlock raise
signals an engine bug, not a property of the input.
"""

from __future__ import annotations

import queue
import threading
import time
from collections import deque
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Iterator

from .graph_io import EOF, Edge, EdgeSource, NodeLabel
from .metrics import ParallelismProfile, StageSnapshot, export_profile
from .stage import (
    ADJACENCY_MODES,
    MULTISET_RULES,
    AdjacencySet,
    ProtocolViolation,
    Role,
    StageState,
    initial_state,
)
from .stage import step as stage_step

_NO_ITEM = object()
_STOP = object()
_STALL_TIMEOUT = 10.0


class ConfigError(ValueError):
    """A run configuration that can be rejected before reading any input."""


class Deadlock(RuntimeError):
    """The scheduler stopped making progress; unreachable on a correct chain."""


class BoundExceeded(RuntimeError):
    """More stages spawned than the input's node count allows."""


@dataclass(frozen=True)
class RunConfig:
    """How to run the two passes.

    ``channel_capacity`` of None means unbounded channels; results never
    depend on the capacity, only throughput does.  The parallelism
    profile needs the lockstep accounting of the cooperative scheduler,
    so combining ``profile_path`` with threads is rejected outright.
    """

    mode: str = "set"
    multiset_rule: str = "product"
    scheduler: str = "cooperative"
    workers: int = 1
    channel_capacity: int | None = 1024
    profile_path: str | Path | None = None

    def __post_init__(self):
        if self.mode not in ADJACENCY_MODES:
            raise ConfigError(f"unknown adjacency mode {self.mode!r}")
        if self.multiset_rule not in MULTISET_RULES:
            raise ConfigError(f"unknown multiset rule {self.multiset_rule!r}")
        if self.scheduler not in ("cooperative", "threads"):
            raise ConfigError(f"unknown scheduler {self.scheduler!r}")
        if self.workers < 1:
            raise ConfigError("threads(k) requires k >= 1")
        if self.channel_capacity is not None and self.channel_capacity < 1:
            raise ConfigError("channel capacity must be >= 1 (or None for unbounded)")
        if self.profile_path is not None and self.scheduler == "threads":
            raise ConfigError(
                "the parallelism profile requires lockstep steps and is only "
                "defined under the cooperative scheduler")


class Channel:
    """FIFO link with one producer and one consumer stage."""

    __slots__ = ("items", "capacity")

    def __init__(self, capacity: int | None):
        self.items: deque = deque()
        self.capacity = capacity

    def has_space(self) -> bool:
        return self.capacity is None or len(self.items) < self.capacity

    def __len__(self) -> int:
        return len(self.items)


class StageActor:
    """A live stage: its semantic state plus scheduling plumbing."""

    __slots__ = ("index", "state", "inbox", "downstream", "upstream",
                 "lock", "queued", "running", "alive")

    def __init__(self, index: int, mode: str, capacity: int | None):
        self.index = index
        self.state: StageState = initial_state(mode)
        self.inbox = Channel(capacity)
        self.downstream: StageActor | None = None
        self.upstream: StageActor | None = None
        self.lock = threading.Lock()
        self.queued = False
        self.running = False
        self.alive = True


@dataclass(frozen=True)
class PipelineResult:
    """Per-responsible counts in chain order plus their sum."""

    per_responsible: tuple[tuple[NodeLabel, int], ...]
    total: int


@dataclass(frozen=True)
class StageReport:
    """Post-mortem view of one stage, kept by instrumented runs."""

    index: int
    responsible: NodeLabel
    members: object
    stored: int
    distinct: int
    count: int


@dataclass
class RunDiagnostics:
    result: PipelineResult
    stage_reports: list[StageReport]
    sink_edges_round1: int
    sink_edges_round2: int
    edges_fed_round1: int
    edges_fed_round2: int
    nodes: frozenset[NodeLabel]
    dedup_edge_count: int
    duplicate_count: int
    steps: int
    spawn_count: int
    profile: ParallelismProfile | None
    edge_occurrences: tuple[Edge, ...] | None


def aggregate(results: Iterable[tuple[NodeLabel, int]]) -> PipelineResult:
    """Fold per-stage counts into the final result, preserving order."""
    pairs = tuple((label, count) for label, count in results)
    return PipelineResult(per_responsible=pairs, total=sum(c for _, c in pairs))


class Pipeline:
    """The chain of stage actors plus bookkeeping shared by all drivers."""

    def __init__(self, config: RunConfig, known_node_count: int | None = None,
                 collect_reports: bool = False, keep_edges: bool = False):
        self.config = config
        self.known_node_count = known_node_count
        self.stages: list[StageActor] = []
        self.tail = Channel(config.channel_capacity)
        self.results: list[tuple[NodeLabel, int]] = []
        self.stage_reports: list[StageReport] = []
        self.collect_reports = collect_reports
        self.keep_edges = keep_edges
        self.edge_occurrences: list[Edge] = []
        self.sink_edges = {1: 0, 2: 0}
        self.sink_eof = {1: False, 2: False}
        self.edges_fed = {1: 0, 2: 0}
        self.nodes_seen: set[NodeLabel] = set()
        self._edge_keys: set[tuple[NodeLabel, NodeLabel]] = set()
        self.spawn_count = 0
        self.live_count = 0
        self.steps = 0
        self.current_round = 0
        self._chain_lock = threading.RLock()
        self._ready: queue.SimpleQueue | None = None
        self._round_event: threading.Event | None = None
        self._worker_error: BaseException | None = None

    def stage_bound(self) -> int | None:
        n = self.known_node_count
        return None if n is None else max(0, n - 1)

    def spawn_stage(self, adopt_tail: bool = False) -> StageActor:
        """Append a fresh pick-a-responsible stage at the tail.

        With ``adopt_tail`` the current past-the-end channel becomes the
        new stage's inbox (its pending items are the items that just fell
        past the old tail) and a fresh tail channel is created.
        """
        with self._chain_lock:
            bound = self.stage_bound()
            if bound is not None and self.spawn_count + 1 > bound:
                raise BoundExceeded(
                    f"stage {self.spawn_count + 1} would exceed the bound of "
                    f"{bound} for {self.known_node_count} nodes")
            actor = StageActor(self.spawn_count, self.config.mode,
                               self.config.channel_capacity)
            self.spawn_count += 1
            if self.stages:
                prev = self.stages[-1]
                prev.downstream = actor
                actor.upstream = prev
            if adopt_tail:
                actor.inbox = self.tail
                self.tail = Channel(self.config.channel_capacity)
            self.stages.append(actor)
            self.live_count += 1
            return actor

    def _note_edge_fed(self, edge: Edge, round_no: int) -> None:
        self.edges_fed[round_no] += 1
        if round_no == 1:
            self.nodes_seen.add(edge.u)
            self.nodes_seen.add(edge.v)
            if self.collect_reports:
                self._edge_keys.add(edge.key())
            if self.keep_edges:
                self.edge_occurrences.append(edge)

    def _record_death(self, actor: StageActor) -> None:
        # Must run before the stage forwards its final eof so that the
        # result sequence is in chain order under every scheduler.
        state = actor.state
        actor.alive = False
        with self._chain_lock:
            self.live_count -= 1
            if state.responsible is not None:
                self.results.append((state.responsible, state.count))
                if self.collect_reports:
                    adj = state.adjacency
                    self.stage_reports.append(StageReport(
                        index=actor.index,
                        responsible=state.responsible,
                        members=adj.snapshot(),
                        stored=len(adj),
                        distinct=adj.distinct_count(),
                        count=state.count,
                    ))

    def _schedule(self, actor: StageActor) -> None:
        with actor.lock:
            if actor.queued or actor.running or not actor.alive:
                return
            actor.queued = True
        self._ready.put(actor)


# ---------------------------------------------------------------------------
# fast cooperative driver: sweep the chain in capacity-sized chunks


def _drive_cooperative(pipeline: Pipeline, source: EdgeSource) -> None:
    for round_no in (1, 2):
        _fast_round(pipeline, source.replay(), round_no)


def _fast_round(pipeline: Pipeline, items: Iterator, round_no: int) -> None:
    cap = pipeline.config.channel_capacity
    chunk = cap if cap is not None else 4096
    it = iter(items)
    eof_fed = False
    while not pipeline.sink_eof[round_no]:
        fed = 0
        while fed < chunk:
            item = next(it, _NO_ITEM)
            if item is _NO_ITEM:
                if not eof_fed:
                    raise ProtocolViolation("stream ended without eof")
                break
            if eof_fed:
                raise ProtocolViolation("source yielded items after eof")
            if item is EOF:
                eof_fed = True
            else:
                pipeline._note_edge_fed(item, round_no)
            if pipeline.stages:
                pipeline.stages[0].inbox.items.append(item)
            else:
                pipeline.tail.items.append(item)
            fed += 1
            if eof_fed:
                break
        _sweep(pipeline, round_no)
        if fed == 0 and not pipeline.sink_eof[round_no]:
            raise Deadlock(f"round {round_no} stalled with items pending")
    if next(it, _NO_ITEM) is not _NO_ITEM:
        raise ProtocolViolation("source yielded items after eof")


def _sweep(pipeline: Pipeline, round_no: int) -> None:
    """Drain every stage in chain order; all inboxes are empty afterwards."""
    stages = pipeline.stages
    i = 0
    while True:
        if i == len(stages):
            if not _drain_tail(pipeline, round_no):
                break
            continue  # a stage was just spawned at index i; drain it too
        if stages[i].alive:
            _drain_stage(pipeline, stages, i)
        i += 1
    if any(not a.alive for a in stages):
        pipeline.stages = [a for a in stages if a.alive]


def _drain_tail(pipeline: Pipeline, round_no: int) -> bool:
    """Consume items past the last stage; returns True after spawning."""
    items = pipeline.tail.items
    while items:
        if round_no == 1 and items[0] is not EOF:
            pipeline.spawn_stage(adopt_tail=True)
            return True
        item = items.popleft()
        if item is EOF:
            pipeline.sink_eof[round_no] = True
        else:
            pipeline.sink_edges[round_no] += 1
    return False


def _drain_stage(pipeline: Pipeline, stages: list[StageActor], i: int) -> None:
    # Hot path: inlined role loops, one pass over the whole inbox.  The
    # lockstep and threaded drivers run the same transitions through the
    # pure step functions; the results must be identical.
    actor = stages[i]
    inbox = actor.inbox.items
    consumed = len(inbox)
    if not consumed:
        return
    nxt = stages[i + 1].inbox.items if i + 1 < len(stages) else pipeline.tail.items
    state = actor.state
    role = state.role
    mode = state.mode

    if role is Role.PICK_RESPONSIBLE:
        item = inbox.popleft()
        if item is EOF:
            actor.state = StageState(Role.DEAD, None, 0, mode)
            actor.alive = False
            pipeline._record_death(actor)
            nxt.append(EOF)
            pipeline.steps += 1
            return
        adj = AdjacencySet(item.u, mode, (item.v,))
        state = StageState(Role.COLLECT_ADJACENT, adj, 0, mode)
        actor.state = state
        role = state.role

    append = nxt.append
    pop = inbox.popleft

    if role is Role.COLLECT_ADJACENT:
        adj = state.adjacency
        r = adj.responsible
        members = adj.members
        if mode == "set":
            add = members.add
            while inbox:
                item = pop()
                if item is EOF:
                    actor.state = StageState(Role.COUNT_TRIANGLES, adj, 0, mode)
                    append(EOF)
                    break
                u, v = item
                if u == r:
                    add(v)
                elif v == r:
                    add(u)
                else:
                    append(item)
        elif mode == "multiset":
            while inbox:
                item = pop()
                if item is EOF:
                    actor.state = StageState(Role.COUNT_TRIANGLES, adj, 0, mode)
                    append(EOF)
                    break
                u, v = item
                if u == r:
                    members[v] += 1
                elif v == r:
                    members[u] += 1
                else:
                    append(item)
        else:  # list mode: newest neighbour first
            while inbox:
                item = pop()
                if item is EOF:
                    actor.state = StageState(Role.COUNT_TRIANGLES, adj, 0, mode)
                    append(EOF)
                    break
                u, v = item
                if u == r:
                    members.insert(0, v)
                elif v == r:
                    members.insert(0, u)
                else:
                    append(item)

    elif role is Role.COUNT_TRIANGLES:
        adj = state.adjacency
        members = adj.members
        cnt = state.count
        if mode == "multiset":
            product_rule = pipeline.config.multiset_rule == "product"
            while inbox:
                item = pop()
                if item is EOF:
                    actor.state = StageState(Role.DEAD, adj, cnt, mode)
                    pipeline._record_death(actor)
                    append(EOF)
                    break
                u, v = item
                if u in members and v in members:
                    mu = members[u]
                    mv = members[v]
                    cnt += mu * mv if product_rule else (mu if mu < mv else mv)
                append(item)
            else:
                actor.state = StageState(Role.COUNT_TRIANGLES, adj, cnt, mode)
        else:
            while inbox:
                item = pop()
                if item is EOF:
                    actor.state = StageState(Role.DEAD, adj, cnt, mode)
                    pipeline._record_death(actor)
                    append(EOF)
                    break
                u, v = item
                if u in members and v in members:
                    cnt += 1
                append(item)
            else:
                actor.state = StageState(Role.COUNT_TRIANGLES, adj, cnt, mode)

    pipeline.steps += consumed


# ---------------------------------------------------------------------------
# lockstep driver: one superstep fires the maximal ready set once


def _drive_lockstep(pipeline: Pipeline, source: EdgeSource,
                    profile: ParallelismProfile | None) -> None:
    rule = pipeline.config.multiset_rule
    for round_no in (1, 2):
        items = source.replay()
        pending = next(items, _NO_ITEM)
        if pending is _NO_ITEM:
            raise ProtocolViolation("stream ended without eof")
        eof_fed = False
        while True:
            progressed = False
            if pending is not _NO_ITEM:
                if _lockstep_deliver(pipeline, pending, round_no):
                    if pending is EOF:
                        eof_fed = True
                    pending = next(items, _NO_ITEM)
                    if eof_fed and pending is not _NO_ITEM:
                        raise ProtocolViolation("source yielded items after eof")
                    if pending is _NO_ITEM and not eof_fed:
                        raise ProtocolViolation("stream ended without eof")
                    progressed = True
            live = [a for a in pipeline.stages if a.alive]
            snapshot = [StageSnapshot(len(a.inbox.items), _outbox_free(a)) for a in live]
            if profile is not None:
                profile.record_step(snapshot, round_no)
            fireable = [a for a, s in zip(live, snapshot) if s.pending and s.output_free]
            # Fire downstream-first so a bounded channel is popped before
            # its producer pushes within the same superstep.
            for actor in reversed(fireable):
                item = actor.inbox.items.popleft()
                new_state, out = stage_step(actor.state, item, rule)
                actor.state = new_state
                pipeline.steps += 1
                if new_state.role is Role.DEAD:
                    pipeline._record_death(actor)
                if out.emit is not None:
                    _lockstep_route(pipeline, actor, out.emit, round_no)
                progressed = True
            if pipeline.sink_eof[round_no]:
                break
            if not progressed:
                raise Deadlock(f"round {round_no}: nothing fireable, nothing to feed")
        pipeline.stages = [a for a in pipeline.stages if a.alive]


def _outbox_free(actor: StageActor) -> bool:
    down = actor.downstream
    return down is None or down.inbox.has_space()


def _lockstep_deliver(pipeline: Pipeline, item, round_no: int) -> bool:
    stages = pipeline.stages
    if not stages:
        if item is EOF:
            pipeline.sink_eof[round_no] = True
            return True
        # First edge of pass one: claim it in the first spawned stage.
        actor = pipeline.spawn_stage()
        pipeline._note_edge_fed(item, round_no)
        actor.inbox.items.append(item)
        return True
    head = stages[0]
    if not head.inbox.has_space():
        return False
    if item is not EOF:
        pipeline._note_edge_fed(item, round_no)
    head.inbox.items.append(item)
    return True


def _lockstep_route(pipeline: Pipeline, actor: StageActor, item, round_no: int) -> None:
    down = actor.downstream
    if down is not None:
        down.inbox.items.append(item)
        return
    if item is EOF:
        pipeline.sink_eof[round_no] = True
        return
    if round_no == 1:
        new = pipeline.spawn_stage()
        new.inbox.items.append(item)
    else:
        pipeline.sink_edges[round_no] += 1


# ---------------------------------------------------------------------------
# threaded driver: k workers pull ready stages from a shared queue


def _drive_threaded(pipeline: Pipeline, source: EdgeSource) -> None:
    pipeline._ready = queue.SimpleQueue()
    pipeline._round_event = threading.Event()
    workers = [threading.Thread(target=_worker, args=(pipeline,), daemon=True)
               for _ in range(pipeline.config.workers)]
    for w in workers:
        w.start()
    try:
        for round_no in (1, 2):
            pipeline.current_round = round_no
            pipeline._round_event.clear()
            eof_fed = False
            for item in source.replay():
                if pipeline._worker_error is not None:
                    raise pipeline._worker_error
                if eof_fed:
                    raise ProtocolViolation("source yielded items after eof")
                if item is EOF:
                    eof_fed = True
                else:
                    pipeline._note_edge_fed(item, round_no)
                _threaded_deliver(pipeline, item, round_no)
            if not eof_fed:
                raise ProtocolViolation("stream ended without eof")
            _wait_round(pipeline, round_no)
            with pipeline._chain_lock:
                pipeline.stages = [a for a in pipeline.stages if a.alive]
    finally:
        for _ in workers:
            pipeline._ready.put(_STOP)
        for w in workers:
            w.join(timeout=30)
    if pipeline._worker_error is not None:
        raise pipeline._worker_error


def _threaded_deliver(pipeline: Pipeline, item, round_no: int) -> None:
    with pipeline._chain_lock:
        stages = pipeline.stages
        if not stages:
            if item is EOF:
                pipeline.sink_eof[round_no] = True
                pipeline._round_event.set()
            else:
                actor = pipeline.spawn_stage()
                actor.inbox.items.append(item)
                pipeline._schedule(actor)
            return
        head = stages[0]
    # Feeding blocks on a full head channel; workers never block, so the
    # head always drains eventually.
    deadline = time.monotonic() + _STALL_TIMEOUT
    while not head.inbox.has_space():
        if pipeline._worker_error is not None:
            raise pipeline._worker_error
        if time.monotonic() > deadline:
            raise Deadlock("head channel stayed full; workers stalled")
        time.sleep(0.00005)
    head.inbox.items.append(item)
    pipeline._schedule(head)


def _wait_round(pipeline: Pipeline, round_no: int) -> None:
    last_steps = -1
    while not pipeline._round_event.wait(timeout=_STALL_TIMEOUT):
        if pipeline._worker_error is not None:
            return
        if pipeline.steps == last_steps:
            raise Deadlock(f"round {round_no} made no progress")
        last_steps = pipeline.steps


def _worker(pipeline: Pipeline) -> None:
    try:
        while True:
            actor = pipeline._ready.get()
            if actor is _STOP:
                return
            with actor.lock:
                actor.queued = False
                if not actor.alive:
                    continue
                actor.running = True
            try:
                _run_actor_batch(pipeline, actor)
            finally:
                with actor.lock:
                    actor.running = False
            if actor.alive and _actor_fireable(actor):
                pipeline._schedule(actor)
    except BaseException as exc:  # surfaced to the feeding thread
        pipeline._worker_error = exc
        pipeline._round_event.set()


def _actor_fireable(actor: StageActor) -> bool:
    if not actor.inbox.items:
        return False
    down = actor.downstream
    return down is None or down.inbox.has_space()


def _run_actor_batch(pipeline: Pipeline, actor: StageActor) -> None:
    rule = pipeline.config.multiset_rule
    cap = pipeline.config.channel_capacity
    inbox = actor.inbox.items
    steps = 0
    while steps < 256 and actor.alive:
        if not inbox:
            break
        down = actor.downstream
        if down is not None and not down.inbox.has_space():
            break
        was_full = cap is not None and len(inbox) >= cap
        item = inbox.popleft()
        if was_full and actor.upstream is not None:
            pipeline._schedule(actor.upstream)
        new_state, out = stage_step(actor.state, item, rule)
        actor.state = new_state
        steps += 1
        if new_state.role is Role.DEAD:
            pipeline._record_death(actor)
        if out.emit is not None:
            if down is None:
                _tail_emit(pipeline, actor, out.emit)
                if out.emit is EOF:
                    # Round finished for this stage; end the batch so it
                    # cannot straddle into the next round's items.
                    break
            else:
                down.inbox.items.append(out.emit)
                pipeline._schedule(down)
    if steps:
        with pipeline._chain_lock:
            pipeline.steps += steps


def _tail_emit(pipeline: Pipeline, actor: StageActor, item) -> None:
    # A batch can straddle the round boundary on the tail stage (the
    # feeder starts pass two the instant the pass-one eof hits the sink),
    # so the round is read per emission: the GIL orders the feeder's
    # current_round store before any pass-two item becomes visible.
    round_no = pipeline.current_round
    if item is EOF:
        with pipeline._chain_lock:
            pipeline.sink_eof[round_no] = True
        pipeline._round_event.set()
        return
    if round_no == 1:
        new = pipeline.spawn_stage()  # wires actor.downstream = new
        new.inbox.items.append(item)
        pipeline._schedule(new)
    else:
        with pipeline._chain_lock:
            pipeline.sink_edges[round_no] += 1


# ---------------------------------------------------------------------------
# entry points


def _execute(source: EdgeSource, config: RunConfig, collect_reports: bool = False,
             keep_edges: bool = False, with_profile: bool | None = None
             ) -> tuple[PipelineResult, Pipeline, ParallelismProfile | None]:
    if with_profile is None:
        with_profile = config.profile_path is not None
    if with_profile and config.scheduler != "cooperative":
        raise ConfigError("profiling requires the cooperative scheduler")
    pipeline = Pipeline(config, source.known_node_count,
                        collect_reports=collect_reports, keep_edges=keep_edges)
    profile = ParallelismProfile() if with_profile else None
    if with_profile:
        _drive_lockstep(pipeline, source, profile)
    elif config.scheduler == "threads":
        _drive_threaded(pipeline, source)
    else:
        _drive_cooperative(pipeline, source)
    result = _finalize(pipeline)
    if profile is not None and config.profile_path is not None:
        export_profile(profile, config.profile_path)
    return result, pipeline, profile


def _finalize(pipeline: Pipeline) -> PipelineResult:
    # Structural guarantees of the algorithm; a failure here is an engine
    # bug, not a property of the input.
    assert pipeline.sink_eof[1] and pipeline.sink_eof[2], "eof never reached the sink"
    assert pipeline.sink_edges[1] == 0, "an edge escaped past the tail in pass one"
    assert pipeline.sink_edges[2] == pipeline.edges_fed[2], \
        "pass two lost or duplicated edges"
    assert pipeline.edges_fed[1] == pipeline.edges_fed[2], \
        "the two replays disagreed on length"
    assert not pipeline.stages, "live stages left after pass two"
    bound = pipeline.stage_bound()
    if bound is None:
        bound = max(0, len(pipeline.nodes_seen) - 1)
    if pipeline.spawn_count > bound:
        raise BoundExceeded(
            f"{pipeline.spawn_count} stages spawned for "
            f"{len(pipeline.nodes_seen)} observed nodes")
    return aggregate(pipeline.results)


def run_two_rounds(source: EdgeSource, config: RunConfig | None = None) -> PipelineResult:
    """Feed the source through the pipeline twice and return the counts."""
    result, _, _ = _execute(source, config or RunConfig())
    return result


def run_cooperative(source: EdgeSource, config: RunConfig | None = None) -> PipelineResult:
    """Single-threaded run; identical results to any multi-threaded run."""
    config = config or RunConfig()
    if config.scheduler != "cooperative":
        config = replace(config, scheduler="cooperative")
    result, _, _ = _execute(source, config)
    return result


def run_instrumented(source: EdgeSource, config: RunConfig | None = None,
                     keep_edges: bool = False,
                     with_profile: bool | None = None) -> RunDiagnostics:
    """Run and keep per-stage reports, tallies, and (optionally) the profile."""
    config = config or RunConfig()
    result, pipeline, profile = _execute(
        source, config, collect_reports=True, keep_edges=keep_edges,
        with_profile=with_profile)
    dedup = len(pipeline._edge_keys)
    return RunDiagnostics(
        result=result,
        stage_reports=list(pipeline.stage_reports),
        sink_edges_round1=pipeline.sink_edges[1],
        sink_edges_round2=pipeline.sink_edges[2],
        edges_fed_round1=pipeline.edges_fed[1],
        edges_fed_round2=pipeline.edges_fed[2],
        nodes=frozenset(pipeline.nodes_seen),
        dedup_edge_count=dedup,
        duplicate_count=pipeline.edges_fed[1] - dedup,
        steps=pipeline.steps,
        spawn_count=pipeline.spawn_count,
        profile=profile,
        edge_occurrences=tuple(pipeline.edge_occurrences) if keep_edges else None,
    )
