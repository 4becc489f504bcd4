"""Role automaton for a single pipeline actor.

A stage begins waiting to pick a responsible node.  The first edge it
sees promotes it: the edge's first endpoint becomes the stage's
responsible node and the second endpoint seeds its adjacency collection.
For the rest of the first pass the stage absorbs every edge incident to
its responsible node and forwards everything else downstream.  End of
stream flips it into counting mode; during the second pass it increments
its local count whenever both endpoints of an arriving edge lie in its
adjacency collection, forwarding every edge either way.  The second end
of stream makes it report its count and die.

Everything in this module is a plain state transition on values owned by
one stage: no channels, no threads.  The same (state, item) pair always
produces the same (state, output) pair, which is what makes whole-run
results independent of scheduling.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .graph_io import EOF, Edge, NodeLabel, StreamItem

ADJACENCY_MODES = ("set", "list", "multiset")
MULTISET_RULES = ("product", "paper_min")


class ProtocolViolation(RuntimeError):
    """An item arrived at a stage that already consumed its end of stream."""


class Role(enum.IntEnum):
    """Stage roles, in the only order a stage may pass through them."""

    PICK_RESPONSIBLE = 0
    COLLECT_ADJACENT = 1
    COUNT_TRIANGLES = 2
    DEAD = 3


class AdjacencySet:
    """Collected neighbours of a stage's responsible node.

    mode "set" deduplicates (the default), "list" keeps arrival order with
    the newest member first and admits duplicates, "multiset" keeps a
    multiplicity per neighbour.  The responsible node itself is never a
    member.
    """

    __slots__ = ("responsible", "mode", "members")

    def __init__(self, responsible: NodeLabel, mode: str = "set",
                 members: Iterable[NodeLabel] = ()):
        if mode not in ADJACENCY_MODES:
            raise ValueError(f"unknown adjacency mode {mode!r}")
        self.responsible = responsible
        self.mode = mode
        if mode == "list":
            self.members = []
        elif mode == "set":
            self.members = set()
        else:
            self.members = Counter()
        for m in members:
            self.add(m)

    def add(self, node: NodeLabel) -> None:
        if node == self.responsible:
            raise ValueError("a responsible node cannot be its own neighbour")
        if self.mode == "list":
            self.members.insert(0, node)
        elif self.mode == "set":
            self.members.add(node)
        else:
            self.members[node] += 1

    def __contains__(self, node: NodeLabel) -> bool:
        return node in self.members

    def multiplicity(self, node: NodeLabel) -> int:
        if self.mode == "list":
            return self.members.count(node)
        if self.mode == "set":
            return 1 if node in self.members else 0
        return self.members[node]

    def __len__(self) -> int:
        """Stored entries: duplicates and multiplicities included."""
        if self.mode == "multiset":
            return sum(self.members.values())
        return len(self.members)

    def distinct_count(self) -> int:
        if self.mode == "list":
            return len(set(self.members))
        return len(self.members)

    def snapshot(self):
        """Immutable copy of the members, shaped per mode."""
        if self.mode == "list":
            return tuple(self.members)
        if self.mode == "set":
            return frozenset(self.members)
        return dict(self.members)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AdjacencySet):
            return NotImplemented
        return (self.responsible == other.responsible
                and self.mode == other.mode
                and self.members == other.members)

    def __repr__(self) -> str:
        return f"AdjacencySet({self.responsible!r}, {self.mode}, {self.members!r})"


@dataclass(frozen=True, slots=True)
class StageState:
    """One stage's role plus the data that role carries.

    The adjacency object is owned by the stage's state lineage: collect
    transitions mutate it in place rather than copying, so a state must
    never be shared between two live stages.
    """

    role: Role
    adjacency: AdjacencySet | None
    count: int = 0
    mode: str = "set"

    @property
    def responsible(self) -> NodeLabel | None:
        return self.adjacency.responsible if self.adjacency is not None else None


@dataclass(frozen=True, slots=True)
class StepOutput:
    """What one transition pushed out of the stage.

    ``result`` is present only on the transition out of counting.
    ``spawn_request`` is raised exactly when the stage claims its first
    edge, signalling that a fresh pick-a-responsible stage is wanted
    downstream.
    """

    emit: StreamItem | None = None
    result: int | None = None
    spawn_request: bool = False


def initial_state(mode: str = "set") -> StageState:
    if mode not in ADJACENCY_MODES:
        raise ValueError(f"unknown adjacency mode {mode!r}")
    return StageState(Role.PICK_RESPONSIBLE, None, 0, mode)


def closure_increment(adj: AdjacencySet, edge: Edge, rule: str = "product") -> int:
    """How many triangles ``edge`` closes over ``adj``.

    Both endpoints must already be members.  Plain and deduplicated
    adjacencies close exactly one triangle per arriving edge occurrence.
    With multiplicities there are two variants: "product" multiplies the
    endpoint multiplicities (each occurrence of the closing edge arrives
    separately, so its own multiplicity is handled by repetition), and
    "paper_min" takes the minimum of the two endpoint multiplicities.
    """
    if adj.mode != "multiset":
        return 1
    mu = adj.multiplicity(edge.u)
    mv = adj.multiplicity(edge.v)
    if rule == "product":
        return mu * mv
    if rule == "paper_min":
        return min(mu, mv)
    raise ValueError(f"unknown multiset rule {rule!r}")


def step_pick(state: StageState, item: StreamItem) -> tuple[StageState, StepOutput]:
    """Waiting stage: claim the first edge, or die quietly on end of stream."""
    if state.role is not Role.PICK_RESPONSIBLE:
        raise ProtocolViolation(f"step_pick on role {state.role.name}")
    if item is EOF:
        # Nothing ever arrived; forward the end marker and disappear.
        return StageState(Role.DEAD, None, 0, state.mode), StepOutput(emit=EOF)
    adj = AdjacencySet(item.u, state.mode, (item.v,))
    return (StageState(Role.COLLECT_ADJACENT, adj, 0, state.mode),
            StepOutput(spawn_request=True))


def step_collect(state: StageState, item: StreamItem) -> tuple[StageState, StepOutput]:
    """First pass: absorb edges touching the responsible node, forward the rest."""
    if state.role is not Role.COLLECT_ADJACENT:
        raise ProtocolViolation(f"step_collect on role {state.role.name}")
    if item is EOF:
        return (StageState(Role.COUNT_TRIANGLES, state.adjacency, 0, state.mode),
                StepOutput(emit=EOF))
    adj = state.adjacency
    r = adj.responsible
    if item.u == r:
        adj.add(item.v)
        return state, StepOutput()
    if item.v == r:
        adj.add(item.u)
        return state, StepOutput()
    return state, StepOutput(emit=item)


def step_count(state: StageState, item: StreamItem,
               rule: str = "product") -> tuple[StageState, StepOutput]:
    """Second pass: count edges closing a triangle, forward every edge.

    An edge with exactly one endpoint in the adjacency passes through
    uncounted; the stage holding the triangle's middle node is the one
    that counts it.
    """
    if state.role is not Role.COUNT_TRIANGLES:
        raise ProtocolViolation(f"step_count on role {state.role.name}")
    if item is EOF:
        return (StageState(Role.DEAD, state.adjacency, state.count, state.mode),
                StepOutput(emit=EOF, result=state.count))
    adj = state.adjacency
    if item.u in adj and item.v in adj:
        inc = closure_increment(adj, item, rule)
        return (StageState(Role.COUNT_TRIANGLES, adj, state.count + inc, state.mode),
                StepOutput(emit=item))
    return state, StepOutput(emit=item)


def step(state: StageState, item: StreamItem,
         rule: str = "product") -> tuple[StageState, StepOutput]:
    """Dispatch one item to whatever role the stage currently has."""
    role = state.role
    if role is Role.PICK_RESPONSIBLE:
        return step_pick(state, item)
    if role is Role.COLLECT_ADJACENT:
        return step_collect(state, item)
    if role is Role.COUNT_TRIANGLES:
        return step_count(state, item, rule)
    raise ProtocolViolation("item delivered to a dead stage")
