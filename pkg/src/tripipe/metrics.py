"""Parallelism-profile instrumentation.

Under the lockstep single-threaded driver every superstep fires the
maximal set of ready stages once, which is the idealized
unbounded-processor, unit-time accounting.  The profile records how many
stages were fireable at each of those steps.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .graph_io import IoFailure

CSV_HEADER = "step,fireable,live,round"


@dataclass(frozen=True)
class StageSnapshot:
    """What the recorder needs to know about one live stage."""

    pending: int
    output_free: bool


@dataclass(frozen=True)
class ProfileEntry:
    step: int
    fireable: int
    live: int
    round_no: int


def count_fireable(snapshot: Iterable[StageSnapshot]) -> int:
    """Stages with at least one pending item and room to emit."""
    return sum(1 for s in snapshot if s.pending > 0 and s.output_free)


class ParallelismProfile:
    """Per-step fireable counts over a whole two-pass run."""

    def __init__(self):
        self.entries: list[ProfileEntry] = []

    def record_step(self, snapshot: Sequence[StageSnapshot], round_no: int) -> ProfileEntry:
        entry = ProfileEntry(
            step=len(self.entries),
            fireable=count_fireable(snapshot),
            live=len(snapshot),
            round_no=round_no,
        )
        self.entries.append(entry)
        return entry

    def max_fireable(self) -> int:
        return max((e.fireable for e in self.entries), default=0)

    def total_fireable(self) -> int:
        return sum(e.fireable for e in self.entries)

    def round_entries(self, round_no: int) -> list[ProfileEntry]:
        return [e for e in self.entries if e.round_no == round_no]

    def __len__(self) -> int:
        return len(self.entries)


def export_profile(profile: ParallelismProfile, path: str | Path) -> None:
    """Write the profile as CSV: header plus one row per step."""
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(CSV_HEADER + "\n")
            for e in profile.entries:
                fh.write(f"{e.step},{e.fireable},{e.live},{e.round_no}\n")
    except OSError as exc:
        raise IoFailure(f"cannot write profile to {path}: {exc}") from exc
