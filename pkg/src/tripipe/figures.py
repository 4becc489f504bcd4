"""Figure rendering for the report paths.

Report commands write delimited output; these helpers render a matching
figure next to it.  Rendering is file-only (Agg backend), never a window.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .baseline_mr import VolumeReport  # noqa: E402
from .metrics import ParallelismProfile  # noqa: E402


def figure_path_for(csv_path: str | Path) -> Path:
    return Path(csv_path).with_suffix(".png")


def render_profile_figure(profile: ParallelismProfile, path: str | Path) -> Path:
    """Plot fireable stages per step, shading the two passes."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(8, 3.2))
    steps = [e.step for e in profile.entries]
    fireable = [e.fireable for e in profile.entries]
    live = [e.live for e in profile.entries]
    ax.step(steps, fireable, where="post", label="fireable stages", color="#1A508B")
    ax.step(steps, live, where="post", label="live stages",
            color="#B61919", linestyle="--", linewidth=0.9)
    round2 = [e.step for e in profile.entries if e.round_no == 2]
    if round2:
        ax.axvspan(round2[0], round2[-1], color="#f4b183", alpha=0.25,
                   label="second pass")
    ax.set_xlabel("step")
    ax.set_ylabel("stages")
    ax.set_title("available parallelism per step")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_volume_figure(reports: Sequence[VolumeReport], path: str | Path) -> Path:
    """Bar chart of baseline wedge volume vs pipeline adjacency storage."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6, 3.2))
    xs = range(len(reports))
    width = 0.38
    ax.bar([x - width / 2 for x in xs], [r.mr_two_paths for r in reports],
           width=width, label="mapreduce 2-paths", color="#F39233")
    ax.bar([x + width / 2 for x in xs], [r.pipeline_storage for r in reports],
           width=width, label="pipeline storage", color="#5AA469")
    ax.set_xticks(list(xs))
    ax.set_xticklabels([r.graph_id for r in reports], rotation=20, fontsize=8)
    ax.set_ylabel("items materialized")
    if any(r.mr_two_paths > 20 * max(1, r.pipeline_storage) for r in reports):
        ax.set_yscale("log")
    ax.set_title("intermediate data volume")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
