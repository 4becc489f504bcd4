import pytest

from tripipe.engine import ConfigError, RunConfig, run_instrumented, run_two_rounds
from tripipe.graph_io import GeneratorSource, GeneratorSpec
from tripipe.metrics import (
    CSV_HEADER,
    ParallelismProfile,
    StageSnapshot,
    count_fireable,
    export_profile,
)


def gen_source(model, n, p=None, seed=0):
    return GeneratorSource(GeneratorSpec(model, n, p, seed))


def profiled(source):
    return run_instrumented(source, with_profile=True)


def test_single_pending_stage_is_fireable():
    assert count_fireable([StageSnapshot(pending=1, output_free=True)]) == 1


def test_empty_pipeline_has_nothing_fireable():
    assert count_fireable([]) == 0


def test_blocked_output_suppresses_fireability():
    snap = [StageSnapshot(3, False), StageSnapshot(0, True), StageSnapshot(2, True)]
    assert count_fireable(snap) == 1


def test_mid_run_snapshot_of_five_busy_stages():
    # All five stages of a six-node complete graph holding pending edges.
    snap = [StageSnapshot(pending=2, output_free=True) for _ in range(5)]
    assert count_fireable(snap) == 5


def test_record_step_assigns_increasing_indices():
    profile = ParallelismProfile()
    profile.record_step([StageSnapshot(1, True)], 1)
    profile.record_step([StageSnapshot(0, True)], 2)
    steps = [e.step for e in profile.entries]
    assert steps == sorted(steps) == [0, 1]


def test_profile_entries_respect_live_bound():
    diag = profiled(gen_source("gnp", 20, 0.3, 4))
    for entry in diag.profile.entries:
        assert entry.fireable <= entry.live


def test_complete_eight_peaks_at_most_seven():
    diag = profiled(gen_source("complete", 8))
    assert diag.profile.max_fireable() <= 7
    assert diag.result.total == 56


def test_fired_steps_cover_all_item_consumptions():
    diag = profiled(gen_source("gnp", 15, 0.4, 6))
    assert diag.profile.total_fireable() >= diag.steps


def test_profile_recording_does_not_change_the_result():
    src = gen_source("gnp", 30, 0.25, 9)
    assert profiled(src).result == run_two_rounds(src)


def test_second_pass_ramp_is_unimodal_on_a_path():
    diag = profiled(gen_source("path", 5))
    ramp = [e.fireable for e in diag.profile.round_entries(2)]
    peak = ramp.index(max(ramp))
    assert all(a <= b for a, b in zip(ramp[:peak], ramp[1:peak + 1]))
    assert all(a >= b for a, b in zip(ramp[peak:], ramp[peak + 1:]))
    assert max(ramp) == 4  # one per live stage


def test_round_tags_split_the_two_passes():
    diag = profiled(gen_source("complete", 5))
    rounds = [e.round_no for e in diag.profile.entries]
    assert set(rounds) == {1, 2}
    assert rounds == sorted(rounds)


def test_export_empty_profile_is_header_only(tmp_path):
    path = tmp_path / "p.csv"
    export_profile(ParallelismProfile(), path)
    assert path.read_text() == CSV_HEADER + "\n"


def test_export_format_is_stable(tmp_path):
    profile = ParallelismProfile()
    profile.record_step([StageSnapshot(1, True), StageSnapshot(0, True)], 1)
    profile.record_step([StageSnapshot(1, True)], 2)
    path = tmp_path / "p.csv"
    export_profile(profile, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "step,fireable,live,round"
    assert lines[1] == "0,1,2,1"
    assert lines[2] == "1,1,1,2"
    assert not any(line.endswith(",") for line in lines)


def test_profiling_under_threads_is_rejected():
    with pytest.raises(ConfigError):
        RunConfig(scheduler="threads", workers=2, profile_path="x.csv")
    with pytest.raises(ConfigError):
        run_instrumented(gen_source("complete", 4),
                         RunConfig(scheduler="threads", workers=2), with_profile=True)


def test_profile_path_in_config_writes_csv(tmp_path):
    path = tmp_path / "run.csv"
    cfg = RunConfig(profile_path=path)
    result = run_two_rounds(gen_source("complete", 6), cfg)
    assert result.total == 20
    lines = path.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) > 1
