import math
from statistics import fmean, stdev

import pytest

from gamescreen.detector import mean_click_interval
from gamescreen.model import GameStage, click_time_seq, validate_record
from gamescreen.simulate import (
    ProfileConfig,
    StageProfile,
    simulate_cohort,
    simulate_record,
    simulate_stage,
)


def test_zero_spread_constant_pace():
    events = simulate_stage(StageProfile(1.0, 0.0, 0.0), 3, seed=1)
    assert [(e.t, e.correct) for e in events] == [(1.0, True), (2.0, True), (3.0, True)]


def test_trend_below_one_gives_decreasing_intervals():
    profile = StageProfile(1.0, 0.0, 0.0, interval_trend=0.9)
    record = simulate_record(profile, 8, seed=1, session_id="s", game_stage=GameStage.GAME1)
    seq = click_time_seq(record)
    assert all(b < a for a, b in zip(seq, seq[1:]))


def test_simulated_records_are_valid_and_ms_quantized():
    profile = StageProfile(0.5, 0.4, 0.3, interval_trend=0.95)
    for seed in range(20):
        record = simulate_record(profile, 25, seed=seed, session_id="s", game_stage=GameStage.GAME1)
        assert validate_record(record) == []
        assert all(math.isclose(e.t, round(e.t, 3), abs_tol=1e-9) for e in record.events)


def test_same_seed_same_record():
    profile = StageProfile(1.2, 0.25, 0.08)
    a = simulate_stage(profile, 20, seed="x")
    b = simulate_stage(profile, 20, seed="x")
    c = simulate_stage(profile, 20, seed="y")
    assert a == b
    assert a != c


def test_stage_needs_three_events():
    with pytest.raises(ValueError):
        simulate_stage(StageProfile(1.0, 0.1, 0.1), 2, seed=1)


def test_profile_validation():
    with pytest.raises(ValueError):
        StageProfile(0.0, 0.1, 0.1)
    with pytest.raises(ValueError):
        StageProfile(1.0, 0.1, 1.5)
    with pytest.raises(ValueError):
        StageProfile(1.0, 0.1, 0.1, interval_trend=0.0)


def test_cohort_shape_and_labels():
    sessions = simulate_cohort({"normal": 53, "dysgraphic": 21}, seed=3, id_prefix="t-")
    assert len(sessions) == 74
    assert sum(1 for s in sessions if s.actual_label == "normal") == 53
    assert sum(1 for s in sessions if s.actual_label == "dysgraphic") == 21
    ids = [s.session_id for s in sessions]
    assert len(set(ids)) == 74
    assert all(sid.startswith("t-") for sid in ids)
    for session in sessions:
        assert set(session.records) == set(GameStage)
        for record in session.records.values():
            assert validate_record(record) == []
            assert len(record.events) == 20


def test_cohort_confused_children_have_no_label():
    sessions = simulate_cohort({"confused": 4}, seed=3)
    assert [s.actual_label for s in sessions] == [None] * 4


def test_cohort_rejects_unknown_profiles():
    with pytest.raises(ValueError):
        simulate_cohort({"fast": 3}, seed=1)


def test_events_per_stage_config():
    config = ProfileConfig(events_per_stage=7)
    sessions = simulate_cohort({"normal": 2}, seed=1, config=config)
    assert all(len(r.events) == 7 for s in sessions for r in s.records.values())


def test_confused_and_normal_cohorts_separate_widely():
    # Pooled-stddev separation of per-child mean intervals, over 1000 children.
    config = ProfileConfig()
    normal_means = []
    confused_means = []
    for i in range(500):
        normal_means.append(
            mean_click_interval(
                simulate_record(
                    config.normal, 20, f"sep:n:{i}", session_id="n", game_stage=GameStage.GAME1
                )
            )
        )
        confused_means.append(
            mean_click_interval(
                simulate_record(
                    config.confused, 20, f"sep:c:{i}", session_id="c", game_stage=GameStage.GAME1
                )
            )
        )
    pooled = math.sqrt((stdev(normal_means) ** 2 + stdev(confused_means) ** 2) / 2)
    separation = (fmean(normal_means) - fmean(confused_means)) / pooled
    assert separation >= 3.0
