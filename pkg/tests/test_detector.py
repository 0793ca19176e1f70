import random

import pytest

from gamescreen.detector import (
    CohortStats,
    VerdictReason,
    calibrate,
    detect_condition,
    is_decreasing,
    mean_click_interval,
    stats_from_json,
    stats_to_json,
)
from gamescreen.errors import InsufficientDataError, ModelFormatError
from gamescreen.model import GameStage, ResponseEvent, SessionRecord


def record_with_intervals(intervals, start=0.0):
    times = [start]
    for gap in intervals:
        times.append(times[-1] + gap)
    events = tuple(ResponseEvent(t, True) for t in times)
    return SessionRecord("child-1", GameStage.GAME1, events)


STATS = CohortStats(normal_mean=1.2, normal_std=0.05, confused_mean=0.5, confused_std=0.05)


def test_mean_click_interval():
    assert mean_click_interval(record_with_intervals([1.5, 1.5])) == pytest.approx(1.5)


def test_mean_click_interval_needs_three_events():
    with pytest.raises(InsufficientDataError):
        mean_click_interval(record_with_intervals([1.5]))


def test_calibrate_worked_example():
    confused = [record_with_intervals([0.4, 0.4]), record_with_intervals([0.6, 0.6])]
    normal = [record_with_intervals([1.0, 1.0])]
    stats = calibrate(confused, normal)
    assert stats.confused_mean == pytest.approx(0.5)
    assert stats.confused_std == pytest.approx(0.1414, abs=1e-4)
    assert stats.normal_mean == pytest.approx(1.0)
    assert stats.normal_std == 0.0
    assert (stats.n_confused, stats.n_normal) == (2, 1)


def test_calibrate_rejects_empty_group():
    with pytest.raises(ValueError):
        calibrate([], [record_with_intervals([1.0, 1.0])])


def test_is_decreasing():
    assert is_decreasing([3, 2, 1]) is True
    assert is_decreasing([1, 2, 3]) is False
    assert is_decreasing([2, 2, 2]) is False


def test_detect_in_confused_band_at_exact_mean():
    verdict = detect_condition(record_with_intervals([0.5, 0.5]), STATS)
    assert (verdict.suitable, verdict.reason) == (False, VerdictReason.IN_CONFUSED_BAND)


def test_detect_below_confused_mean():
    verdict = detect_condition(record_with_intervals([0.3, 0.3]), STATS)
    assert (verdict.suitable, verdict.reason) == (False, VerdictReason.BELOW_CONFUSED_MEAN)


def test_detect_in_normal_band_at_exact_mean():
    verdict = detect_condition(record_with_intervals([1.2, 1.2]), STATS)
    assert (verdict.suitable, verdict.reason) == (True, VerdictReason.IN_NORMAL_BAND)


def test_detect_above_normal_mean():
    verdict = detect_condition(record_with_intervals([2.0, 2.0]), STATS)
    assert (verdict.suitable, verdict.reason) == (True, VerdictReason.ABOVE_NORMAL_MEAN)


def test_detect_fallback_on_trend():
    decreasing = detect_condition(record_with_intervals([0.9, 0.8, 0.7]), STATS)
    assert (decreasing.suitable, decreasing.reason) == (False, VerdictReason.DECREASING_FALLBACK)
    increasing = detect_condition(record_with_intervals([0.7, 0.8, 0.9]), STATS)
    assert (increasing.suitable, increasing.reason) == (True, VerdictReason.NONDECREASING_FALLBACK)


def test_confused_band_wins_when_bands_overlap():
    overlapping = CohortStats(
        normal_mean=1.2, normal_std=0.5, confused_mean=1.0, confused_std=0.5
    )
    verdict = detect_condition(record_with_intervals([1.1, 1.1]), overlapping)
    assert (verdict.suitable, verdict.reason) == (False, VerdictReason.IN_CONFUSED_BAND)


def test_band_rule_beats_trend_fallback():
    # Decreasing intervals, but the mean sits in the normal band: suitable.
    verdict = detect_condition(record_with_intervals([1.23, 1.2, 1.17]), STATS)
    assert (verdict.suitable, verdict.reason) == (True, VerdictReason.IN_NORMAL_BAND)


def test_scale_covariance_on_random_pairs():
    rng = random.Random(20240811)
    for _ in range(300):
        intervals = [rng.uniform(0.05, 3.0) for _ in range(rng.randint(2, 20))]
        record = record_with_intervals(intervals, start=rng.uniform(0.0, 2.0))
        stats = CohortStats(
            normal_mean=rng.uniform(0.5, 3.0),
            normal_std=rng.uniform(0.0, 0.5),
            confused_mean=rng.uniform(0.1, 1.0),
            confused_std=rng.uniform(0.0, 0.5),
        )
        base = detect_condition(record, stats)
        for c in (0.1, 2.0, 10.0):
            scaled_record = SessionRecord(
                record.session_id,
                record.game_stage,
                tuple(ResponseEvent(e.t * c, e.correct) for e in record.events),
            )
            scaled_stats = CohortStats(
                normal_mean=stats.normal_mean * c,
                normal_std=stats.normal_std * c,
                confused_mean=stats.confused_mean * c,
                confused_std=stats.confused_std * c,
            )
            scaled = detect_condition(scaled_record, scaled_stats)
            assert scaled == base


def test_stats_require_positive_means():
    with pytest.raises(ValueError):
        CohortStats(normal_mean=0.0, normal_std=0.1, confused_mean=0.5, confused_std=0.1)
    with pytest.raises(ValueError):
        CohortStats(normal_mean=1.0, normal_std=-0.1, confused_mean=0.5, confused_std=0.1)


def test_stats_json_round_trip():
    stats = CohortStats(1.2, 0.07, 0.28, 0.02, n_confused=15, n_normal=17)
    doc = stats_to_json(stats)
    assert doc["calibrated_from"] == {"n_confused": 15, "n_normal": 17}
    assert stats_from_json(doc) == stats


def test_stats_json_rejects_malformed():
    good = stats_to_json(CohortStats(1.2, 0.07, 0.28, 0.02))
    with pytest.raises(ModelFormatError):
        stats_from_json({**good, "schema_version": 9})
    with pytest.raises(ModelFormatError):
        stats_from_json({k: v for k, v in good.items() if k != "mu_nor"})
    with pytest.raises(ModelFormatError):
        stats_from_json({**good, "sigma_con": float("inf")})
    with pytest.raises(ModelFormatError):
        stats_from_json({**good, "mu_con": -1.0})
    with pytest.raises(ModelFormatError):
        stats_from_json("not an object")
