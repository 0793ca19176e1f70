import pytest

from gamescreen.errors import InsufficientDataError
from gamescreen.evaluate import (
    ConfusionMatrix,
    StudyConfig,
    confusion_matrix,
    half_error_balance,
    overall_accuracy,
    report_to_json,
    run_study,
)
from gamescreen.model import GameStage, ResponseEvent, SessionRecord


def record_with_flags(flags):
    events = tuple(ResponseEvent(float(i + 1), ok) for i, ok in enumerate(flags))
    return SessionRecord("s", GameStage.GAME1, events)


def test_confusion_matrix_counts():
    predictions = ["dysgraphic", "dysgraphic", "normal", "normal", "dysgraphic"]
    actuals = ["dysgraphic", "normal", "normal", "dysgraphic", "dysgraphic"]
    matrix = confusion_matrix(predictions, actuals)
    assert matrix == ConfusionMatrix(tp=2, tn=1, fp=1, fn=1)


def test_confusion_matrix_rejects_bad_input():
    with pytest.raises(ValueError):
        confusion_matrix(["normal"], ["normal", "normal"])
    with pytest.raises(ValueError):
        confusion_matrix(["typical"], ["normal"])


def test_overall_accuracy_with_confirmed_flags():
    matrix = ConfusionMatrix(18, 48, 3, 2, flagged_unsuitable=3, flagged_confirmed=3)
    assert overall_accuracy(matrix, 74) == 93.24


def test_overall_accuracy_all_wrong():
    assert overall_accuracy(ConfusionMatrix(0, 0, 5, 5), 10) == 0.0


def test_overall_accuracy_accounting_guards():
    with pytest.raises(ValueError):
        overall_accuracy(ConfusionMatrix(1, 1, 0, 0), 10)
    with pytest.raises(ValueError):
        overall_accuracy(
            ConfusionMatrix(1, 1, 0, 0, flagged_unsuitable=1, flagged_confirmed=2), 3
        )


def test_half_error_balance_identical_halves():
    half = [True, True, False, False, True]
    balance = half_error_balance(record_with_flags(half + half))
    assert balance.first_half_error_rate == balance.second_half_error_rate
    assert balance.z == 0.0
    assert not balance.significant


def test_half_error_balance_collapse():
    balance = half_error_balance(record_with_flags([True] * 10 + [False] * 10))
    assert balance.first_half_error_rate == 0.0
    assert balance.second_half_error_rate == 1.0
    assert balance.z == pytest.approx(-4.4721, abs=1e-4)
    assert balance.significant


def test_half_error_balance_odd_split():
    balance = half_error_balance(
        record_with_flags([True, False, False, True, True, True, False])
    )
    assert balance.first_half_error_rate == 0.5
    assert balance.second_half_error_rate == pytest.approx(1 / 3)


def test_half_error_balance_degenerate_pooled_rate():
    balance = half_error_balance(record_with_flags([False] * 6))
    assert balance.z == 0.0
    assert not balance.significant


def test_half_error_balance_needs_four_events():
    with pytest.raises(InsufficientDataError):
        half_error_balance(record_with_flags([True, True, True]))


@pytest.fixture(scope="module")
def report():
    return run_study(StudyConfig())


def test_study_meets_accuracy_floor(report):
    assert report["overall_accuracy_percent"] >= 90.0


def test_study_report_is_deterministic(report):
    again = run_study(StudyConfig())
    assert report_to_json(again) == report_to_json(report)


def test_study_accounts_for_every_test_session(report):
    total = report["cohorts"]["test"]["total"]
    assert total == 74
    assert report["classification"]["classified"] + report["flags"]["total"] == total
    assert len(report["per_session"]) == total


def test_study_audit_gates_before_classifying(report):
    steps = {}
    for entry in report["audit_log"]:
        steps.setdefault(entry["session_id"], []).append(entry["step"])
    for outcome in report["per_session"]:
        expected = ["detector"] if outcome["flagged"] else ["detector", "classifier"]
        assert steps[outcome["session_id"]] == expected


def test_study_matrix_matches_per_session_outcomes(report):
    pairs = [
        (o["predicted"], o["actual"]) for o in report["per_session"] if not o["flagged"]
    ]
    rebuilt = confusion_matrix([p for p, _ in pairs], [a for _, a in pairs])
    stored = report["confusion_matrix"]
    assert (rebuilt.tp, rebuilt.tn, rebuilt.fp, rebuilt.fn) == (
        stored["tp"],
        stored["tn"],
        stored["fp"],
        stored["fn"],
    )
    confirmed = sum(1 for o in report["per_session"] if o.get("flag_confirmed"))
    assert stored["flagged_unsuitable"] == report["flags"]["total"]
    assert stored["flagged_confirmed"] == confirmed


def test_study_flags_include_the_planted_confused_children(report):
    assert report["flags"]["confirmed"] == 3
