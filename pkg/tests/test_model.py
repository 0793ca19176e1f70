import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gamescreen.errors import InsufficientDataError, SchemaError
from gamescreen.model import (
    GameStage,
    ResponseEvent,
    SessionRecord,
    click_time_seq,
    normalize_multitarget,
    parse_session_document,
    parse_stage_log,
    record_to_stage_log,
    session_to_document,
    validate_record,
    validate_session_document,
    validate_stage_log,
)


def record(times, stage=GameStage.GAME1, correct=None):
    if correct is None:
        correct = [True] * len(times)
    events = tuple(ResponseEvent(t, c) for t, c in zip(times, correct))
    return SessionRecord("child-1", stage, events)


def test_validate_record_accepts_valid():
    assert validate_record(record([0.5, 1.0, 2.5])) == []


def test_validate_record_reports_empty():
    assert "empty record" in validate_record(record([]))


def test_validate_record_reports_non_ascending_index():
    violations = validate_record(record([1.0, 1.0, 2.0]))
    assert violations == ["non-ascending at index 1"]
    violations = validate_record(record([1.0, 2.0, 1.5]))
    assert violations == ["non-ascending at index 2"]


def test_validate_record_reports_negative_time():
    assert validate_record(record([-0.5, 1.0])) == ["negative time at index 0"]


def test_click_time_seq_worked_example():
    r = record([1.0, 2.5, 4.0], correct=[True, False, True])
    assert click_time_seq(r) == [1.5, 1.5]


def test_click_time_seq_needs_two_events():
    with pytest.raises(InsufficientDataError):
        click_time_seq(record([1.0]))


@given(st.lists(st.floats(min_value=0.001, max_value=10.0, allow_nan=False), min_size=2, max_size=40))
def test_click_time_seq_length_and_positivity(intervals):
    times = []
    t = 0.0
    for gap in intervals:
        t += gap
        times.append(t)
    r = record(times)
    seq = click_time_seq(r)
    assert len(seq) == len(r.events) - 1
    assert all(gap > 0 for gap in seq)


# --- multi-target normalization ---------------------------------------------


def test_normalize_keeps_reaction_and_fills_missed_window():
    r = normalize_multitarget(
        [ResponseEvent(4.8, True)], [5.0, 9.0], session_id="s", game_stage=GameStage.GAME2A
    )
    assert [(e.t, e.correct) for e in r.events] == [(4.8, True), (9.0, False)]


def test_normalize_all_windows_missed():
    r = normalize_multitarget([], [5.0, 9.0], session_id="s", game_stage=GameStage.GAME2A)
    assert [(e.t, e.correct) for e in r.events] == [(5.0, False), (9.0, False)]


def test_normalize_leaves_full_coverage_unchanged():
    reactions = [ResponseEvent(4.8, True), ResponseEvent(8.1, True)]
    r = normalize_multitarget(reactions, [5.0, 9.0], session_id="s", game_stage=GameStage.GAME2A)
    assert [(e.t, e.correct) for e in r.events] == [(4.8, True), (8.1, True)]


def test_normalize_rejects_bad_inputs():
    with pytest.raises(ValueError):
        normalize_multitarget([], [5.0, 5.0], session_id="s", game_stage=GameStage.GAME2A)
    with pytest.raises(ValueError):
        normalize_multitarget([], [5.0, 4.0], session_id="s", game_stage=GameStage.GAME2A)
    with pytest.raises(ValueError):
        normalize_multitarget(
            [ResponseEvent(-1.0, True)], [5.0], session_id="s", game_stage=GameStage.GAME2A
        )
    with pytest.raises(ValueError):
        normalize_multitarget(
            [ResponseEvent(2.0, True), ResponseEvent(2.0, False)],
            [5.0],
            session_id="s",
            game_stage=GameStage.GAME2A,
        )


@given(
    st.lists(st.integers(min_value=1, max_value=200), min_size=1, max_size=8, unique=True),
    st.lists(st.integers(min_value=1, max_value=200), min_size=0, max_size=8, unique=True),
)
def test_normalize_count_and_idempotence(exit_ms, reaction_ms):
    exits = sorted(t / 10 for t in exit_ms)
    reactions = [ResponseEvent(t / 10, True) for t in sorted(reaction_ms)]
    r = normalize_multitarget(reactions, exits, session_id="s", game_stage=GameStage.GAME2B)
    assert validate_record(r) == []

    empty_windows = 0
    start = 0.0
    reaction_times = [e.t for e in reactions]
    for exit_t in exits:
        if not any(start < t <= exit_t for t in reaction_times):
            empty_windows += 1
        start = exit_t
    assert len(r.events) == len(reactions) + empty_windows

    again = normalize_multitarget(reactions, exits, session_id="s", game_stage=GameStage.GAME2B)
    assert again == r


# --- wire format -------------------------------------------------------------


def stage_log_doc(**overrides):
    doc = {
        "schema_version": 1,
        "session_id": "child-1",
        "game_stage": "game1",
        "events": [{"t": 1.0, "correct": True}, {"t": 2.0, "correct": False}],
    }
    doc.update(overrides)
    return doc


def test_parse_stage_log_round_trip():
    log = parse_stage_log(stage_log_doc())
    assert log.game_stage is GameStage.GAME1
    assert log.to_record().events == (ResponseEvent(1.0, True), ResponseEvent(2.0, False))
    assert record_to_stage_log(log.to_record()) == stage_log_doc()


def test_stage_log_rejects_unknown_fields():
    violations = validate_stage_log(stage_log_doc(child_name="Sam"))
    assert violations == ["unknown field 'child_name'"]
    violations = validate_stage_log(
        stage_log_doc(events=[{"t": 1.0, "correct": True, "note": "x"}])
    )
    assert violations == ["unknown field 'events[0].note'"]


def test_stage_log_rejects_wrong_version():
    assert validate_stage_log(stage_log_doc(schema_version=2)) == [
        "unsupported schema_version: 2"
    ]


def test_stage_log_rejects_bad_events():
    assert validate_stage_log(stage_log_doc(events=[])) == ["empty record"]
    assert "events non-ascending at index 1" in validate_stage_log(
        stage_log_doc(events=[{"t": 2.0, "correct": True}, {"t": 1.0, "correct": True}])
    )
    assert "events[0].t must be a non-negative number" in validate_stage_log(
        stage_log_doc(events=[{"t": float("nan"), "correct": True}])
    )
    assert "events[0].correct must be a boolean" in validate_stage_log(
        stage_log_doc(events=[{"t": 1.0, "correct": 1}])
    )


def test_stage_log_exit_times_only_for_tracking_stages():
    assert validate_stage_log(stage_log_doc(target_exit_times=[5.0])) == [
        "target_exit_times not allowed for game1"
    ]
    doc = stage_log_doc(game_stage="game2a", events=[], target_exit_times=[5.0, 9.0])
    assert validate_stage_log(doc) == []
    log = parse_stage_log(doc)
    assert [(e.t, e.correct) for e in log.to_record().events] == [(5.0, False), (9.0, False)]


def session_doc():
    stages = []
    for stage in ("game1", "game2a", "game2b", "game2c"):
        events = [{"t": 1.0, "correct": True}, {"t": 2.2, "correct": True}, {"t": 3.1, "correct": False}]
        stages.append(
            {"schema_version": 1, "session_id": "child-1", "game_stage": stage, "events": events}
        )
    return {"schema_version": 1, "session_id": "child-1", "stages": stages}


def test_session_document_round_trip():
    parsed = parse_session_document(session_doc())
    records = parsed.records()
    assert set(records) == set(GameStage)
    rebuilt = session_to_document("child-1", records.values())
    assert rebuilt == session_doc()


def test_session_document_requires_all_stages():
    doc = session_doc()
    doc["stages"] = doc["stages"][:3]
    violations = validate_session_document(doc)
    assert any("stages must cover" in v for v in violations)
    with pytest.raises(SchemaError):
        parse_session_document(doc)


def test_session_document_rejects_pii_anywhere():
    doc = session_doc()
    doc["stages"][2]["parent_email"] = "x@example.com"
    violations = validate_session_document(doc)
    assert any("parent_email" in v for v in violations)


def test_session_document_rejects_mismatched_ids():
    doc = session_doc()
    doc["stages"][1]["session_id"] = "other"
    violations = validate_session_document(doc)
    assert any("does not match" in v for v in violations)


def test_times_survive_json_at_millisecond_precision():
    times = [0.001, 0.5, 1.234, 2.999, 10.01]
    r = record(times)
    doc = record_to_stage_log(r)
    parsed = parse_stage_log(doc).to_record()
    assert [e.t for e in parsed.events] == times
    assert all(math.isclose(e.t, round(e.t, 3)) for e in parsed.events)
