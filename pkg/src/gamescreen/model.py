"""Core domain types and the session-log wire format.

Sessions are sequences of timed child responses, one record per game stage.
Times are seconds relative to stage start, carried at millisecond precision.
Multi-target stages arrive as raw reaction logs plus the stage script's
target exit times; :func:`normalize_multitarget` turns those into a full
response record by inserting a miss event for every reaction-free window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Final, Iterable, Mapping, Sequence

from .errors import InsufficientDataError, SchemaError

SCHEMA_VERSION: Final = 1

#: Synthetic events that would collide with a real reaction are shifted
#: forward by one clock tick (1 ms).
COLLISION_SHIFT: Final = 0.001

LABEL_NORMAL: Final = "normal"
LABEL_DYSGRAPHIC: Final = "dysgraphic"
#: Fixed label order used for deterministic tie-breaking everywhere.
LABELS: Final = (LABEL_NORMAL, LABEL_DYSGRAPHIC)


class GameStage(str, Enum):
    GAME1 = "game1"
    GAME2A = "game2a"
    GAME2B = "game2b"
    GAME2C = "game2c"


GAME2_STAGES: Final = (GameStage.GAME2A, GameStage.GAME2B, GameStage.GAME2C)
ALL_STAGES: Final = (GameStage.GAME1,) + GAME2_STAGES


@dataclass(frozen=True)
class ResponseEvent:
    """One child response: time in seconds from stage start, and whether it was correct."""

    t: float
    correct: bool


@dataclass(frozen=True)
class SessionRecord:
    """All responses of one child for one game stage, in time order."""

    session_id: str
    game_stage: GameStage
    events: tuple[ResponseEvent, ...]


@dataclass(frozen=True)
class LabeledSession:
    """A child's records for every played stage, plus the study label if known.

    Carries no identifying information beyond the opaque session id.
    """

    session_id: str
    records: Mapping[GameStage, SessionRecord]
    actual_label: str | None = None


def to_ms(t: float) -> int:
    """Quantize a time in seconds to integer milliseconds."""
    return round(t * 1000)


def from_ms(ms: int) -> float:
    return ms / 1000.0


def validate_record(record: SessionRecord) -> list[str]:
    """Check record invariants, returning a list of violations (empty if valid)."""
    violations: list[str] = []
    if not record.session_id:
        violations.append("empty session_id")
    if not record.events:
        violations.append("empty record")
    prev = None
    for i, event in enumerate(record.events):
        if not math.isfinite(event.t):
            violations.append(f"non-finite time at index {i}")
        elif event.t < 0:
            violations.append(f"negative time at index {i}")
        elif prev is not None and event.t <= prev:
            violations.append(f"non-ascending at index {i}")
        prev = event.t
    return violations


def click_time_seq(record: SessionRecord) -> list[float]:
    """Intervals between consecutive responses, in seconds.

    The latency before the first response is not part of the sequence; a
    record of n events yields n - 1 intervals.  Records with fewer than two
    events carry no interval information.
    """
    if len(record.events) < 2:
        raise InsufficientDataError(
            f"need at least 2 events for intervals, got {len(record.events)}"
        )
    times = [event.t for event in record.events]
    return [b - a for a, b in zip(times, times[1:])]


def normalize_multitarget(
    reactions: Sequence[ResponseEvent],
    target_exit_times: Sequence[float],
    *,
    session_id: str,
    game_stage: GameStage,
) -> SessionRecord:
    """Fill reaction-free target windows with miss events.

    Each target defines a window from the previous target's exit (stage start
    for the first) up to and including its own exit.  A window containing no
    reaction means the child never responded to that target; a synthetic
    incorrect event is inserted at the exit time so every target leaves a
    trace in the record.  Real reactions pass through unchanged.
    """
    exits = list(target_exit_times)
    if not all(t > 0 and math.isfinite(t) for t in exits):
        raise ValueError("target exit times must be positive and finite")
    if any(b <= a for a, b in zip(exits, exits[1:])):
        raise ValueError("target exit times must be strictly ascending")
    times = [event.t for event in reactions]
    if any(t < 0 for t in times):
        raise ValueError("reaction times must be non-negative")
    if any(b <= a for a, b in zip(times, times[1:])):
        raise ValueError("reactions must be strictly time-ascending")

    reaction_times = set(times)
    synthetic: list[ResponseEvent] = []
    window_start = 0.0
    for exit_t in exits:
        if not any(window_start < t <= exit_t for t in times):
            t = exit_t
            while t in reaction_times:
                t += COLLISION_SHIFT
            synthetic.append(ResponseEvent(t, False))
        window_start = exit_t

    merged = sorted([*reactions, *synthetic], key=lambda event: event.t)
    record = SessionRecord(session_id, game_stage, tuple(merged))
    violations = validate_record(record)
    if violations:
        raise ValueError(f"normalization produced invalid record: {violations}")
    return record


# --- session-log wire format -------------------------------------------------
#
# Stage log:    {"schema_version": 1, "session_id": str, "game_stage": str,
#                "events": [{"t": number, "correct": bool}, ...],
#                "target_exit_times": [number, ...]}   (game2 stages only)
# Session doc:  {"schema_version": 1, "session_id": str, "stages": [stage log, ...]}
#
# Validation is strict: any field outside these sets is rejected so stray
# identifying data can never ride along.

_STAGE_LOG_FIELDS: Final = frozenset(
    {"schema_version", "session_id", "game_stage", "events", "target_exit_times"}
)
_EVENT_FIELDS: Final = frozenset({"t", "correct"})
_SESSION_DOC_FIELDS: Final = frozenset({"schema_version", "session_id", "stages"})


@dataclass(frozen=True)
class StageLog:
    """Parsed per-stage wire document: raw reactions plus optional exit script."""

    session_id: str
    game_stage: GameStage
    events: tuple[ResponseEvent, ...]
    target_exit_times: tuple[float, ...] | None = None

    def to_record(self) -> SessionRecord:
        """The full response record, normalizing against exit times if present."""
        if self.target_exit_times is not None:
            return normalize_multitarget(
                self.events,
                self.target_exit_times,
                session_id=self.session_id,
                game_stage=self.game_stage,
            )
        return SessionRecord(self.session_id, self.game_stage, self.events)


@dataclass(frozen=True)
class SessionDocument:
    """Parsed full-session wire document: one stage log per played stage."""

    session_id: str
    stages: Mapping[GameStage, StageLog] = field(default_factory=dict)

    def records(self) -> dict[GameStage, SessionRecord]:
        return {stage: log.to_record() for stage, log in self.stages.items()}


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def _validate_events(events: Any, where: str, violations: list[str]) -> None:
    if not isinstance(events, list):
        violations.append(f"{where} must be a list")
        return
    prev = None
    for i, event in enumerate(events):
        if not isinstance(event, dict):
            violations.append(f"{where}[{i}] must be an object")
            continue
        for key in sorted(set(event) - _EVENT_FIELDS):
            violations.append(f"unknown field '{where}[{i}].{key}'")
        if "t" not in event or "correct" not in event:
            violations.append(f"{where}[{i}] must have 't' and 'correct'")
            continue
        if not _is_number(event["t"]) or event["t"] < 0:
            violations.append(f"{where}[{i}].t must be a non-negative number")
            continue
        if not isinstance(event["correct"], bool):
            violations.append(f"{where}[{i}].correct must be a boolean")
        if prev is not None and event["t"] <= prev:
            violations.append(f"{where} non-ascending at index {i}")
        prev = event["t"]


def validate_stage_log(obj: Any) -> list[str]:
    """Validate a per-stage wire document, returning all violations found."""
    if not isinstance(obj, dict):
        return ["stage log must be an object"]
    violations: list[str] = []
    for key in sorted(set(obj) - _STAGE_LOG_FIELDS):
        violations.append(f"unknown field '{key}'")
    if obj.get("schema_version") != SCHEMA_VERSION:
        violations.append(f"unsupported schema_version: {obj.get('schema_version')!r}")
    session_id = obj.get("session_id")
    if not isinstance(session_id, str) or not session_id:
        violations.append("session_id must be a non-empty string")
    stage = obj.get("game_stage")
    if stage not in {s.value for s in GameStage}:
        violations.append(f"unknown game_stage: {stage!r}")
        return violations
    _validate_events(obj.get("events"), "events", violations)

    exits = obj.get("target_exit_times")
    if exits is not None:
        if stage == GameStage.GAME1.value:
            violations.append("target_exit_times not allowed for game1")
        elif not isinstance(exits, list) or not exits:
            violations.append("target_exit_times must be a non-empty list")
        else:
            prev = None
            for i, t in enumerate(exits):
                if not _is_number(t) or t <= 0:
                    violations.append(f"target_exit_times[{i}] must be a positive number")
                elif prev is not None and t <= prev:
                    violations.append(f"target_exit_times non-ascending at index {i}")
                prev = t if _is_number(t) else prev
    elif isinstance(obj.get("events"), list) and not obj["events"]:
        # Without an exit script there is nothing to fill an empty record with.
        violations.append("empty record")
    return violations


def parse_stage_log(obj: Any) -> StageLog:
    violations = validate_stage_log(obj)
    if violations:
        raise SchemaError(violations)
    events = tuple(ResponseEvent(float(e["t"]), e["correct"]) for e in obj["events"])
    exits = obj.get("target_exit_times")
    return StageLog(
        session_id=obj["session_id"],
        game_stage=GameStage(obj["game_stage"]),
        events=events,
        target_exit_times=None if exits is None else tuple(float(t) for t in exits),
    )


def validate_session_document(obj: Any) -> list[str]:
    """Validate a full-session wire document (all four stages, one child)."""
    if not isinstance(obj, dict):
        return ["session document must be an object"]
    violations: list[str] = []
    for key in sorted(set(obj) - _SESSION_DOC_FIELDS):
        violations.append(f"unknown field '{key}'")
    if obj.get("schema_version") != SCHEMA_VERSION:
        violations.append(f"unsupported schema_version: {obj.get('schema_version')!r}")
    session_id = obj.get("session_id")
    if not isinstance(session_id, str) or not session_id:
        violations.append("session_id must be a non-empty string")
    stages = obj.get("stages")
    if not isinstance(stages, list):
        violations.append("stages must be a list")
        return violations
    seen: list[str] = []
    for i, stage_obj in enumerate(stages):
        stage_violations = validate_stage_log(stage_obj)
        violations.extend(f"stages[{i}]: {v}" for v in stage_violations)
        if isinstance(stage_obj, dict):
            if stage_obj.get("session_id") not in (None, session_id):
                violations.append(f"stages[{i}]: session_id does not match document")
            if isinstance(stage_obj.get("game_stage"), str):
                seen.append(stage_obj["game_stage"])
    expected = [s.value for s in ALL_STAGES]
    if sorted(seen) != sorted(expected):
        violations.append(
            f"stages must cover {expected} exactly once, got {sorted(seen)}"
        )
    return violations


def parse_session_document(obj: Any) -> SessionDocument:
    violations = validate_session_document(obj)
    if violations:
        raise SchemaError(violations)
    stages = {GameStage(s["game_stage"]): parse_stage_log(s) for s in obj["stages"]}
    return SessionDocument(session_id=obj["session_id"], stages=stages)


def record_to_stage_log(record: SessionRecord) -> dict[str, Any]:
    """Serialize a full response record as a stage log (no exit script)."""
    return {
        "schema_version": SCHEMA_VERSION,
        "session_id": record.session_id,
        "game_stage": record.game_stage.value,
        "events": [{"t": event.t, "correct": event.correct} for event in record.events],
    }


def session_to_document(session_id: str, records: Iterable[SessionRecord]) -> dict[str, Any]:
    ordered = sorted(records, key=lambda r: [s.value for s in ALL_STAGES].index(r.game_stage.value))
    return {
        "schema_version": SCHEMA_VERSION,
        "session_id": session_id,
        "stages": [record_to_stage_log(r) for r in ordered],
    }
