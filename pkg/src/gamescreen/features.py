"""Per-stage summary features for the classifier.

Each tracking stage contributes four numbers; a session's feature vector is
the three stages' tuples concatenated in fixed stage order, giving twelve
attributes with stable names.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Final, Mapping

from .errors import IncompleteSessionError
from .model import GAME2_STAGES, GameStage, SessionRecord, validate_record

STAGE_FEATURE_NAMES: Final = ("total_time", "total_score", "first_wrong_time", "last_correct_time")

#: Attribute names of the full feature vector, in extraction order.
FEATURE_NAMES: Final = tuple(
    f"{stage.value}_{name}" for stage in GAME2_STAGES for name in STAGE_FEATURE_NAMES
)


@dataclass(frozen=True)
class StageFeatures:
    total_time: float
    total_score: int
    first_wrong_time: float
    last_correct_time: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.total_time, float(self.total_score), self.first_wrong_time, self.last_correct_time)


def extract_stage(record: SessionRecord) -> StageFeatures:
    """Summarize one stage record.

    total_time is the last response time; total_score counts correct
    responses.  A child with no wrong response gets first_wrong_time equal to
    total_time, and one with no correct response gets last_correct_time 0.
    """
    violations = validate_record(record)
    if violations:
        raise ValueError(f"invalid record: {violations}")
    events = record.events
    total_time = events[-1].t
    total_score = sum(1 for event in events if event.correct)
    first_wrong_time = next((e.t for e in events if not e.correct), total_time)
    last_correct_time = next((e.t for e in reversed(events) if e.correct), 0.0)
    return StageFeatures(total_time, total_score, first_wrong_time, last_correct_time)


def extract_session(records: Mapping[GameStage, SessionRecord]) -> tuple[float, ...]:
    """Concatenate the three tracking stages' features into one vector."""
    missing = [stage.value for stage in GAME2_STAGES if stage not in records]
    if missing:
        raise IncompleteSessionError(f"missing stages: {missing}")
    values: list[float] = []
    for stage in GAME2_STAGES:
        values.extend(extract_stage(records[stage]).as_tuple())
    return tuple(values)
