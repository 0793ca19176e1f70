"""Game-based dysgraphia risk screening pipeline."""

from .model import (
    GameStage,
    LabeledSession,
    ResponseEvent,
    SessionRecord,
    click_time_seq,
    normalize_multitarget,
    validate_record,
)

__version__ = "0.1.0"

__all__ = [
    "GameStage",
    "LabeledSession",
    "ResponseEvent",
    "SessionRecord",
    "click_time_seq",
    "normalize_multitarget",
    "validate_record",
    "__version__",
]
