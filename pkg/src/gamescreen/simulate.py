"""Synthetic cohorts for calibration, training, and end-to-end studies.

Children are simulated from behavioral profiles: response intervals are
lognormal around a profile median with an optional multiplicative drift per
response, and correctness is an independent coin weighted by the profile's
error rate.  The confused profile clicks fast and speeds up; the normal and
dysgraphic profiles differ in pace and error rate.  All draws come from
per-record seeded generators, so a cohort is a pure function of its seed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Final, Mapping

from .model import (
    ALL_STAGES,
    LABEL_DYSGRAPHIC,
    LABEL_NORMAL,
    GameStage,
    LabeledSession,
    ResponseEvent,
    SessionRecord,
    from_ms,
    to_ms,
)

PROFILE_NORMAL: Final = "normal"
PROFILE_DYSGRAPHIC: Final = "dysgraphic"
PROFILE_CONFUSED: Final = "confused"
PROFILE_ORDER: Final = (PROFILE_NORMAL, PROFILE_DYSGRAPHIC, PROFILE_CONFUSED)

_PROFILE_LABELS: Final = {
    PROFILE_NORMAL: LABEL_NORMAL,
    PROFILE_DYSGRAPHIC: LABEL_DYSGRAPHIC,
    PROFILE_CONFUSED: None,
}


@dataclass(frozen=True)
class StageProfile:
    """Interval and accuracy behavior of one simulated child type.

    interval_median is in seconds; interval_spread is the lognormal sigma in
    log space; interval_trend multiplies each successive interval, so values
    below 1 simulate a child speeding up as attention drifts.
    """

    interval_median: float
    interval_spread: float
    error_rate: float
    interval_trend: float = 1.0

    def __post_init__(self) -> None:
        if self.interval_median <= 0 or self.interval_trend <= 0:
            raise ValueError("interval median and trend must be positive")
        if self.interval_spread < 0 or not 0 <= self.error_rate <= 1:
            raise ValueError("spread must be non-negative and error rate a probability")


@dataclass(frozen=True)
class ProfileConfig:
    normal: StageProfile = StageProfile(1.2, 0.25, 0.08)
    dysgraphic: StageProfile = StageProfile(1.6, 0.35, 0.30)
    confused: StageProfile = StageProfile(0.5, 0.25, 0.25, interval_trend=0.93)
    events_per_stage: int = 20

    def profile(self, name: str) -> StageProfile:
        try:
            return {
                PROFILE_NORMAL: self.normal,
                PROFILE_DYSGRAPHIC: self.dysgraphic,
                PROFILE_CONFUSED: self.confused,
            }[name]
        except KeyError:
            raise ValueError(f"unknown profile: {name!r}") from None


def simulate_stage(profile: StageProfile, n_events: int, seed: int | str) -> list[ResponseEvent]:
    """Draw one stage's response events; times are quantized to milliseconds."""
    if n_events < 3:
        raise ValueError(f"need at least 3 events per stage, got {n_events}")
    rng = random.Random(seed)
    log_median = math.log(profile.interval_median)
    events: list[ResponseEvent] = []
    t = 0.0
    prev_ms = 0
    for i in range(n_events):
        interval = rng.lognormvariate(log_median, profile.interval_spread)
        t += interval * profile.interval_trend**i
        ms = max(to_ms(t), prev_ms + 1)
        correct = rng.random() >= profile.error_rate
        events.append(ResponseEvent(from_ms(ms), correct))
        prev_ms = ms
    return events


def simulate_record(
    profile: StageProfile,
    n_events: int,
    seed: int | str,
    *,
    session_id: str,
    game_stage: GameStage,
) -> SessionRecord:
    return SessionRecord(session_id, game_stage, tuple(simulate_stage(profile, n_events, seed)))


def stage_seed(cohort_seed: int | str, profile_name: str, child_index: int, stage: GameStage) -> str:
    """Stable per-record seed; strings keep derivation process-independent."""
    return f"{cohort_seed}:{profile_name}:{child_index}:{stage.value}"


def simulate_cohort(
    counts: Mapping[str, int],
    seed: int | str,
    config: ProfileConfig = ProfileConfig(),
    *,
    id_prefix: str = "",
) -> list[LabeledSession]:
    """Simulate a cohort of full sessions (one record per game stage).

    counts maps profile names to child counts.  Confused-profile sessions get
    no dysgraphia label; they exist to exercise the condition detector.
    """
    unknown = set(counts) - set(PROFILE_ORDER)
    if unknown:
        raise ValueError(f"unknown profiles in counts: {sorted(unknown)}")
    sessions: list[LabeledSession] = []
    for profile_name in PROFILE_ORDER:
        profile = config.profile(profile_name)
        for child in range(counts.get(profile_name, 0)):
            session_id = f"{id_prefix}{profile_name}-{child + 1:03d}"
            records = {
                stage: simulate_record(
                    profile,
                    config.events_per_stage,
                    stage_seed(seed, profile_name, child, stage),
                    session_id=session_id,
                    game_stage=stage,
                )
                for stage in ALL_STAGES
            }
            sessions.append(LabeledSession(session_id, records, _PROFILE_LABELS[profile_name]))
    return sessions
