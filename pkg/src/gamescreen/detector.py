"""Pre-screening check that a child's test conditions were acceptable.

A child who raced through the first game (clicking fast, or speeding up as
attention drifted) produces response data that says nothing about dysgraphia
risk.  The detector compares the child's mean click interval against bands
calibrated from known-confused and known-normal cohorts and flags sessions
that should be retaken instead of classified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from statistics import fmean, stdev
from typing import Any, Final, Sequence

from .errors import InsufficientDataError, ModelFormatError
from .model import SessionRecord, click_time_seq

CALIBRATION_SCHEMA_VERSION: Final = 1


class VerdictReason(str, Enum):
    IN_CONFUSED_BAND = "in_confused_band"
    BELOW_CONFUSED_MEAN = "below_confused_mean"
    IN_NORMAL_BAND = "in_normal_band"
    ABOVE_NORMAL_MEAN = "above_normal_mean"
    DECREASING_FALLBACK = "decreasing_fallback"
    NONDECREASING_FALLBACK = "nondecreasing_fallback"


#: Reasons that make a session unsuitable for classification.
UNSUITABLE_REASONS: Final = frozenset(
    {
        VerdictReason.IN_CONFUSED_BAND,
        VerdictReason.BELOW_CONFUSED_MEAN,
        VerdictReason.DECREASING_FALLBACK,
    }
)


@dataclass(frozen=True)
class ConditionVerdict:
    suitable: bool
    reason: VerdictReason


@dataclass(frozen=True)
class CohortStats:
    """Mean and spread of per-child mean click intervals, per calibration cohort."""

    normal_mean: float
    normal_std: float
    confused_mean: float
    confused_std: float
    n_confused: int = 0
    n_normal: int = 0

    def __post_init__(self) -> None:
        if self.normal_mean <= 0 or self.confused_mean <= 0:
            raise ValueError("cohort means must be strictly positive")
        if self.normal_std < 0 or self.confused_std < 0:
            raise ValueError("cohort stddevs must be non-negative")


def mean_click_interval(record: SessionRecord) -> float:
    """Mean interval between consecutive responses, in seconds."""
    if len(record.events) < 3:
        raise InsufficientDataError(
            f"need at least 3 events for a mean interval, got {len(record.events)}"
        )
    return fmean(click_time_seq(record))


def calibrate(
    confused_records: Sequence[SessionRecord],
    normal_records: Sequence[SessionRecord],
) -> CohortStats:
    """Fit interval bands from records of known-confused and known-normal children.

    Each child contributes one number (their mean click interval); the band is
    that sample's mean and sample standard deviation (zero for a single child).
    """
    if not confused_records or not normal_records:
        raise ValueError("both calibration groups must be non-empty")
    confused_means = [mean_click_interval(r) for r in confused_records]
    normal_means = [mean_click_interval(r) for r in normal_records]
    return CohortStats(
        normal_mean=fmean(normal_means),
        normal_std=stdev(normal_means) if len(normal_means) > 1 else 0.0,
        confused_mean=fmean(confused_means),
        confused_std=stdev(confused_means) if len(confused_means) > 1 else 0.0,
        n_confused=len(confused_records),
        n_normal=len(normal_records),
    )


def is_decreasing(seq: Sequence[float]) -> bool:
    """True when the least-squares slope of seq against its index is strictly negative."""
    n = len(seq)
    if n < 2:
        return False
    mean_i = (n - 1) / 2
    mean_y = fmean(seq)
    numerator = sum((i - mean_i) * (y - mean_y) for i, y in enumerate(seq))
    return numerator < 0


def detect_condition(record: SessionRecord, stats: CohortStats) -> ConditionVerdict:
    """Judge whether a first-game record reflects acceptable test conditions.

    Rules fire in order: the confused band wins over the normal band, and the
    interval trend only decides sessions that fall between the two bands.
    """
    mu = mean_click_interval(record)
    if abs(mu - stats.confused_mean) < stats.confused_std:
        return ConditionVerdict(False, VerdictReason.IN_CONFUSED_BAND)
    if mu < stats.confused_mean:
        return ConditionVerdict(False, VerdictReason.BELOW_CONFUSED_MEAN)
    if abs(mu - stats.normal_mean) < stats.normal_std:
        return ConditionVerdict(True, VerdictReason.IN_NORMAL_BAND)
    if mu > stats.normal_mean:
        return ConditionVerdict(True, VerdictReason.ABOVE_NORMAL_MEAN)
    if is_decreasing(click_time_seq(record)):
        return ConditionVerdict(False, VerdictReason.DECREASING_FALLBACK)
    return ConditionVerdict(True, VerdictReason.NONDECREASING_FALLBACK)


def stats_to_json(stats: CohortStats) -> dict[str, Any]:
    return {
        "schema_version": CALIBRATION_SCHEMA_VERSION,
        "mu_nor": stats.normal_mean,
        "sigma_nor": stats.normal_std,
        "mu_con": stats.confused_mean,
        "sigma_con": stats.confused_std,
        "calibrated_from": {"n_confused": stats.n_confused, "n_normal": stats.n_normal},
    }


def stats_from_json(obj: Any) -> CohortStats:
    if not isinstance(obj, dict):
        raise ModelFormatError("calibration document must be an object")
    if obj.get("schema_version") != CALIBRATION_SCHEMA_VERSION:
        raise ModelFormatError(f"unsupported calibration schema_version: {obj.get('schema_version')!r}")
    try:
        counts = obj.get("calibrated_from", {})
        stats = CohortStats(
            normal_mean=float(obj["mu_nor"]),
            normal_std=float(obj["sigma_nor"]),
            confused_mean=float(obj["mu_con"]),
            confused_std=float(obj["sigma_con"]),
            n_confused=int(counts.get("n_confused", 0)),
            n_normal=int(counts.get("n_normal", 0)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed calibration document: {exc}") from exc
    if not all(
        math.isfinite(x)
        for x in (stats.normal_mean, stats.normal_std, stats.confused_mean, stats.confused_std)
    ):
        raise ModelFormatError("calibration values must be finite")
    return stats
