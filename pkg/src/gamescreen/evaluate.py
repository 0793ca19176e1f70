"""Study bookkeeping: confusion matrices, accuracy accounting, and the
end-to-end synthetic replication study.

The at-risk (dysgraphic) label is the positive class.  Sessions the condition
detector flags as unsuitable are never classified; a flag counts toward
overall accuracy only when ground truth confirms the child's conditions
really were unsuitable.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from statistics import NormalDist
from typing import Any, Final, Sequence

from . import c45
from .augment import augment_to_balance
from .detector import (
    CohortStats,
    calibrate,
    detect_condition,
    stats_to_json,
)
from .errors import InsufficientDataError
from .features import FEATURE_NAMES, extract_session
from .model import (
    GAME2_STAGES,
    LABEL_DYSGRAPHIC,
    LABEL_NORMAL,
    LABELS,
    GameStage,
    LabeledSession,
    SessionRecord,
)
from .simulate import (
    PROFILE_CONFUSED,
    PROFILE_DYSGRAPHIC,
    PROFILE_NORMAL,
    ProfileConfig,
    simulate_cohort,
    simulate_record,
)

REPORT_SCHEMA_VERSION: Final = 1

_Z_TWO_SIDED_05: Final = NormalDist().inv_cdf(0.975)


@dataclass(frozen=True)
class ConfusionMatrix:
    """Binary outcome counts with the at-risk label as positive, plus flag tallies."""

    tp: int
    tn: int
    fp: int
    fn: int
    flagged_unsuitable: int = 0
    flagged_confirmed: int = 0


def confusion_matrix(predictions: Sequence[str], actuals: Sequence[str]) -> ConfusionMatrix:
    if len(predictions) != len(actuals):
        raise ValueError("predictions and actuals must have equal length")
    tp = tn = fp = fn = 0
    for predicted, actual in zip(predictions, actuals):
        if predicted not in LABELS or actual not in LABELS:
            raise ValueError(f"unknown label in ({predicted!r}, {actual!r})")
        if predicted == LABEL_DYSGRAPHIC:
            if actual == LABEL_DYSGRAPHIC:
                tp += 1
            else:
                fp += 1
        elif actual == LABEL_NORMAL:
            tn += 1
        else:
            fn += 1
    return ConfusionMatrix(tp, tn, fp, fn)


def overall_accuracy(matrix: ConfusionMatrix, total: int) -> float:
    """Percentage of sessions resolved correctly, to two decimals.

    Classified sessions and confirmed flags both count as successes; every
    session must be accounted for either as classified or as flagged.
    """
    accounted = matrix.tp + matrix.tn + matrix.fp + matrix.fn + matrix.flagged_unsuitable
    if accounted != total:
        raise ValueError(f"matrix accounts for {accounted} sessions, expected {total}")
    if not 0 <= matrix.flagged_confirmed <= matrix.flagged_unsuitable:
        raise ValueError("confirmed flags must not exceed flagged sessions")
    return round(100 * (matrix.tp + matrix.tn + matrix.flagged_confirmed) / total, 2)


@dataclass(frozen=True)
class HalfErrorBalance:
    first_half_error_rate: float
    second_half_error_rate: float
    z: float
    significant: bool


def half_error_balance(record: SessionRecord) -> HalfErrorBalance:
    """Compare error rates between the two halves of a record.

    Splits at index ceil(n/2) and runs a two-proportion z-test at the 0.05
    level.  A significant difference suggests fatigue or warm-up effects
    rather than stable performance.
    """
    n = len(record.events)
    if n < 4:
        raise InsufficientDataError(f"need at least 4 events to compare halves, got {n}")
    cut = (n + 1) // 2
    halves = (record.events[:cut], record.events[cut:])
    errors = [sum(1 for event in half if not event.correct) for half in halves]
    sizes = [len(half) for half in halves]
    rates = [e / s for e, s in zip(errors, sizes)]
    pooled = sum(errors) / n
    if pooled in (0.0, 1.0):
        z = 0.0
    else:
        se = math.sqrt(pooled * (1 - pooled) * (1 / sizes[0] + 1 / sizes[1]))
        z = (rates[0] - rates[1]) / se
    return HalfErrorBalance(rates[0], rates[1], z, abs(z) > _Z_TWO_SIDED_05)


# --- end-to-end study --------------------------------------------------------


@dataclass(frozen=True)
class StudyConfig:
    """Cohort shapes and training parameters for the replication study.

    A few test children are simulated with confused-condition first games
    (while keeping their dysgraphia label) so the detector gate has real work
    to do; ground truth for those children confirms the flag.
    """

    seed: int = 7
    train_normal: int = 45
    train_dysgraphic: int = 30
    augment_target: int = 45
    test_normal: int = 53
    test_dysgraphic: int = 21
    test_confused_normal: int = 2
    test_confused_dysgraphic: int = 1
    calibration_confused: int = 15
    calibration_normal: int = 17
    min_split: int = c45.MIN_SPLIT_DEFAULT
    confidence_factor: float = c45.CONFIDENCE_FACTOR_DEFAULT
    profiles: ProfileConfig = ProfileConfig()


def _simulate_calibration(config: StudyConfig) -> CohortStats:
    def game1_records(profile_name: str, count: int) -> list[SessionRecord]:
        profile = config.profiles.profile(profile_name)
        return [
            simulate_record(
                profile,
                config.profiles.events_per_stage,
                f"{config.seed}:calib:{profile_name}:{i}",
                session_id=f"calib-{profile_name}-{i + 1:03d}",
                game_stage=GameStage.GAME1,
            )
            for i in range(count)
        ]

    return calibrate(
        game1_records(PROFILE_CONFUSED, config.calibration_confused),
        game1_records(PROFILE_NORMAL, config.calibration_normal),
    )


def _augment_training_set(
    dysgraphic_sessions: Sequence[LabeledSession], config: StudyConfig
) -> list[LabeledSession]:
    """Stitch new dysgraphic sessions, one per index, stage by stage."""
    per_stage: dict[GameStage, list[SessionRecord]] = {}
    for stage in GAME2_STAGES:
        minority = [session.records[stage] for session in dysgraphic_sessions]
        per_stage[stage] = augment_to_balance(
            minority, config.augment_target, f"{config.seed}:aug:{stage.value}"
        )
    n_new = config.augment_target - len(dysgraphic_sessions)
    sessions = []
    for i in range(n_new):
        session_id = f"train-dysgraphic-aug{i + 1:03d}"
        records = {
            stage: dataclasses.replace(per_stage[stage][i], session_id=session_id)
            for stage in GAME2_STAGES
        }
        sessions.append(LabeledSession(session_id, records, LABEL_DYSGRAPHIC))
    return sessions


def run_study(config: StudyConfig = StudyConfig()) -> dict[str, Any]:
    """Run the full synthetic study and return its report document.

    The report is deterministic for a given config: serializing it with
    sorted keys yields byte-identical output across runs.
    """
    stats = _simulate_calibration(config)

    train_sessions = simulate_cohort(
        {PROFILE_NORMAL: config.train_normal, PROFILE_DYSGRAPHIC: config.train_dysgraphic},
        f"{config.seed}:train",
        config.profiles,
        id_prefix="train-",
    )
    dysgraphic_sessions = [s for s in train_sessions if s.actual_label == LABEL_DYSGRAPHIC]
    augmented = _augment_training_set(dysgraphic_sessions, config)

    dataset = c45.Dataset.build(
        FEATURE_NAMES,
        [(extract_session(s.records), s.actual_label) for s in [*train_sessions, *augmented]],
        class_order=LABELS,
    )
    params = c45.TrainParams(min_split=config.min_split, confidence_factor=config.confidence_factor)
    tree = c45.prune(c45.train(dataset, params), config.confidence_factor)
    model_doc = c45.tree_to_json(tree)

    test_sessions = simulate_cohort(
        {PROFILE_NORMAL: config.test_normal, PROFILE_DYSGRAPHIC: config.test_dysgraphic},
        f"{config.seed}:test",
        config.profiles,
        id_prefix="test-",
    )
    # Re-simulate the first games of a few test children under the confused
    # profile: their labels stay, but their conditions are truly unsuitable.
    confused_ids: set[str] = set()
    quotas = {
        LABEL_NORMAL: config.test_confused_normal,
        LABEL_DYSGRAPHIC: config.test_confused_dysgraphic,
    }
    reworked: list[LabeledSession] = []
    for session in test_sessions:
        if quotas.get(session.actual_label, 0) > 0:
            quotas[session.actual_label] -= 1
            confused_ids.add(session.session_id)
            records = dict(session.records)
            records[GameStage.GAME1] = simulate_record(
                config.profiles.confused,
                config.profiles.events_per_stage,
                f"{config.seed}:test-confused:{session.session_id}",
                session_id=session.session_id,
                game_stage=GameStage.GAME1,
            )
            session = LabeledSession(session.session_id, records, session.actual_label)
        reworked.append(session)
    test_sessions = reworked

    audit_log: list[dict[str, Any]] = []
    per_session: list[dict[str, Any]] = []
    predictions: list[str] = []
    actuals: list[str] = []
    flagged = flagged_confirmed = 0
    flags_by_label = {label: 0 for label in LABELS}

    for session in test_sessions:
        verdict = detect_condition(session.records[GameStage.GAME1], stats)
        audit_log.append(
            {
                "session_id": session.session_id,
                "step": "detector",
                "suitable": verdict.suitable,
                "reason": verdict.reason.value,
            }
        )
        outcome: dict[str, Any] = {
            "session_id": session.session_id,
            "actual": session.actual_label,
            "detector_reason": verdict.reason.value,
            "flagged": not verdict.suitable,
        }
        if not verdict.suitable:
            flagged += 1
            flags_by_label[session.actual_label] += 1
            confirmed = session.session_id in confused_ids
            flagged_confirmed += confirmed
            outcome["flag_confirmed"] = confirmed
            outcome["predicted"] = None
        else:
            predicted = c45.predict(tree, extract_session(session.records))
            audit_log.append(
                {"session_id": session.session_id, "step": "classifier", "predicted": predicted}
            )
            outcome["predicted"] = predicted
            predictions.append(predicted)
            actuals.append(session.actual_label)
        per_session.append(outcome)

    base = confusion_matrix(predictions, actuals)
    matrix = dataclasses.replace(
        base, flagged_unsuitable=flagged, flagged_confirmed=flagged_confirmed
    )
    total = len(test_sessions)
    accuracy = overall_accuracy(matrix, total)
    classified = len(predictions)
    correct = matrix.tp + matrix.tn

    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "config": dataclasses.asdict(config),
        "calibration": stats_to_json(stats),
        "model_version": model_doc["model_version"],
        "model": model_doc,
        "cohorts": {
            "train": {
                "normal": config.train_normal,
                "dysgraphic": config.train_dysgraphic,
                "augmented_dysgraphic": len(augmented),
            },
            "test": {
                "normal": config.test_normal,
                "dysgraphic": config.test_dysgraphic,
                "total": total,
            },
        },
        "flags": {
            "total": flagged,
            "confirmed": flagged_confirmed,
            "by_actual_label": flags_by_label,
        },
        "classification": {
            "classified": classified,
            "correct": correct,
            "wrong": classified - correct,
        },
        "confusion_matrix": dataclasses.asdict(matrix),
        "overall_accuracy_percent": accuracy,
        "alternative_tallies": {
            "classified_only_percent": round(100 * correct / classified, 2) if classified else 0.0,
            "flags_excluded_from_numerator_percent": round(100 * correct / total, 2),
        },
        "per_session": per_session,
        "audit_log": audit_log,
        "notes": [
            "Flagged sessions are excluded from classification; a flag counts as a"
            " success only when ground truth confirms the conditions were unsuitable.",
            "overall_accuracy_percent spans the whole cohort with confirmed flags in"
            " the numerator; alternative_tallies preserves the stricter readings that"
            " drop flags from the numerator or restrict to classified sessions.",
        ],
    }


def report_to_json(report: dict[str, Any]) -> str:
    """Canonical byte-stable serialization of a study report."""
    return json.dumps(report, sort_keys=True, indent=2) + "\n"
