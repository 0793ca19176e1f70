"""Unified command line for the screening pipeline.

Usage examples:
    gamescreen simulate --counts normal=45,dysgraphic=30 --seed 7 --out cohort/
    gamescreen calibrate --confused confused/ --normal normal/ --out stats.json
    gamescreen detect --calibration stats.json --session child.json
    gamescreen augment --in dys/ --stage game2a --target-count 45 --seed 7 --out aug/
    gamescreen features --in cohort/ --labels cohort/labels.csv --out features.csv
    gamescreen train --features features.csv --out model.json
    gamescreen predict --model model.json --features features.csv
    gamescreen run-study --seed 7 --out report.json
    gamescreen screen --model model.json --calibration stats.json --session child.json
    gamescreen serve --port 8000 --store store/
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import c45
from .augment import augment_to_balance
from .detector import calibrate, detect_condition, stats_from_json, stats_to_json
from .errors import ScreeningError
from .evaluate import (
    StudyConfig,
    confusion_matrix,
    overall_accuracy,
    report_to_json,
    run_study,
)
from .features import FEATURE_NAMES, extract_session
from .model import (
    LABELS,
    GameStage,
    SessionRecord,
    parse_session_document,
    parse_stage_log,
    record_to_stage_log,
    session_to_document,
)
from .service import ScreeningService, ScreeningStore, create_app
from .simulate import ProfileConfig, StageProfile, simulate_cohort

#: detect exits with this code for an unsuitable session.
EXIT_UNSUITABLE = 3


def _read_json(path: str | Path) -> Any:
    return json.loads(Path(path).read_text())


def _write_json(path: str | Path, doc: Any) -> None:
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _doc_files(directory: str | Path) -> list[Path]:
    files = sorted(p for p in Path(directory).glob("*.json"))
    if not files:
        raise ScreeningError(f"no .json documents in {directory}")
    return files


def _records_from_file(path: Path, stage: GameStage | None) -> list[SessionRecord]:
    """Session records in a file: one per stage for documents, one for stage logs."""
    doc = _read_json(path)
    if isinstance(doc, dict) and "stages" in doc:
        records = parse_session_document(doc).records()
        if stage is not None:
            return [records[stage]]
        return [records[s] for s in sorted(records, key=lambda s: s.value)]
    record = parse_stage_log(doc).to_record()
    if stage is not None and record.game_stage != stage:
        return []
    return [record]


def _game1_record(path: Path) -> SessionRecord:
    return _records_from_file(path, GameStage.GAME1)[0]


def _profiles_from_doc(doc: dict[str, Any]) -> ProfileConfig:
    kwargs: dict[str, Any] = {}
    for name in ("normal", "dysgraphic", "confused"):
        if name in doc:
            kwargs[name] = StageProfile(**doc[name])
    if "events_per_stage" in doc:
        kwargs["events_per_stage"] = doc["events_per_stage"]
    return dataclasses.replace(ProfileConfig(), **kwargs)


# --- subcommands -------------------------------------------------------------


def cmd_simulate(args: argparse.Namespace) -> int:
    counts: dict[str, int] = {}
    for part in args.counts.split(","):
        name, _, value = part.partition("=")
        counts[name.strip()] = int(value)
    config = ProfileConfig()
    if args.profiles:
        config = _profiles_from_doc(_read_json(args.profiles))
    if args.events:
        config = dataclasses.replace(config, events_per_stage=args.events)
    sessions = simulate_cohort(counts, args.seed, config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for session in sessions:
        doc = session_to_document(session.session_id, session.records.values())
        _write_json(out / f"{session.session_id}.json", doc)
    with open(out / "labels.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["session_id", "label"])
        for session in sessions:
            writer.writerow([session.session_id, session.actual_label or ""])
    print(f"wrote {len(sessions)} sessions to {out}")
    return 0


def cmd_calibrate(args: argparse.Namespace) -> int:
    confused = [_game1_record(p) for p in _doc_files(args.confused)]
    normal = [_game1_record(p) for p in _doc_files(args.normal)]
    stats = calibrate(confused, normal)
    _write_json(args.out, stats_to_json(stats))
    print(f"calibrated from {len(confused)} confused / {len(normal)} normal sessions")
    return 0


def cmd_detect(args: argparse.Namespace) -> int:
    stats = stats_from_json(_read_json(args.calibration))
    record = _game1_record(Path(args.session))
    verdict = detect_condition(record, stats)
    print(json.dumps({"suitable": verdict.suitable, "reason": verdict.reason.value}))
    return 0 if verdict.suitable else EXIT_UNSUITABLE


def cmd_augment(args: argparse.Namespace) -> int:
    stage = GameStage(args.stage) if args.stage else None
    minority: list[SessionRecord] = []
    for path in _doc_files(args.in_dir):
        minority.extend(_records_from_file(path, stage))
    if not minority:
        raise ScreeningError(f"no {args.stage or 'stage'} records found in {args.in_dir}")
    new_records = augment_to_balance(minority, args.target_count, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for record in new_records:
        _write_json(out / f"{record.session_id}.json", record_to_stage_log(record))
    print(f"wrote {len(new_records)} augmented records to {out}")
    return 0


def _read_labels(path: str | Path) -> dict[str, str]:
    with open(path, newline="") as fh:
        return {row["session_id"]: row["label"] for row in csv.DictReader(fh)}


def cmd_features(args: argparse.Namespace) -> int:
    labels = _read_labels(args.labels) if args.labels else None
    rows = []
    for path in _doc_files(args.in_dir):
        doc = _read_json(path)
        if not (isinstance(doc, dict) and "stages" in doc):
            continue
        parsed = parse_session_document(doc)
        vector = extract_session(parsed.records())
        rows.append((parsed.session_id, vector))
    rows.sort(key=lambda item: item[0])
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        header = ["session_id", *FEATURE_NAMES]
        if labels is not None:
            header.append("label")
        writer.writerow(header)
        for session_id, vector in rows:
            row = [session_id, *(repr(v) for v in vector)]
            if labels is not None:
                row.append(labels.get(session_id, ""))
            writer.writerow(row)
    print(f"wrote {len(rows)} feature rows to {args.out}")
    return 0


def _read_features(path: str | Path) -> tuple[list[str], list[tuple[str, tuple[float, ...], str | None]]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        has_label = header and header[-1] == "label"
        names = header[1 : -1 if has_label else len(header)]
        rows = []
        for raw in reader:
            session_id = raw[0]
            values = tuple(float(v) for v in (raw[1:-1] if has_label else raw[1:]))
            label = raw[-1] if has_label else None
            rows.append((session_id, values, label))
    return names, rows


def cmd_train(args: argparse.Namespace) -> int:
    names, rows = _read_features(args.features)
    labeled = [(values, label) for _, values, label in rows if label]
    if len(labeled) < len(rows):
        raise ScreeningError("every training row needs a label")
    class_order = LABELS if {label for _, label in labeled} <= set(LABELS) else None
    dataset = c45.Dataset.build(names, labeled, class_order)
    params = c45.TrainParams(min_split=args.min_split, confidence_factor=args.cf)
    tree = c45.prune(c45.train(dataset, params), args.cf)
    doc = c45.tree_to_json(tree)
    _write_json(args.out, doc)
    print(f"trained {doc['model_version']} on {len(labeled)} rows "
          f"({c45.leaf_count(tree.root)} leaves)")
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    tree = c45.tree_from_json(_read_json(args.model))
    _, rows = _read_features(args.features)
    writer = csv.writer(sys.stdout)
    writer.writerow(["session_id", "predicted"])
    for session_id, values, _ in rows:
        writer.writerow([session_id, c45.predict(tree, values)])
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    with open(args.predictions, newline="") as fh:
        pairs = [(row["predicted"], row["actual"]) for row in csv.DictReader(fh)]
    matrix = confusion_matrix([p for p, _ in pairs], [a for _, a in pairs])
    matrix = dataclasses.replace(
        matrix, flagged_unsuitable=args.flagged, flagged_confirmed=args.confirmed
    )
    total = len(pairs) + args.flagged
    print(
        json.dumps(
            {
                "confusion_matrix": dataclasses.asdict(matrix),
                "overall_accuracy_percent": overall_accuracy(matrix, total),
            },
            sort_keys=True,
        )
    )
    return 0


def cmd_run_study(args: argparse.Namespace) -> int:
    config = StudyConfig()
    if args.config:
        doc = _read_json(args.config)
        if "profiles" in doc:
            doc["profiles"] = _profiles_from_doc(doc["profiles"])
        config = dataclasses.replace(config, **doc)
    if args.seed is not None:
        config = dataclasses.replace(config, seed=args.seed)
    report = run_study(config)
    Path(args.out).write_text(report_to_json(report))
    print(
        f"seed {config.seed}: accuracy {report['overall_accuracy_percent']}% "
        f"({report['flags']['total']} flagged, {report['classification']['wrong']} misclassified)"
    )
    return 0


def cmd_screen(args: argparse.Namespace) -> int:
    stats = stats_from_json(_read_json(args.calibration))
    model_doc = _read_json(args.model)
    tree = c45.tree_from_json(model_doc)
    records = parse_session_document(_read_json(args.session)).records()
    verdict = detect_condition(records[GameStage.GAME1], stats)
    result: dict[str, Any] = {
        "session_id": records[GameStage.GAME1].session_id,
        "detector_reason": verdict.reason.value,
        "model_version": model_doc.get("model_version"),
    }
    if verdict.suitable or args.ignore_gate:
        features = extract_session(records)
        predicted = c45.predict(tree, features)
        result["verdict"] = (
            "at_risk_dysgraphia" if predicted == "dysgraphic" else "typical"
        )
        result["feature_vector"] = list(features)
        if not verdict.suitable:
            result["verdict"] = "unsuitable_conditions"
            result["gate_overridden_prediction"] = predicted
    else:
        result["verdict"] = "unsuitable_conditions"
    print(json.dumps(result, sort_keys=True))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    service = ScreeningService(ScreeningStore(args.store))
    if args.model:
        service.load_model(_read_json(args.model))
    if args.calibration:
        service.load_calibration(_read_json(args.calibration))
    uvicorn.run(create_app(service), host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gamescreen", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate a synthetic cohort")
    p.add_argument("--counts", required=True, help="e.g. normal=45,dysgraphic=30,confused=5")
    p.add_argument("--seed", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--events", type=int, default=None, help="events per stage")
    p.add_argument("--profiles", help="JSON file overriding behavior profiles")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("calibrate", help="fit condition-detector bands")
    p.add_argument("--confused", required=True, help="directory of confused-cohort session logs")
    p.add_argument("--normal", required=True, help="directory of normal-cohort session logs")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_calibrate)

    p = sub.add_parser("detect", help="judge one session's test conditions")
    p.add_argument("--calibration", required=True)
    p.add_argument("--session", required=True)
    p.set_defaults(fn=cmd_detect)

    p = sub.add_parser("augment", help="oversample a minority class by recombination")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--stage", choices=[s.value for s in GameStage], default=None)
    p.add_argument("--target-count", type=int, required=True)
    p.add_argument("--seed", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_augment)

    p = sub.add_parser("features", help="extract feature vectors to CSV")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--labels", help="labels.csv to join on session_id")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_features)

    p = sub.add_parser("train", help="train and prune a decision tree")
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--cf", type=float, default=c45.CONFIDENCE_FACTOR_DEFAULT)
    p.add_argument("--min-split", type=int, default=c45.MIN_SPLIT_DEFAULT)
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("predict", help="classify feature vectors")
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True)
    p.set_defaults(fn=cmd_predict)

    p = sub.add_parser("evaluate", help="confusion matrix and accuracy from predictions")
    p.add_argument("--predictions", required=True, help="CSV with predicted and actual columns")
    p.add_argument("--flagged", type=int, default=0)
    p.add_argument("--confirmed", type=int, default=0)
    p.set_defaults(fn=cmd_evaluate)

    p = sub.add_parser("run-study", help="run the end-to-end synthetic study")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--config", help="JSON file overriding study config fields")
    p.set_defaults(fn=cmd_run_study)

    p = sub.add_parser("screen", help="screen one session document from files")
    p.add_argument("--model", required=True)
    p.add_argument("--calibration", required=True)
    p.add_argument("--session", required=True)
    p.add_argument(
        "--ignore-gate",
        action="store_true",
        help="research replay: classify even when conditions are unsuitable",
    )
    p.set_defaults(fn=cmd_screen)

    p = sub.add_parser("serve", help="run the screening HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--store", required=True)
    p.add_argument("--model")
    p.add_argument("--calibration")
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ScreeningError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
