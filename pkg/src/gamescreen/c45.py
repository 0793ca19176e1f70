"""Decision-tree induction over continuous attributes with binary splits.

Splits maximize gain ratio among candidate thresholds (midpoints between
consecutive distinct attribute values), considering only candidates with
strictly positive information gain.  Grown trees are pruned bottom-up by
comparing each subtree's pessimistic error against that of the leaf that
would replace it, where the pessimistic error of a leaf is the one-sided
Wilson upper confidence bound on its observed error count.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from statistics import NormalDist
from typing import Any, Final, Iterable, Mapping, Sequence, Union

from .errors import ModelFormatError

MIN_SPLIT_DEFAULT: Final = 2
CONFIDENCE_FACTOR_DEFAULT: Final = 0.25
MODEL_SCHEMA_VERSION: Final = 1

#: Score comparisons use a small tolerance so float noise between
#: mathematically equal candidates cannot override the deterministic
#: tie-break (lowest attribute index, then lowest threshold).
SCORE_EPS: Final = 1e-12

Row = tuple[tuple[float, ...], str]


@dataclass(frozen=True)
class Dataset:
    """Feature rows with a fixed attribute order and class label order.

    class_order fixes how label ties are broken everywhere (first label wins);
    when not given it defaults to sorted unique labels.
    """

    attribute_names: tuple[str, ...]
    rows: tuple[Row, ...]
    class_order: tuple[str, ...]

    @staticmethod
    def build(
        attribute_names: Sequence[str],
        rows: Iterable[tuple[Sequence[float], str]],
        class_order: Sequence[str] | None = None,
    ) -> "Dataset":
        frozen_rows = tuple((tuple(float(v) for v in values), label) for values, label in rows)
        for values, _ in frozen_rows:
            if len(values) != len(attribute_names):
                raise ValueError(
                    f"row arity {len(values)} does not match {len(attribute_names)} attributes"
                )
        if class_order is None:
            class_order = sorted({label for _, label in frozen_rows})
        else:
            unknown = {label for _, label in frozen_rows} - set(class_order)
            if unknown:
                raise ValueError(f"labels outside class order: {sorted(unknown)}")
        return Dataset(tuple(attribute_names), frozen_rows, tuple(class_order))


@dataclass(frozen=True)
class TrainParams:
    min_split: int = MIN_SPLIT_DEFAULT
    confidence_factor: float = CONFIDENCE_FACTOR_DEFAULT
    default_class: str | None = None


@dataclass(frozen=True)
class Leaf:
    label: str
    counts: Mapping[str, int]


@dataclass(frozen=True)
class Split:
    attr: int
    threshold: float
    left: "Node"
    right: "Node"
    counts: Mapping[str, int]


Node = Union[Leaf, Split]


@dataclass(frozen=True)
class DecisionTree:
    root: Node
    attribute_names: tuple[str, ...]
    class_order: tuple[str, ...]


def entropy(counts: Sequence[int]) -> float:
    """Shannon entropy in bits of a class-count distribution."""
    total = sum(counts)
    if total == 0:
        return 0.0
    h = 0.0
    for count in counts:
        if count:
            p = count / total
            h -= p * math.log2(p)
    return h


def _label_counts(rows: Sequence[Row], class_order: Sequence[str]) -> dict[str, int]:
    counts = {label: 0 for label in class_order}
    for _, label in rows:
        counts[label] += 1
    return counts


def _majority(counts: Mapping[str, int], class_order: Sequence[str]) -> str:
    best = class_order[0]
    for label in class_order[1:]:
        if counts.get(label, 0) > counts.get(best, 0):
            best = label
    return best


def candidate_thresholds(values: Sequence[float]) -> list[float]:
    """Midpoints between consecutive distinct sorted values."""
    distinct = sorted(set(values))
    return [(a + b) / 2 for a, b in zip(distinct, distinct[1:])]


def _split_scores(
    rows: Sequence[Row], attr: int, threshold: float, class_order: Sequence[str]
) -> tuple[float, float]:
    left = [row for row in rows if row[0][attr] <= threshold]
    right = [row for row in rows if row[0][attr] > threshold]
    if not left or not right:
        raise ValueError(f"threshold {threshold} does not split attribute {attr}")
    n = len(rows)
    parent_h = entropy(list(_label_counts(rows, class_order).values()))
    gain = parent_h
    split_info = 0.0
    for side in (left, right):
        weight = len(side) / n
        gain -= weight * entropy(list(_label_counts(side, class_order).values()))
        split_info -= weight * math.log2(weight)
    return gain, split_info


def gain_ratio(dataset: Dataset, attr: int, threshold: float) -> tuple[float, float, float]:
    """(information gain, split information, gain ratio) of a threshold split."""
    gain, split_info = _split_scores(dataset.rows, attr, threshold, dataset.class_order)
    return gain, split_info, gain / split_info


@dataclass(frozen=True)
class SplitChoice:
    attr: int
    threshold: float
    gain: float
    split_info: float
    ratio: float


def _best_split(rows: Sequence[Row], n_attrs: int, class_order: Sequence[str]) -> SplitChoice | None:
    best: SplitChoice | None = None
    for attr in range(n_attrs):
        for threshold in candidate_thresholds([row[0][attr] for row in rows]):
            gain, split_info = _split_scores(rows, attr, threshold, class_order)
            if gain <= SCORE_EPS:
                continue
            ratio = gain / split_info
            if best is None or ratio > best.ratio + SCORE_EPS:
                best = SplitChoice(attr, threshold, gain, split_info, ratio)
    return best


def best_split(dataset: Dataset) -> SplitChoice | None:
    """The positive-gain candidate with the highest gain ratio, if any."""
    return _best_split(dataset.rows, len(dataset.attribute_names), dataset.class_order)


def train(dataset: Dataset, params: TrainParams = TrainParams()) -> DecisionTree:
    """Grow an unpruned tree; leaves keep the training class counts they saw."""
    if params.default_class is not None:
        default = params.default_class
    elif dataset.rows:
        default = _majority(_label_counts(dataset.rows, dataset.class_order), dataset.class_order)
    else:
        raise ValueError("default class undefined for an empty dataset")
    n_attrs = len(dataset.attribute_names)

    def grow(rows: Sequence[Row]) -> Node:
        counts = _label_counts(rows, dataset.class_order)
        if not rows:
            return Leaf(default, counts)
        present = [label for label, count in counts.items() if count]
        if len(present) == 1:
            return Leaf(present[0], counts)
        if len(rows) < params.min_split:
            return Leaf(_majority(counts, dataset.class_order), counts)
        choice = _best_split(rows, n_attrs, dataset.class_order)
        if choice is None:
            return Leaf(_majority(counts, dataset.class_order), counts)
        left = [row for row in rows if row[0][choice.attr] <= choice.threshold]
        right = [row for row in rows if row[0][choice.attr] > choice.threshold]
        return Split(choice.attr, choice.threshold, grow(left), grow(right), counts)

    return DecisionTree(grow(dataset.rows), dataset.attribute_names, dataset.class_order)


def wilson_upper(errors: int, n: int, z: float) -> float:
    """One-sided Wilson score upper bound on an error rate."""
    if n <= 0:
        raise ValueError("n must be positive")
    f = errors / n
    z2 = z * z
    center = f + z2 / (2 * n)
    margin = z * math.sqrt(f * (1 - f) / n + z2 / (4 * n * n))
    return (center + margin) / (1 + z2 / n)


def _node_errors(counts: Mapping[str, int], label: str) -> tuple[int, int]:
    n = sum(counts.values())
    return n - counts.get(label, 0), n


def subtree_pessimistic_errors(node: Node, z: float) -> float:
    """Sum of the leaves' pessimistic error counts."""
    if isinstance(node, Leaf):
        errors, n = _node_errors(node.counts, node.label)
        if n == 0:
            return 0.0
        return n * wilson_upper(errors, n, z)
    return subtree_pessimistic_errors(node.left, z) + subtree_pessimistic_errors(node.right, z)


def tree_error_estimate(tree: DecisionTree, confidence_factor: float = CONFIDENCE_FACTOR_DEFAULT) -> float:
    return subtree_pessimistic_errors(tree.root, NormalDist().inv_cdf(1 - confidence_factor))


def leaf_count(node: Node) -> int:
    if isinstance(node, Leaf):
        return 1
    return leaf_count(node.left) + leaf_count(node.right)


def prune(tree: DecisionTree, confidence_factor: float = CONFIDENCE_FACTOR_DEFAULT) -> DecisionTree:
    """Collapse subtrees whose majority leaf would not estimate worse.

    Children are pruned before their parent is considered; a subtree is
    replaced when the replacement leaf's pessimistic error is no higher than
    the pruned subtree's.
    """
    z = NormalDist().inv_cdf(1 - confidence_factor)

    def visit(node: Node, class_order: Sequence[str]) -> Node:
        if isinstance(node, Leaf):
            return node
        pruned = Split(
            node.attr,
            node.threshold,
            visit(node.left, class_order),
            visit(node.right, class_order),
            node.counts,
        )
        label = _majority(node.counts, class_order)
        errors, n = _node_errors(node.counts, label)
        leaf_estimate = n * wilson_upper(errors, n, z) if n else 0.0
        if leaf_estimate <= subtree_pessimistic_errors(pruned, z) + SCORE_EPS:
            return Leaf(label, node.counts)
        return pruned

    return DecisionTree(visit(tree.root, tree.class_order), tree.attribute_names, tree.class_order)


def predict(tree: DecisionTree, features: Sequence[float]) -> str:
    """Route a feature vector to a leaf; values equal to a threshold go left."""
    if len(features) != len(tree.attribute_names):
        raise ValueError(
            f"feature arity {len(features)} does not match {len(tree.attribute_names)} attributes"
        )
    node = tree.root
    while isinstance(node, Split):
        node = node.left if features[node.attr] <= node.threshold else node.right
    return node.label


def _node_to_json(node: Node) -> dict[str, Any]:
    if isinstance(node, Leaf):
        return {"class": node.label, "counts": dict(node.counts)}
    return {
        "attr": node.attr,
        "threshold": node.threshold,
        "counts": dict(node.counts),
        "left": _node_to_json(node.left),
        "right": _node_to_json(node.right),
    }


def model_version_of(doc: Mapping[str, Any]) -> str:
    payload = {key: doc[key] for key in ("attributes", "classes", "root")}
    digest = hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()
    return f"c45-{digest[:12]}"


def tree_to_json(tree: DecisionTree) -> dict[str, Any]:
    doc = {
        "schema_version": MODEL_SCHEMA_VERSION,
        "attributes": list(tree.attribute_names),
        "classes": list(tree.class_order),
        "root": _node_to_json(tree.root),
    }
    doc["model_version"] = model_version_of(doc)
    return doc


def _node_from_json(obj: Any, n_attrs: int, classes: Sequence[str]) -> Node:
    if not isinstance(obj, dict):
        raise ModelFormatError("tree node must be an object")
    counts = obj.get("counts")
    if not isinstance(counts, dict) or not all(
        isinstance(k, str) and isinstance(v, int) and v >= 0 for k, v in counts.items()
    ):
        raise ModelFormatError("node counts must map labels to non-negative integers")
    if "class" in obj:
        if obj["class"] not in classes:
            raise ModelFormatError(f"unknown leaf class: {obj['class']!r}")
        return Leaf(obj["class"], dict(counts))
    attr, threshold = obj.get("attr"), obj.get("threshold")
    if not isinstance(attr, int) or not 0 <= attr < n_attrs:
        raise ModelFormatError(f"split attribute out of range: {attr!r}")
    if not isinstance(threshold, (int, float)) or not math.isfinite(threshold):
        raise ModelFormatError(f"split threshold must be finite: {threshold!r}")
    if "left" not in obj or "right" not in obj:
        raise ModelFormatError("split node must have left and right children")
    return Split(
        attr,
        float(threshold),
        _node_from_json(obj["left"], n_attrs, classes),
        _node_from_json(obj["right"], n_attrs, classes),
        dict(counts),
    )


def tree_from_json(obj: Any) -> DecisionTree:
    if not isinstance(obj, dict):
        raise ModelFormatError("model document must be an object")
    if obj.get("schema_version") != MODEL_SCHEMA_VERSION:
        raise ModelFormatError(f"unsupported model schema_version: {obj.get('schema_version')!r}")
    attributes = obj.get("attributes")
    classes = obj.get("classes")
    if not isinstance(attributes, list) or not all(isinstance(a, str) for a in attributes):
        raise ModelFormatError("model attributes must be a list of names")
    if not isinstance(classes, list) or not classes or not all(isinstance(c, str) for c in classes):
        raise ModelFormatError("model classes must be a non-empty list of labels")
    root = _node_from_json(obj.get("root"), len(attributes), classes)
    return DecisionTree(root, tuple(attributes), tuple(classes))
