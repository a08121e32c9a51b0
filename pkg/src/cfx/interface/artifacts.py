"""On-disk formats: model artifacts, instances, weights, conditions, CSV.

Model artifact (JSON, schema tag ``cfx-model/1``)::

    {"schema": "cfx-model/1", "type": "decision_tree",
     "features": [{"name": "X1", "kind": "continuous"},
                  {"name": "race", "kind": "categorical", "categories": ["White", "Black"]}],
     "tree": {"feature": "X1", "threshold": 10,
              "true": {...}, "false": {"class": 0}}}

Tree nodes are either splits (``threshold`` for continuous features,
``category`` for categorical ones) or leaves ``{"class": 0|1}``.  Forests
carry ``"trees": [...]``; naive Bayes carries
``"nb": {"prior": [p0, p1], "cpt": {feature: {category: [p|0, p|1]}}}``.

Instances are plain JSON objects mapping feature names to values.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import warnings

from .._intervals import INF, Interval
from ..encoder import Condition
from ..errors import InvalidModel
from ..models import (
    CATEGORICAL,
    CONTINUOUS,
    AnyModel,
    DecisionTreeModel,
    Feature,
    NaiveBayesModel,
    Predicate,
    RandomForestModel,
    TreeNode,
    model_kind,
    validate_model,
)
from ..weights import Dataset

SCHEMA_MODEL = "cfx-model/1"
SCHEMA_EXPLANATION = "cfx-explanation/1"
SCHEMA_WEIGHTS = "cfx-weights/1"


def canonical_bytes(payload: dict) -> bytes:
    """Stable JSON bytes: sorted keys, compact separators, trailing newline."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode() + b"\n"


def content_hash(raw: bytes) -> str:
    return hashlib.sha256(raw).hexdigest()


# ---------------------------------------------------------------------------
# models


def _feature_from_json(obj: dict) -> Feature:
    kind = obj.get("kind", CONTINUOUS)
    cats = tuple(obj.get("categories", ()))
    return Feature(obj["name"], kind, cats)


def _feature_to_json(f: Feature) -> dict:
    out = {"name": f.name, "kind": f.kind}
    if f.kind == CATEGORICAL:
        out["categories"] = list(f.categories)
    return out


def _node_from_json(obj: dict) -> TreeNode:
    if "class" in obj:
        return TreeNode.leaf(int(obj["class"]))
    if "threshold" in obj:
        pred = Predicate(obj["feature"], "le", threshold=float(obj["threshold"]))
    elif "category" in obj:
        pred = Predicate(obj["feature"], "eq", category=str(obj["category"]))
    else:
        raise InvalidModel(f"tree node needs 'class', 'threshold' or 'category': {obj!r}")
    return TreeNode.split(pred, _node_from_json(obj["true"]), _node_from_json(obj["false"]))


def _node_to_json(node: TreeNode) -> dict:
    if node.is_leaf:
        return {"class": node.leaf_class}
    out: dict = {"feature": node.predicate.feature}
    if node.predicate.op == "le":
        out["threshold"] = node.predicate.threshold
    else:
        out["category"] = node.predicate.category
    out["true"] = _node_to_json(node.true_child)
    out["false"] = _node_to_json(node.false_child)
    return out


def parse_model(obj: dict) -> AnyModel:
    """Parse and validate a model artifact document."""
    if obj.get("schema") != SCHEMA_MODEL:
        raise InvalidModel(f"expected schema {SCHEMA_MODEL!r}, got {obj.get('schema')!r}")
    features = tuple(_feature_from_json(f) for f in obj.get("features", ()))
    mtype = obj.get("type")
    if mtype == "decision_tree":
        model: AnyModel = DecisionTreeModel(_node_from_json(obj["tree"]), features)
    elif mtype == "random_forest":
        trees = tuple(DecisionTreeModel(_node_from_json(t), features) for t in obj["trees"])
        model = RandomForestModel(trees, features)
    elif mtype == "naive_bayes":
        nb = obj["nb"]
        cpt = {
            feat: {cat: (float(p[0]), float(p[1])) for cat, p in table.items()}
            for feat, table in nb["cpt"].items()
        }
        model = NaiveBayesModel(features, (float(nb["prior"][0]), float(nb["prior"][1])), cpt)
    else:
        raise InvalidModel(f"unknown model type {mtype!r}")
    return validate_model(model)


def serialize_model(model: AnyModel) -> dict:
    kind = model_kind(model)
    out = {
        "schema": SCHEMA_MODEL,
        "type": kind,
        "features": [_feature_to_json(f) for f in model.features],
    }
    if kind == "decision_tree":
        out["tree"] = _node_to_json(model.root)
    elif kind == "random_forest":
        out["trees"] = [_node_to_json(t.root) for t in model.trees]
    elif kind == "naive_bayes":
        out["nb"] = {
            "prior": list(model.class_prior),
            "cpt": {f.name: {c: list(model.cpt[f.name][c]) for c in f.categories} for f in model.features},
        }
    else:
        raise InvalidModel(f"cannot serialize model type {kind!r}")
    return out


def load_model_file(path: str) -> tuple[AnyModel, str]:
    """Read an artifact file; returns (validated model, content hash)."""
    with open(path, "rb") as fh:
        raw = fh.read()
    return parse_model(json.loads(raw.decode("utf-8"))), content_hash(raw)


def parse_instance(obj: dict) -> dict:
    if "values" in obj and isinstance(obj["values"], dict):
        obj = obj["values"]
    return {str(k): v for k, v in obj.items()}


def load_instance_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(json.load(fh))


# ---------------------------------------------------------------------------
# conditions


def parse_condition(obj: dict) -> Condition:
    feature = obj["feature"]
    op = obj["op"]
    if op == "eq":
        return Condition.equals(feature, obj["value"])
    if op == "ne":
        return Condition.not_equals(feature, obj["value"])
    if op == "gt":
        return Condition.greater(feature, float(obj["value"]), strict=True)
    if op == "ge":
        return Condition.greater(feature, float(obj["value"]), strict=False)
    if op == "lt":
        return Condition.less_equal(feature, float(obj["value"]), strict=True)
    if op == "le":
        return Condition.less_equal(feature, float(obj["value"]), strict=False)
    if op in ("interval", "in_interval"):
        lo = -INF if obj.get("lo") is None else float(obj["lo"])
        hi = INF if obj.get("hi") is None else float(obj["hi"])
        return Condition(
            feature,
            "interval",
            interval=Interval(lo, hi, bool(obj.get("lo_open", False)), bool(obj.get("hi_open", False))),
        )
    raise InvalidModel(f"unknown condition op {op!r}")


def condition_to_json(cond: Condition) -> dict:
    if cond.op in ("eq", "ne"):
        return {"feature": cond.feature, "op": cond.op, "value": cond.category}
    iv = cond.interval
    return {
        "feature": cond.feature,
        "op": "interval",
        "lo": None if iv.lo == -INF else iv.lo,
        "hi": None if iv.hi == INF else iv.hi,
        "lo_open": iv.lo_open,
        "hi_open": iv.hi_open,
    }


def parse_fix(text: str) -> Condition:
    """CLI condition grammar.

    ``f=v`` equality, ``f!=v`` inequality, ``f:lo..hi`` closed interval
    (either bound may be omitted), ``f:>x``, ``f:>=x``, ``f:<x``, ``f:<=x``.
    """
    if "!=" in text:
        feature, value = text.split("!=", 1)
        return Condition.not_equals(feature.strip(), value.strip())
    if ":" in text:
        feature, rest = text.split(":", 1)
        feature = feature.strip()
        rest = rest.strip()
        if rest.startswith(">="):
            return Condition.greater(feature, float(rest[2:]), strict=False)
        if rest.startswith(">"):
            return Condition.greater(feature, float(rest[1:]), strict=True)
        if rest.startswith("<="):
            return Condition.less_equal(feature, float(rest[2:]), strict=False)
        if rest.startswith("<"):
            return Condition.less_equal(feature, float(rest[1:]), strict=True)
        if ".." in rest:
            lo_s, hi_s = rest.split("..", 1)
            lo = float(lo_s) if lo_s else -INF
            hi = float(hi_s) if hi_s else INF
            return Condition.between(feature, lo, hi)
        raise InvalidModel(f"cannot parse condition {text!r}")
    if "=" in text:
        feature, value = text.split("=", 1)
        return Condition.equals(feature.strip(), value.strip())
    raise InvalidModel(f"cannot parse condition {text!r}")


# ---------------------------------------------------------------------------
# datasets (CSV)


def parse_csv_dataset(text: str, features) -> Dataset:
    """RFC-4180 CSV with a header row naming feature columns.

    Continuous columns parse as decimal-point reals; categorical columns are
    taken verbatim.  Columns not matching any feature are ignored with a
    warning.
    """
    reader = csv.DictReader(io.StringIO(text))
    if not reader.fieldnames:
        raise InvalidModel("dataset CSV has no header row")
    by_name = {f.name: f for f in features}
    unknown = [c for c in reader.fieldnames if c not in by_name]
    if unknown:
        warnings.warn(f"ignoring unknown dataset columns: {unknown}", stacklevel=2)
    columns: dict[str, list] = {c: [] for c in reader.fieldnames if c in by_name}
    n = 0
    for row in reader:
        n += 1
        for name in columns:
            value = row[name]
            if by_name[name].kind == CONTINUOUS:
                columns[name].append(float(value))
            else:
                columns[name].append(value)
    if n == 0:
        raise InvalidModel("dataset CSV has no data rows")
    return Dataset(columns, n)


def load_csv_dataset(path: str, features) -> Dataset:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return parse_csv_dataset(fh.read(), features)
