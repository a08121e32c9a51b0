"""Binary classifiers over mixed feature spaces.

Four model kinds are supported: decision trees with threshold or
category-equality splits, majority-vote random forests, naive Bayes models
over categorical features, and raw truth tables over binary atoms.  Models
are plain frozen dataclasses: validate once with :func:`validate_model`,
then share freely across threads.

Evaluation is deterministic.  Vote ties in a forest and posterior ties in a
naive Bayes model both resolve to class 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    BadDistribution,
    BadInstance,
    ConstantClassifier,
    EnumerationCapExceeded,
    InvalidModel,
    UnknownFeature,
)

CONTINUOUS = "continuous"
CATEGORICAL = "categorical"

#: Naive Bayes / truth-table models refuse more features than this at
#: validation time; joint enumeration beyond it is hopeless anyway.
DEFAULT_FEATURE_CAP = 20

Instance = dict  # feature name -> float | str


@dataclass(frozen=True)
class Feature:
    """A named model input, real-valued or categorical."""

    name: str
    kind: str
    categories: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "categories", tuple(self.categories))


@dataclass(frozen=True)
class Predicate:
    """A binary atom: threshold test ``X <= a`` or equality ``X = v``."""

    feature: str
    op: str  # "le" | "eq"
    threshold: float | None = None
    category: str | None = None

    def __str__(self) -> str:
        if self.op == "le":
            return f"{self.feature}<={_fmt_num(self.threshold)}"
        return f"{self.feature}={self.category}"

    def holds_for(self, value) -> bool:
        if self.op == "le":
            return value <= self.threshold
        return value == self.category


def _fmt_num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


@dataclass(frozen=True)
class TreeNode:
    """Internal split node or class leaf."""

    predicate: Predicate | None = None
    true_child: "TreeNode | None" = None
    false_child: "TreeNode | None" = None
    leaf_class: int | None = None

    @property
    def is_leaf(self) -> bool:
        return self.leaf_class is not None

    @staticmethod
    def leaf(cls: int) -> "TreeNode":
        return TreeNode(leaf_class=cls)

    @staticmethod
    def split(predicate: Predicate, true_child: "TreeNode", false_child: "TreeNode") -> "TreeNode":
        return TreeNode(predicate=predicate, true_child=true_child, false_child=false_child)


@dataclass(frozen=True)
class DecisionTreeModel:
    root: TreeNode
    features: tuple[Feature, ...]

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(self.features))


@dataclass(frozen=True)
class RandomForestModel:
    """Majority vote over trees sharing one feature declaration; ties -> class 0."""

    trees: tuple[DecisionTreeModel, ...]
    features: tuple[Feature, ...]

    def __post_init__(self):
        object.__setattr__(self, "trees", tuple(self.trees))
        object.__setattr__(self, "features", tuple(self.features))


@dataclass(frozen=True)
class NaiveBayesModel:
    """Binary-class naive Bayes over categorical features.

    ``cpt[feature][category] == (P(cat | class 0), P(cat | class 1))``.
    Scores are compared in log space; zero probabilities are allowed.
    """

    features: tuple[Feature, ...]
    class_prior: tuple[float, float]
    cpt: dict  # feature name -> {category -> (p_given_0, p_given_1)}

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(self.features))
        object.__setattr__(self, "class_prior", tuple(self.class_prior))


@dataclass(frozen=True)
class TruthTable:
    """An explicit binary classifier over named binary atoms.

    ``classes[i]`` is the class of the assignment whose bit ``b`` of ``i``
    (little-endian over ``variables``) gives the value of variable ``b``.
    Variables behave as categorical features with categories ("0", "1").
    """

    variables: tuple[str, ...]
    classes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "classes", tuple(self.classes))

    @property
    def features(self) -> tuple[Feature, ...]:
        return tuple(Feature(v, CATEGORICAL, ("0", "1")) for v in self.variables)


AnyModel = DecisionTreeModel | RandomForestModel | NaiveBayesModel | TruthTable


def model_kind(model: AnyModel) -> str:
    if isinstance(model, DecisionTreeModel):
        return "decision_tree"
    if isinstance(model, RandomForestModel):
        return "random_forest"
    if isinstance(model, NaiveBayesModel):
        return "naive_bayes"
    if isinstance(model, TruthTable):
        return "truth_table"
    raise InvalidModel(f"unsupported model type {type(model).__name__}")


# ---------------------------------------------------------------------------
# validation


def _validate_features(features: tuple[Feature, ...]) -> dict[str, Feature]:
    by_name: dict[str, Feature] = {}
    for f in features:
        if f.name in by_name:
            raise InvalidModel(f"duplicate feature name {f.name!r}")
        if f.kind not in (CONTINUOUS, CATEGORICAL):
            raise InvalidModel(f"feature {f.name!r}: unknown kind {f.kind!r}")
        if f.kind == CATEGORICAL:
            if len(f.categories) < 2:
                raise InvalidModel(f"feature {f.name!r}: needs >= 2 categories")
            if len(set(f.categories)) != len(f.categories):
                raise InvalidModel(f"feature {f.name!r}: duplicate categories")
        elif f.categories:
            raise InvalidModel(f"feature {f.name!r}: continuous feature has categories")
        by_name[f.name] = f
    return by_name


def _validate_predicate(pred: Predicate, by_name: dict[str, Feature]) -> None:
    feat = by_name.get(pred.feature)
    if feat is None:
        raise UnknownFeature(f"predicate references undeclared feature {pred.feature!r}")
    if pred.op == "le":
        if feat.kind != CONTINUOUS:
            raise InvalidModel(f"threshold test on categorical feature {feat.name!r}")
        if pred.threshold is None or not math.isfinite(pred.threshold):
            raise InvalidModel(f"non-finite threshold on feature {feat.name!r}")
    elif pred.op == "eq":
        if feat.kind != CATEGORICAL:
            raise InvalidModel(f"equality test on continuous feature {feat.name!r}")
        if pred.category not in feat.categories:
            raise UnknownFeature(
                f"category {pred.category!r} not declared for feature {feat.name!r}"
            )
    else:
        raise InvalidModel(f"unknown predicate op {pred.op!r}")


def _validate_tree(tree: DecisionTreeModel) -> None:
    by_name = _validate_features(tree.features)
    if tree.root.is_leaf:
        raise ConstantClassifier("tree is a bare leaf; constant classifiers have no decision polynomial")
    stack = [tree.root]
    while stack:
        node = stack.pop()
        if node.is_leaf:
            if node.leaf_class not in (0, 1):
                raise InvalidModel(f"leaf class must be 0 or 1, got {node.leaf_class!r}")
            continue
        if node.predicate is None or node.true_child is None or node.false_child is None:
            raise InvalidModel("internal node must carry a predicate and two children")
        _validate_predicate(node.predicate, by_name)
        stack.append(node.true_child)
        stack.append(node.false_child)


def validate_model(model: AnyModel, *, feature_cap: int = DEFAULT_FEATURE_CAP) -> AnyModel:
    """Check every structural invariant; return the model unchanged on success."""
    if isinstance(model, DecisionTreeModel):
        _validate_tree(model)
    elif isinstance(model, RandomForestModel):
        if not model.trees:
            raise InvalidModel("forest needs at least one tree")
        _validate_features(model.features)
        for t in model.trees:
            if t.features != model.features:
                raise InvalidModel("all forest trees must share the forest's feature declarations")
            _validate_tree(t)
    elif isinstance(model, NaiveBayesModel):
        by_name = _validate_features(model.features)
        if len(model.features) > feature_cap:
            raise EnumerationCapExceeded(
                f"{len(model.features)} features exceed the enumeration cap of {feature_cap}"
            )
        if any(f.kind != CATEGORICAL for f in model.features):
            raise InvalidModel("naive Bayes features must all be categorical")
        _check_distribution(model.class_prior, "class prior")
        for f in model.features:
            table = model.cpt.get(f.name)
            if table is None:
                raise BadDistribution(f"missing conditional table for feature {f.name!r}")
            if set(table) != set(f.categories):
                raise BadDistribution(f"conditional table for {f.name!r} must cover its categories")
            for cls in (0, 1):
                _check_distribution([table[c][cls] for c in f.categories], f"P({f.name}|class {cls})")
        _ = by_name
    elif isinstance(model, TruthTable):
        if not model.variables:
            raise InvalidModel("truth table needs at least one variable")
        if len(set(model.variables)) != len(model.variables):
            raise InvalidModel("duplicate truth-table variable names")
        if len(model.variables) > feature_cap:
            raise EnumerationCapExceeded(
                f"{len(model.variables)} variables exceed the enumeration cap of {feature_cap}"
            )
        if len(model.classes) != 1 << len(model.variables):
            raise InvalidModel("truth table must enumerate every joint assignment")
        if any(c not in (0, 1) for c in model.classes):
            raise InvalidModel("truth-table classes must be 0 or 1")
    else:
        raise InvalidModel(f"unsupported model type {type(model).__name__}")
    return model


def _check_distribution(probs, what: str) -> None:
    if any(p < 0 for p in probs):
        raise BadDistribution(f"{what}: negative probability")
    if abs(sum(probs) - 1.0) > 1e-9:
        raise BadDistribution(f"{what}: probabilities sum to {sum(probs)!r}, not 1")


def validate_instance(model: AnyModel, instance: Instance) -> Instance:
    """Check that ``instance`` assigns a legal value to exactly the model's features."""
    feats = model.features
    names = {f.name for f in feats}
    if set(instance) != names:
        missing = names - set(instance)
        extra = set(instance) - names
        raise BadInstance(f"instance keys mismatch (missing={sorted(missing)}, extra={sorted(extra)})")
    for f in feats:
        v = instance[f.name]
        if f.kind == CONTINUOUS:
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise BadInstance(f"feature {f.name!r}: expected a finite number, got {v!r}")
        else:
            if v not in f.categories:
                raise BadInstance(f"feature {f.name!r}: {v!r} is not a declared category")
    return instance


# ---------------------------------------------------------------------------
# evaluation


def evaluate(model: AnyModel, instance: Instance) -> int:
    """Classify ``instance``; the caller is responsible for prior validation."""
    if isinstance(model, DecisionTreeModel):
        return _eval_tree(model.root, instance)
    if isinstance(model, RandomForestModel):
        votes_for_1 = sum(_eval_tree(t.root, instance) for t in model.trees)
        return 1 if 2 * votes_for_1 > len(model.trees) else 0
    if isinstance(model, NaiveBayesModel):
        return _eval_nbc(model, instance)
    if isinstance(model, TruthTable):
        idx = 0
        for bit, name in enumerate(model.variables):
            if instance[name] == "1":
                idx |= 1 << bit
        return model.classes[idx]
    raise InvalidModel(f"unsupported model type {type(model).__name__}")


def _eval_tree(node: TreeNode, instance: Instance) -> int:
    while not node.is_leaf:
        node = node.true_child if node.predicate.holds_for(instance[node.predicate.feature]) else node.false_child
    return node.leaf_class


def _eval_nbc(model: NaiveBayesModel, instance: Instance) -> int:
    score0 = _log(model.class_prior[0])
    score1 = _log(model.class_prior[1])
    for f in model.features:
        p0, p1 = model.cpt[f.name][instance[f.name]]
        score0 += _log(p0)
        score1 += _log(p1)
    return 1 if score1 > score0 else 0


def _log(p: float) -> float:
    return math.log(p) if p > 0 else float("-inf")


# ---------------------------------------------------------------------------
# path enumeration

PathLiteral = tuple[Predicate, bool]


def enumerate_paths(tree: DecisionTreeModel) -> list[tuple[list[PathLiteral], int]]:
    """All root-to-leaf paths as (literal list, leaf class), true-branch first."""
    out: list[tuple[list[PathLiteral], int]] = []

    def walk(node: TreeNode, prefix: list[PathLiteral]) -> None:
        if node.is_leaf:
            out.append((list(prefix), node.leaf_class))
            return
        prefix.append((node.predicate, True))
        walk(node.true_child, prefix)
        prefix[-1] = (node.predicate, False)
        walk(node.false_child, prefix)
        prefix.pop()

    walk(tree.root, [])
    return out
