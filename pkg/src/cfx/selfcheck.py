"""Seeded random models and solver-vs-oracle agreement trials.

Backs the ``cfx oracle-check`` command and the randomized acceptance
suites.  Everything is driven by an explicit ``random.Random`` so runs are
reproducible from a seed alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from random import Random

from ._registry import IndicatorRegistry
from .errors import Infeasible
from .explainer import counterfactual, verify_region
from .models import (
    CATEGORICAL,
    CONTINUOUS,
    DecisionTreeModel,
    Feature,
    Instance,
    NaiveBayesModel,
    Predicate,
    RandomForestModel,
    TreeNode,
    validate_model,
)
from .oracle import brute_counterfactual
from .weights import uniform_weights


def random_features(
    rng: Random,
    n_continuous: int,
    n_categorical: int = 0,
    max_categories: int = 3,
) -> tuple[Feature, ...]:
    feats = [Feature(f"X{i + 1}", CONTINUOUS) for i in range(n_continuous)]
    for i in range(n_categorical):
        k = rng.randint(2, max_categories)
        feats.append(Feature(f"C{i + 1}", CATEGORICAL, tuple(chr(ord("a") + j) for j in range(k))))
    return tuple(feats)


def random_tree(
    rng: Random,
    features: tuple[Feature, ...],
    max_depth: int = 3,
    grid: int = 8,
    leaf_prob: float = 0.3,
) -> DecisionTreeModel:
    """A random tree over integer-grid thresholds; the root is always a split."""

    def node(depth: int) -> TreeNode:
        if depth >= max_depth or (depth > 0 and rng.random() < leaf_prob):
            return TreeNode.leaf(rng.randint(0, 1))
        f = rng.choice(features)
        if f.kind == CONTINUOUS:
            pred = Predicate(f.name, "le", threshold=float(rng.randint(0, grid)))
        else:
            pred = Predicate(f.name, "eq", category=rng.choice(f.categories))
        return TreeNode.split(pred, node(depth + 1), node(depth + 1))

    return DecisionTreeModel(node(0), features)


def random_forest(
    rng: Random,
    features: tuple[Feature, ...],
    n_trees: int,
    max_depth: int = 3,
    grid: int = 8,
) -> RandomForestModel:
    trees = tuple(random_tree(rng, features, max_depth, grid) for _ in range(n_trees))
    return RandomForestModel(trees, features)


def random_nbc(rng: Random, n_features: int, max_categories: int = 2) -> NaiveBayesModel:
    features = []
    for i in range(n_features):
        k = rng.randint(2, max_categories)
        features.append(Feature(f"V{i + 1}", CATEGORICAL, tuple(chr(ord("a") + j) for j in range(k))))
    p1 = rng.uniform(0.2, 0.8)
    cpt = {}
    for f in features:
        table = {}
        raw0 = [rng.uniform(0.05, 1.0) for _ in f.categories]
        raw1 = [rng.uniform(0.05, 1.0) for _ in f.categories]
        s0, s1 = sum(raw0), sum(raw1)
        for cat, a, b in zip(f.categories, raw0, raw1):
            table[cat] = (a / s0, b / s1)
        cpt[f.name] = table
    return NaiveBayesModel(tuple(features), (1 - p1, p1), cpt)


def random_instance(rng: Random, features: tuple[Feature, ...], grid: int = 8) -> Instance:
    out: Instance = {}
    for f in features:
        if f.kind == CONTINUOUS:
            out[f.name] = round(rng.uniform(-1.0, grid + 1.0), 3)
        else:
            out[f.name] = rng.choice(f.categories)
    return out


def random_model(rng: Random, kind: str, *, max_registry_vars: int = 22):
    """Generate until the registry fits the requested variable budget."""
    while True:
        if kind == "dt":
            feats = random_features(rng, rng.randint(2, 4), rng.randint(0, 1))
            model = random_tree(rng, feats, max_depth=rng.randint(2, 4))
        elif kind == "rf":
            feats = random_features(rng, rng.randint(2, 3), rng.randint(0, 1))
            model = random_forest(rng, feats, n_trees=rng.randint(1, 5), max_depth=rng.randint(2, 3), grid=6)
        elif kind == "nbc":
            model = random_nbc(rng, rng.randint(2, 8), max_categories=3)
        else:
            raise ValueError(f"unknown model kind {kind!r}")
        try:
            validate_model(model)
        except Exception:
            continue
        registry = IndicatorRegistry.from_model(model)
        if 0 < registry.num_predicates <= max_registry_vars:
            return model


@dataclass
class TrialReport:
    trials: int = 0
    agreements: int = 0
    infeasible_agreements: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def run_oracle_trials(
    seed: int,
    trials: int,
    kinds=("dt", "rf", "nbc"),
    *,
    max_registry_vars: int = 22,
    verify_samples: int = 100,
) -> TrialReport:
    """Solve random counterfactual queries twice (ILP + brute force) and compare."""
    rng = Random(seed)
    report = TrialReport()
    for t in range(trials):
        kind = kinds[t % len(kinds)]
        model = random_model(rng, kind, max_registry_vars=max_registry_vars)
        factual = random_instance(rng, model.features)
        registry = IndicatorRegistry.from_model(model)
        weights = uniform_weights(registry)
        report.trials += 1
        ilp_failed = brute_failed = False
        result = brute = None
        try:
            result = counterfactual(model, factual, weights=weights)
        except Infeasible:
            ilp_failed = True
        try:
            brute = brute_counterfactual(
                model, factual, weights, 1 - _predict(model, factual),
                registry=registry, assert_cell_invariance=True,
            )
        except Infeasible:
            brute_failed = True
        tag = f"trial {t} ({kind}, seed {seed})"
        if ilp_failed != brute_failed:
            report.failures.append(f"{tag}: feasibility mismatch (ilp={not ilp_failed}, brute={not brute_failed})")
            continue
        if ilp_failed:
            report.infeasible_agreements += 1
            report.agreements += 1
            continue
        if result.objective_value != brute.objective:
            report.failures.append(
                f"{tag}: objective mismatch ilp={result.objective_value} brute={brute.objective}"
            )
            continue
        if result.indicator_assignment not in brute.argmin:
            report.failures.append(f"{tag}: ILP assignment is not among the brute-force optima")
            continue
        if not verify_region(model, result, n_samples=verify_samples, seed=seed + t):
            report.failures.append(f"{tag}: sampled region point not classified as target")
            continue
        report.agreements += 1
    return report


def _predict(model, instance):
    from .models import evaluate

    return evaluate(model, instance)
