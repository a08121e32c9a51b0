"""Shared fixtures: the worked toy models used across the suite."""

from __future__ import annotations

import pytest

from cfx.models import (
    DecisionTreeModel,
    Feature,
    NaiveBayesModel,
    Predicate,
    RandomForestModel,
    TreeNode,
    TruthTable,
)

L = TreeNode.leaf
S = TreeNode.split


def le(feature: str, threshold: float) -> Predicate:
    return Predicate(feature, "le", threshold=float(threshold))


def eq(feature: str, category: str) -> Predicate:
    return Predicate(feature, "eq", category=category)


@pytest.fixture
def two_feature_tree() -> DecisionTreeModel:
    """X1<=10 ? (X2<=50 ? 1 : 0) : (X2<=20 ? 1 : 0)."""
    features = (Feature("X1", "continuous"), Feature("X2", "continuous"))
    root = S(
        le("X1", 10),
        S(le("X2", 50), L(1), L(0)),
        S(le("X2", 20), L(1), L(0)),
    )
    return DecisionTreeModel(root, features)


@pytest.fixture
def tree_point() -> dict:
    return {"X1": 5.0, "X2": 30.0}


@pytest.fixture
def three_tree_forest() -> RandomForestModel:
    """Three small trees over X1..X3 voting by majority."""
    features = tuple(Feature(n, "continuous") for n in ("X1", "X2", "X3"))
    t1 = DecisionTreeModel(S(le("X2", 1), S(le("X3", 2), L(1), L(0)), S(le("X3", 10), L(1), L(0))), features)
    t2 = DecisionTreeModel(S(le("X1", 5), S(le("X2", 2), L(1), L(0)), L(0)), features)
    t3 = DecisionTreeModel(S(le("X1", 3), S(le("X3", 5), L(1), L(0)), S(le("X2", 6), L(0), L(1))), features)
    return RandomForestModel((t1, t2, t3), features)


@pytest.fixture
def forest_point() -> dict:
    return {"X1": 3.0, "X2": 1.0, "X3": 2.0}


@pytest.fixture
def mixed_tree() -> DecisionTreeModel:
    """A tree splitting on a categorical feature and a threshold."""
    features = (
        Feature("race", "categorical", ("White", "Black")),
        Feature("age", "continuous"),
    )
    root = S(
        eq("race", "White"),
        S(le("age", 30), L(1), L(0)),
        S(le("age", 40), L(0), L(1)),
    )
    return DecisionTreeModel(root, features)


def make_ballot_nbc(n_votes: int = 8, informative=(0, 1, 2)) -> NaiveBayesModel:
    """Vote-style naive Bayes: a few informative binary features, rest noise."""
    features = tuple(Feature(f"vote{i + 1}", "categorical", ("-", "+")) for i in range(n_votes))
    cpt = {}
    for i, f in enumerate(features):
        if i in informative:
            cpt[f.name] = {"-": (0.8, 0.15), "+": (0.2, 0.85)}
        else:
            cpt[f.name] = {"-": (0.5, 0.5), "+": (0.5, 0.5)}
    return NaiveBayesModel(features, (0.5, 0.5), cpt)


@pytest.fixture
def ballot_nbc() -> NaiveBayesModel:
    return make_ballot_nbc()


@pytest.fixture
def ballot_point(ballot_nbc) -> dict:
    return {f.name: "+" for f in ballot_nbc.features}


@pytest.fixture
def xor_table() -> TruthTable:
    return TruthTable(("X1", "X2"), (0, 1, 1, 0))


def assignment_of(registry, **by_label):
    """Dense assignment tuple from {label: value} pairs (must cover all)."""
    values = {}
    for pid in range(registry.num_predicates):
        values[pid] = by_label[registry.var_label(pid)]
    return tuple(values[i] for i in range(registry.num_predicates))
