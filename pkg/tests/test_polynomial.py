import random

import pytest

from cfx._registry import IndicatorRegistry
from cfx.errors import ConstantClassifier, InconsistentAssignment, InvalidPolynomial
from cfx.models import DecisionTreeModel, Feature, TruthTable, validate_model
from cfx.polynomial import (
    DecisionPolynomial,
    Term,
    check_prop2,
    dp_from_enumerable,
    dp_from_tree,
    enumerable_dps,
    eval_dp,
    reduce_dp,
)
from cfx.selfcheck import random_features, random_tree

from conftest import L, S, assignment_of, le


def term_set(dp):
    """Terms as frozensets of (label, polarity) for order-free comparison."""
    return {
        frozenset((dp.registry.var_label(pid), pol) for pid, pol in t.literals)
        for t in dp.terms
    }


class TestFromTree:
    def test_worked_tree_class1(self, two_feature_tree):
        dp = dp_from_tree(two_feature_tree, 1)
        assert term_set(dp) == {
            frozenset({("X1<=10", True), ("X2<=50", True)}),
            frozenset({("X1<=10", False), ("X2<=20", True)}),
        }

    def test_worked_tree_class0(self, two_feature_tree):
        dp = dp_from_tree(two_feature_tree, 0)
        assert term_set(dp) == {
            frozenset({("X1<=10", True), ("X2<=50", False)}),
            frozenset({("X1<=10", False), ("X2<=20", False)}),
        }

    def test_depth_one_single_term(self):
        tree = DecisionTreeModel(S(le("X", 5), L(1), L(0)), (Feature("X", "continuous"),))
        dp = dp_from_tree(tree, 1)
        assert term_set(dp) == {frozenset({("X<=5", True)})}

    def test_missing_class_gives_empty_polynomial(self):
        tree = DecisionTreeModel(S(le("X", 5), L(1), L(1)), (Feature("X", "continuous"),))
        dp = dp_from_tree(tree, 0)
        assert dp.is_empty
        for a in dp.registry.iter_consistent():
            assert eval_dp(dp, a) == 0

    def test_forest_tree_polynomials(self, three_tree_forest):
        reg = IndicatorRegistry.from_model(three_tree_forest)
        p1 = dp_from_tree(three_tree_forest.trees[1], 1, reg)
        assert term_set(p1) == {frozenset({("X1<=5", True), ("X2<=2", True)})}


class TestEnumerable:
    def test_truth_table_reduction_golden(self):
        # class 0 exactly when X1=1 and X2=1; X3 irrelevant
        tt = TruthTable(("X1", "X2", "X3"), tuple(0 if (i & 1) and (i & 2) else 1 for i in range(8)))
        dp = dp_from_enumerable(tt, 0)
        assert term_set(dp) == {frozenset({("X1=1", True), ("X2=1", True)})}

    def test_constant_zero_table(self):
        tt = TruthTable(("X1", "X2"), (0, 0, 0, 0))
        dp = dp_from_enumerable(tt, 1)
        assert dp.is_empty
        with pytest.raises(ConstantClassifier):
            dp_from_enumerable(tt, 0)

    def test_xor_is_irreducible(self, xor_table):
        dp = dp_from_enumerable(xor_table, 1)
        assert len(dp.terms) == 2
        assert term_set(dp) == {
            frozenset({("X1=1", True), ("X2=1", False)}),
            frozenset({("X1=1", False), ("X2=1", True)}),
        }

    def test_three_category_feature_uses_onehot_literals(self):
        from cfx.models import NaiveBayesModel

        nbc = NaiveBayesModel(
            (Feature("c", "categorical", ("a", "b", "z")),),
            (0.5, 0.5),
            {"c": {"a": (0.8, 0.1), "b": (0.1, 0.1), "z": (0.1, 0.8)}},
        )
        validate_model(nbc)
        p0, p1 = enumerable_dps(nbc)
        labels = {lbl for t in term_set(p1) for lbl, _ in t}
        assert labels <= {"c=a", "c=b", "c=z"}
        # every term of an enumerable one-hot DP is positive
        assert all(pol for t in term_set(p1) for _, pol in t)


def binary_registry(names):
    return IndicatorRegistry.from_model(TruthTable(tuple(names), tuple([0] * (1 << len(names)))))


def dp_over(registry, target, terms):
    mk = lambda lits: Term(frozenset(lits))
    return DecisionPolynomial(target, tuple(mk(t) for t in terms), registry)


class TestReduce:
    def test_pair_merge_golden(self):
        reg = binary_registry(("X1", "X2", "X3"))
        dp = dp_over(reg, 0, [
            {(0, True), (1, True), (2, True)},
            {(0, True), (1, True), (2, False)},
        ])
        red = reduce_dp(dp)
        assert term_set(red) == {frozenset({("X1=1", True), ("X2=1", True)})}

    def test_cascade_merge_golden(self):
        reg = binary_registry(("X1", "X2", "X3"))
        dp = dp_over(reg, 0, [
            {(0, True), (1, True), (2, True)},
            {(0, True), (1, True), (2, False)},
            {(0, True), (1, False), (2, True)},
            {(0, True), (1, False), (2, False)},
        ])
        red = reduce_dp(dp)
        assert term_set(red) == {frozenset({("X1=1", True)})}

    def test_fixpoint_no_change(self):
        reg = binary_registry(("X1", "X2"))
        dp = dp_over(reg, 0, [{(0, True), (1, True)}])
        assert term_set(reduce_dp(dp)) == term_set(dp)

    def test_reduction_preserves_semantics(self):
        rng = random.Random(3)
        for _ in range(30):
            n = rng.randint(2, 4)
            names = tuple(f"B{i}" for i in range(n))
            classes = tuple(rng.randint(0, 1) for _ in range(1 << n))
            if len(set(classes)) == 1:
                continue
            tt = TruthTable(names, classes)
            reg = IndicatorRegistry.from_model(tt)
            raw0, _ = enumerable_dps(tt, reg, reduce=False)
            red0 = reduce_dp(raw0)
            assert len(red0.terms) <= len(raw0.terms)
            for a in reg.iter_consistent():
                assert eval_dp(red0, a) == eval_dp(raw0, a)

    def test_reduction_preserves_semantics_with_onehot_groups(self):
        from cfx.selfcheck import random_nbc

        rng = random.Random(8)
        done = 0
        while done < 12:
            nbc = random_nbc(rng, rng.randint(2, 4), max_categories=3)
            reg = IndicatorRegistry.from_model(nbc)
            try:
                raw0, raw1 = enumerable_dps(nbc, reg, reduce=False, allow_constant_side=True)
            except Exception:
                continue
            for raw in (raw0, raw1):
                if raw is None:
                    continue
                red = reduce_dp(raw)
                assert len(red.terms) <= len(raw.terms)
                for a in reg.iter_consistent():
                    assert eval_dp(red, a, check_consistency=False) == eval_dp(
                        raw, a, check_consistency=False
                    )
            done += 1


class TestEval:
    def test_worked_values(self, two_feature_tree):
        reg = IndicatorRegistry.from_model(two_feature_tree)
        p1 = dp_from_tree(two_feature_tree, 1, reg)
        p0 = dp_from_tree(two_feature_tree, 0, reg)
        a = assignment_of(reg, **{"X1<=10": 1, "X2<=50": 1, "X2<=20": 0})
        assert eval_dp(p1, a) == 1
        assert eval_dp(p0, a) == 0

    def test_inconsistent_assignment_rejected(self, two_feature_tree):
        reg = IndicatorRegistry.from_model(two_feature_tree)
        p1 = dp_from_tree(two_feature_tree, 1, reg)
        bad = assignment_of(reg, **{"X1<=10": 1, "X2<=50": 0, "X2<=20": 1})
        with pytest.raises(InconsistentAssignment):
            eval_dp(p1, bad)

    def test_terms_mutually_exclusive_for_trees(self, two_feature_tree):
        reg = IndicatorRegistry.from_model(two_feature_tree)
        for target in (0, 1):
            dp = dp_from_tree(two_feature_tree, target, reg)
            for a in reg.iter_consistent():
                assert sum(t.evaluate(a) for t in dp.terms) <= 1

    def test_duplicate_terms_rejected(self):
        reg = binary_registry(("X1",))
        with pytest.raises(InvalidPolynomial):
            dp_over(reg, 0, [{(0, True)}, {(0, True)}])

    def test_constant_term_rejected(self):
        with pytest.raises(InvalidPolynomial):
            Term(frozenset())


class TestProp2:
    def test_worked_pair(self, two_feature_tree):
        reg = IndicatorRegistry.from_model(two_feature_tree)
        p0 = dp_from_tree(two_feature_tree, 0, reg)
        p1 = dp_from_tree(two_feature_tree, 1, reg)
        assert check_prop2(p0, p1)

    def test_same_polynomial_fails(self, two_feature_tree):
        reg = IndicatorRegistry.from_model(two_feature_tree)
        p1 = dp_from_tree(two_feature_tree, 1, reg)
        assert not check_prop2(p1, p1)

    def test_random_trees_hold(self):
        rng = random.Random(17)
        done = 0
        while done < 30:
            feats = random_features(rng, rng.randint(1, 4))
            tree = random_tree(rng, feats, max_depth=5, grid=3)
            try:
                validate_model(tree)
            except ConstantClassifier:
                continue
            reg = IndicatorRegistry.from_model(tree)
            assert check_prop2(dp_from_tree(tree, 0, reg), dp_from_tree(tree, 1, reg))
            done += 1
