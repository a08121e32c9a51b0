"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
report lines and timings.
"""

import statistics
import time
from random import Random

import pytest

from cfx._registry import IndicatorRegistry
from cfx.encoder import (
    Condition,
    build_registry,
    encode_consistency,
    encode_force_one,
    encode_force_zero,
    encode_forest,
    encoding_stats,
    new_problem,
)
from cfx.errors import Infeasible
from cfx.explainer import (
    counterfactual,
    diverse_counterfactual,
    prime_implicants,
    robustness,
    verify_region,
)
from cfx.models import (
    RandomForestModel,
    TruthTable,
    evaluate,
    validate_model,
)
from cfx.oracle import brute_counterfactual, brute_pi
from cfx.polynomial import (
    DecisionPolynomial,
    Term,
    check_prop2,
    dp_from_tree,
    dps_from_model,
    reduce_dp,
)
from cfx.selfcheck import random_features, random_instance, random_model, random_nbc, random_tree
from cfx.weights import uniform_weights

from conftest import le
from test_encoder import delta_extension_exists, eq_row, norm, row


def report(num: int, name: str, extra: str = "") -> None:
    suffix = f" ({extra})" if extra else ""
    print(f"\nACCEPTANCE {num:02d} {name}: PASS{suffix}")


# ---------------------------------------------------------------------------
# shared randomized suites


@pytest.fixture(scope="module")
def oracle_suite():
    """100 instances each of DT / RF(<=5 trees) / NBC(<=8 features), <=22 vars."""
    rng = Random(2024)
    records = []
    start = time.perf_counter()
    for t in range(300):
        kind = ("dt", "rf", "nbc")[t % 3]
        model = random_model(rng, kind, max_registry_vars=22)
        factual = random_instance(rng, model.features)
        registry = IndicatorRegistry.from_model(model)
        weights = uniform_weights(registry)
        target = 1 - evaluate(model, factual)
        try:
            result = counterfactual(model, factual, weights=weights)
        except Infeasible:
            result = None
        try:
            brute = brute_counterfactual(
                model, factual, weights, target,
                registry=registry, assert_cell_invariance=True,
            )
        except Infeasible:
            brute = None
        records.append(
            {"kind": kind, "model": model, "factual": factual, "registry": registry,
             "result": result, "brute": brute, "seed_index": t}
        )
    elapsed = time.perf_counter() - start
    return {"records": records, "elapsed": elapsed}


@pytest.fixture(scope="module")
def pi_suite():
    """50 random enumerable models with exact + verified prime implicants."""
    rng = Random(77)
    records = []
    for t in range(50):
        while True:
            n = rng.randint(2, 10)
            max_cats = 3 if n <= 6 else 2
            nbc = random_nbc(rng, n, max_categories=max_cats)
            total = 1
            for f in nbc.features:
                total *= len(f.categories)
            if total <= 1024:
                break
        factual = {f.name: rng.choice(f.categories) for f in nbc.features}
        result = prime_implicants(nbc, factual)
        brute = brute_pi(nbc, factual)
        records.append({"model": nbc, "factual": factual, "result": result, "brute": brute})
    return records


@pytest.fixture(scope="module")
def diversity_suite():
    """50 (model, factual, condition) triples with feasible constrained queries."""
    rng = Random(4242)
    records = []
    while len(records) < 50:
        kind = ("dt", "rf")[len(records) % 2]
        model = random_model(rng, kind, max_registry_vars=22)
        factual = random_instance(rng, model.features)
        feature = rng.choice(model.features)
        if feature.kind == "continuous":
            a = rng.uniform(-1, 9)
            condition = (
                Condition.greater(feature.name, round(a, 2))
                if rng.random() < 0.5
                else Condition.between(feature.name, round(a, 2), round(a + rng.uniform(1, 6), 2))
            )
        else:
            maker = Condition.equals if rng.random() < 0.5 else Condition.not_equals
            condition = maker(feature.name, rng.choice(feature.categories))
        try:
            base = counterfactual(model, factual)
            constrained = diverse_counterfactual(model, factual, conditions=[condition], k=1)[0]
        except Infeasible:
            continue
        records.append(
            {"model": model, "factual": factual, "condition": condition,
             "base": base, "constrained": constrained}
        )
    return records


# ---------------------------------------------------------------------------
# criteria


def test_01_two_feature_tree_golden(two_feature_tree):
    start = time.perf_counter()
    reg = build_registry(two_feature_tree)
    p1 = dp_from_tree(two_feature_tree, 1, reg)
    p0 = dp_from_tree(two_feature_tree, 0, reg)

    def terms(dp):
        return {frozenset((reg.var_label(i), pol) for i, pol in t.literals) for t in dp.terms}

    assert terms(p1) == {
        frozenset({("X1<=10", True), ("X2<=50", True)}),
        frozenset({("X1<=10", False), ("X2<=20", True)}),
    }
    assert terms(p0) == {
        frozenset({("X1<=10", True), ("X2<=50", False)}),
        frozenset({("X1<=10", False), ("X2<=20", False)}),
    }

    prob = new_problem(reg)
    cons, deltas = encode_force_one(prob, p0)
    d1, d2 = (d.id for d in deltas)
    i1, i2, i3 = (reg.id_of(le(f, t)) for f, t in (("X1", 10), ("X2", 20), ("X2", 50)))
    assert norm(cons) == sorted([
        row({i1: 1, i3: -1, d1: -2}, ">=", -1),
        row({i1: -1, i2: -1, d2: -2}, ">=", -2),
        eq_row({d1: 1, d2: 1}, 1),
    ])
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    report(1, "two-feature tree polynomials and force-one system", f"{elapsed * 1000:.0f} ms")


def test_02_three_tree_forest_golden(three_tree_forest):
    start = time.perf_counter()
    reg = build_registry(three_tree_forest)
    pairs = dps_from_model(three_tree_forest, reg)

    def terms(dp):
        return {frozenset((reg.var_label(i), pol) for i, pol in t.literals) for t in dp.terms}

    assert terms(pairs[0][1]) == {
        frozenset({("X2<=1", True), ("X3<=2", True)}),
        frozenset({("X2<=1", False), ("X3<=10", True)}),
    }
    assert terms(pairs[1][1]) == {frozenset({("X1<=5", True), ("X2<=2", True)})}
    assert terms(pairs[2][1]) == {
        frozenset({("X1<=3", True), ("X3<=5", True)}),
        frozenset({("X1<=3", False), ("X2<=6", False)}),
    }

    prob = new_problem(reg)
    enc = encode_forest(prob, [p1 for _, p1 in pairs], target_class=0, polarity=1)
    assert enc.majority.relation == "<=" and enc.majority.rhs == 1
    cons_rows = encode_consistency(prob)
    st = encoding_stats(prob)
    assert st.constraints_by_family["generation"] == 5
    assert st.constraints_by_family["cardinality"] == 1
    assert st.constraints_by_family["consistency"] == 9
    per_feature = {"X1": 0, "X2": 0, "X3": 0}
    for c in cons_rows:
        per_feature[c.label.split("_")[0]] += 1
    assert per_feature == {"X1": 1, "X2": 4, "X3": 4}
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    report(2, "three-tree forest polynomials and constraint counts", f"{elapsed * 1000:.0f} ms")


def test_03_term_merging_goldens():
    tt = TruthTable(("X1", "X2", "X3"), tuple(0 if (i & 1) and (i & 2) else 1 for i in range(8)))
    reg = IndicatorRegistry.from_model(tt)

    def label_terms(dp):
        return {frozenset((reg.var_label(i), pol) for i, pol in t.literals) for t in dp.terms}

    def dp_of(literal_sets):
        return DecisionPolynomial(0, tuple(Term(frozenset(s)) for s in literal_sets), reg)

    first = reduce_dp(dp_of([
        {(0, True), (1, True), (2, True)},
        {(0, True), (1, True), (2, False)},
    ]))
    assert label_terms(first) == {frozenset({("X1=1", True), ("X2=1", True)})}

    second = reduce_dp(dp_of([
        {(0, True), (1, True), (2, True)},
        {(0, True), (1, True), (2, False)},
        {(0, True), (1, False), (2, True)},
        {(0, True), (1, False), (2, False)},
    ]))
    assert label_terms(second) == {frozenset({("X1=1", True)})}
    report(3, "term-merging reductions produce X1*X2 and X1 exactly")


def test_04_complement_property_on_random_trees():
    rng = Random(515)
    done = 0
    while done < 200:
        feats = random_features(rng, rng.randint(1, 4))
        tree = random_tree(rng, feats, max_depth=5, grid=2)  # <= 3 thresholds/feature
        try:
            validate_model(tree)
        except Exception:
            continue
        reg = IndicatorRegistry.from_model(tree)
        p0 = dp_from_tree(tree, 0, reg)
        p1 = dp_from_tree(tree, 1, reg)
        assert check_prop2(p0, p1), f"complement property failed on tree {done}"
        done += 1
    report(4, "P0 + P1 = 1 on every consistent assignment for 200 random trees")


def test_05_oracle_equivalence(oracle_suite):
    records, elapsed = oracle_suite["records"], oracle_suite["elapsed"]
    assert len(records) == 300
    failures = []
    for rec in records:
        result, brute = rec["result"], rec["brute"]
        if (result is None) != (brute is None):
            failures.append(f"trial {rec['seed_index']}: feasibility mismatch")
            continue
        if result is None:
            continue
        if result.objective_value != brute.objective:
            failures.append(f"trial {rec['seed_index']}: objective mismatch")
            continue
        if result.indicator_assignment not in brute.argmin:
            failures.append(f"trial {rec['seed_index']}: assignment not optimal")
            continue
        if not verify_region(rec["model"], result, n_samples=100, seed=rec["seed_index"]):
            failures.append(f"trial {rec['seed_index']}: region sampling failed")
    assert not failures, failures[:5]
    assert elapsed < 60.0
    solved = sum(1 for r in records if r["result"] is not None)
    report(5, "ILP == brute force on 300 randomized queries",
           f"{solved} solved, {300 - solved} infeasible on both routes, {elapsed:.1f} s")


def test_06_single_tree_forest_equivalence():
    rng = Random(606)
    done = 0
    while done < 50:
        feats = random_features(rng, rng.randint(1, 3))
        tree = random_tree(rng, feats, max_depth=3, grid=4)
        try:
            validate_model(tree)
        except Exception:
            continue
        reg = IndicatorRegistry.from_model(tree)
        if reg.num_predicates == 0 or reg.count_consistent() > 200:
            continue
        forest = RandomForestModel((tree,), feats)
        pairs = dps_from_model(forest, reg)
        for target in (0, 1):
            for polarity in (0, 1):
                dp = pairs[0][polarity]
                fprob = new_problem(reg)
                dprob = new_problem(reg)
                try:
                    encode_forest(fprob, [dp], target, polarity)
                except Infeasible:
                    with pytest.raises(Infeasible):
                        if polarity == target:
                            encode_force_one(dprob, dp)
                        else:
                            encode_force_zero(dprob, dp)
                    continue
                if polarity == target:
                    encode_force_one(dprob, dp)
                else:
                    encode_force_zero(dprob, dp)
                encode_consistency(fprob)
                encode_consistency(dprob)
                for assignment in reg.iter_consistent():
                    assert delta_extension_exists(fprob, assignment) == delta_extension_exists(
                        dprob, assignment
                    ), f"tree {done}, target {target}, polarity {polarity}"
        done += 1
    report(6, "m=1 forest and direct tree encodings share identical indicator sets")


def test_07_robustness(two_feature_tree, tree_point, oracle_suite):
    rob = robustness(two_feature_tree, tree_point)
    assert rob.value == 1
    checked = 0
    for rec in oracle_suite["records"]:
        if rec["result"] is None:
            continue
        # suite weights are uniform, so its objective IS the min flip count
        assert rec["result"].objective_value == rec["brute"].objective
        assert rec["result"].objective_value.denominator == 1
        checked += 1
    # spot-check the robustness API end to end on a sample of the suite
    for rec in oracle_suite["records"][:30]:
        if rec["result"] is None:
            continue
        value = robustness(rec["model"], rec["factual"]).value
        assert value == int(rec["brute"].objective)
    report(7, "uniform-weight optimum equals brute-force minimum flips",
           f"{checked} randomized checks + fixture value 1")


def test_08_prime_implicants(pi_suite):
    unverified = 0
    skipped = 0
    for i, rec in enumerate(pi_suite):
        result, brute = rec["result"], rec["brute"]
        assert len(result.changed) == brute.max_changed, f"model {i}: changed-set size mismatch"
        assert int(result.objective_value) == brute.max_changed
        if result.verification_skipped:
            skipped += 1
        elif not result.verified:
            unverified += 1
            assert result.counterexample is not None
    assert skipped == 0
    report(8, "PI maximization equals brute force on 50 random models",
           f"{unverified} witnesses lacked the universal property (reported, not hidden)")


def test_09_no_empty_regions(oracle_suite, pi_suite, diversity_suite):
    checked = 0
    for rec in oracle_suite["records"]:
        if rec["result"] is None:
            continue
        reg = rec["registry"]
        assert reg.is_consistent(rec["result"].indicator_assignment)
        for cond in rec["result"].conditions:
            if cond.interval is not None:
                assert not cond.interval.is_empty()
            checked += 1
    for rec in pi_suite:
        reg = IndicatorRegistry.from_model(rec["model"])
        assert reg.is_consistent(rec["result"].indicator_assignment)
        checked += 1
    for rec in diversity_suite:
        for res in (rec["base"], rec["constrained"]):
            for cond in res.conditions:
                if cond.interval is not None:
                    assert not cond.interval.is_empty()
                checked += 1
    report(9, "every returned solution decodes to a nonempty region", f"{checked} regions")


def test_10_diversity_monotonicity(diversity_suite):
    for i, rec in enumerate(diversity_suite):
        base, constrained, cond = rec["base"], rec["constrained"], rec["condition"]
        assert constrained.objective_value >= base.objective_value, f"triple {i}"
        decoded = {c.feature: c for c in constrained.conditions}[cond.feature]
        if cond.op == "interval":
            region = decoded.interval
            assert region is not None
            assert not region.intersect(cond.interval).is_empty()
            assert (region.lo, region.hi, region.lo_open, region.hi_open) == (
                region.intersect(cond.interval).lo,
                region.intersect(cond.interval).hi,
                region.intersect(cond.interval).lo_open,
                region.intersect(cond.interval).hi_open,
            ), f"triple {i}: region not contained in the condition"
        elif cond.op == "eq":
            assert (decoded.category or decoded.factual_value) == cond.category
        else:
            assert (decoded.category or decoded.factual_value) != cond.category
        assert verify_region(rec["model"], constrained, n_samples=50, seed=i)
    report(10, "constrained objective >= unconstrained and conditions hold", "50 triples")


def test_11_desk_scale_performance():
    from cfx.selfcheck import random_forest

    times = []
    for seed in range(20):
        rng = Random(1000 + seed)
        feats = random_features(rng, 10)
        forest = random_forest(rng, feats, n_trees=20, max_depth=6, grid=9)
        factual = random_instance(rng, feats, grid=9)
        start = time.perf_counter()
        try:
            counterfactual(forest, factual)
        except Infeasible:
            pass
        times.append(time.perf_counter() - start)
    median = statistics.median(times)
    assert median < 2.0, f"median {median:.2f}s over 20 seeds"
    report(11, "20-tree depth-6 forest counterfactual",
           f"median {median * 1000:.0f} ms, max {max(times):.2f} s over 20 seeds")
