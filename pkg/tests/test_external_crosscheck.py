"""Cross-check the exact solver against an independent MILP solver (HiGHS
via scipy), on real pipeline encodings.

scipy is test-only here: the library itself never depends on it.  HiGHS
works in floating point, so agreement is asserted on objective values
within a tight tolerance, not on tie-broken assignments.
"""

import random

import pytest

scipy_opt = pytest.importorskip("scipy.optimize")
np = pytest.importorskip("numpy")

from cfx.errors import Infeasible
from cfx.explainer import build_pipeline
from cfx.ilp_solver import solve
from cfx.selfcheck import random_instance, random_model


def milp_solve(problem):
    n = len(problem.variables)
    c = np.zeros(n)
    for v, coef in problem.objective.items():
        c[v] = float(coef)
    if problem.sense == "max":
        c = -c
    rows = []
    lbs = []
    ubs = []
    for con in problem.constraints:
        row = np.zeros(n)
        for v, coef in con.coeffs:
            row[v] = coef
        rows.append(row)
        if con.relation == "<=":
            lbs.append(-np.inf)
            ubs.append(con.rhs)
        elif con.relation == ">=":
            lbs.append(con.rhs)
            ubs.append(np.inf)
        else:
            lbs.append(con.rhs)
            ubs.append(con.rhs)
    lower = np.zeros(n)
    upper = np.ones(n)
    for v, val in problem.fixed.items():
        lower[v] = upper[v] = val
    result = scipy_opt.milp(
        c=c,
        constraints=scipy_opt.LinearConstraint(np.array(rows), np.array(lbs), np.array(ubs)),
        integrality=np.ones(n),
        bounds=scipy_opt.Bounds(lower, upper),
    )
    if result.status == 2:  # infeasible
        return None
    assert result.status == 0, f"HiGHS status {result.status}: {result.message}"
    value = float(result.fun) + float(problem.objective_constant)
    if problem.sense == "max":
        value = 2 * float(problem.objective_constant) - value
    return value


def test_worked_examples_agree_with_highs(two_feature_tree, tree_point, three_tree_forest, forest_point):
    for model, factual in ((two_feature_tree, tree_point), (three_tree_forest, forest_point)):
        pipeline = build_pipeline(model, factual)
        ours = solve(pipeline.problem)
        theirs = milp_solve(pipeline.problem)
        assert ours.status == "optimal"
        assert theirs == pytest.approx(float(ours.objective_value), abs=1e-6)


def test_random_pipelines_agree_with_highs():
    rng = random.Random(3141)
    checked = 0
    while checked < 40:
        kind = ("dt", "rf", "nbc")[checked % 3]
        model = random_model(rng, kind, max_registry_vars=22)
        factual = random_instance(rng, model.features)
        try:
            pipeline = build_pipeline(model, factual)
        except Infeasible:
            continue
        ours = solve(pipeline.problem)
        theirs = milp_solve(pipeline.problem)
        if ours.status == "infeasible":
            assert theirs is None
        else:
            assert theirs is not None
            assert theirs == pytest.approx(float(ours.objective_value), abs=1e-6), (
                f"trial {checked} ({kind})"
            )
        checked += 1


def test_maximization_problems_agree_with_highs():
    from cfx.explainer import build_pi_problem

    rng = random.Random(2718)
    for trial in range(20):
        kind = ("dt", "rf", "nbc")[trial % 3]
        model = random_model(rng, kind, max_registry_vars=20)
        factual = random_instance(rng, model.features)
        problem, _, _, _ = build_pi_problem(model, factual)
        ours = solve(problem)
        theirs = milp_solve(problem)
        assert ours.status == "optimal"  # the factual class is always reachable
        assert theirs == pytest.approx(float(ours.objective_value), abs=1e-6), (
            f"trial {trial} ({kind})"
        )
