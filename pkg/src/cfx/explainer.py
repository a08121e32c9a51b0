"""Explanation pipelines: counterfactual sets, diversity, robustness and
(conditional) prime implicants.

Every product follows the same route: build the registry, pick the cheaper
decision-polynomial family, emit generation + consistency + one-hot
constraints, attach the weighted l1 objective, apply user conditions, solve
exactly, and decode the indicator assignment back into per-feature regions.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from random import Random

from ._intervals import INF, Interval
from ._registry import AtomGroup, ContinuousAxis, IndicatorRegistry
from .encoder import (
    FEATURE_CHANGE,
    IlpProblem,
    apply_conditions,
    build_objective,
    build_registry,
    choose_polarity,
    encode_consistency,
    encode_force_one,
    encode_force_zero,
    encode_forest,
    encode_onehot,
    encoding_stats,
    new_problem,
)
from .errors import (
    CapExceeded,
    Infeasible,
    InconsistentAssignment,
    TargetIsPrediction,
)
from .ilp_solver import SolverConfig, Solution, enumerate_topk, require_optimal, solve
from .models import (
    AnyModel,
    CATEGORICAL,
    CONTINUOUS,
    Instance,
    RandomForestModel,
    evaluate,
    validate_instance,
    validate_model,
)
from .oracle import check_universal_pi
from .polynomial import dps_from_model
from .weights import WeightVector, uniform_weights


@dataclass(frozen=True)
class FeatureCondition:
    """Decoded per-feature region: an interval, a category, or unchanged."""

    feature: str
    kind: str  # "interval" | "category" | "unchanged"
    changed: bool
    factual_value: object
    interval: Interval | None = None
    category: str | None = None

    def describe(self) -> str:
        if self.kind == "unchanged":
            return f"{self.feature} unchanged ({self.factual_value!r})"
        if self.kind == "category":
            return f"{self.feature} = {self.category}"
        return f"{self.feature} in {self.interval}"


@dataclass
class CounterfactualSet:
    """An infinite family of counterfactuals decoded from one ILP solution."""

    target_class: int
    conditions: list[FeatureCondition]
    objective_value: Fraction
    indicator_assignment: tuple
    solver_info: dict = field(default_factory=dict)

    @property
    def changed_features(self) -> list[str]:
        return [c.feature for c in self.conditions if c.changed]


@dataclass
class RobustnessResult:
    value: int
    witness: CounterfactualSet


@dataclass
class PrimeImplicantResult:
    implicants: tuple  # features whose values are kept (Z)
    changed: tuple
    verified: bool
    verification_skipped: bool
    counterexample: Instance | None
    objective_value: Fraction
    indicator_assignment: tuple
    solver_info: dict = field(default_factory=dict)


@dataclass
class Pipeline:
    """A fully encoded problem plus everything needed to decode solutions."""

    model: AnyModel
    registry: IndicatorRegistry
    problem: IlpProblem
    factual: Instance
    target_class: int
    polarity: int
    conditions: tuple
    weights: WeightVector


def build_pipeline(
    model: AnyModel,
    factual: Instance,
    weights: WeightVector | None = None,
    target: int | str = "auto",
    conditions=(),
    *,
    polarity: int | None = None,
    validate: bool = True,
) -> Pipeline:
    """Encode a counterfactual query end to end (without solving it)."""
    if validate:
        validate_model(model)
        validate_instance(model, factual)
    prediction = evaluate(model, factual)
    if target == "auto":
        target_class = 1 - prediction
    else:
        target_class = int(target)
        if target_class == prediction:
            raise TargetIsPrediction(
                f"factual is already classified as {prediction}; no counterfactual target"
            )
    registry = build_registry(model)
    if weights is None:
        weights = uniform_weights(registry)
    problem = new_problem(registry)
    dps = dps_from_model(model, registry)
    if isinstance(model, RandomForestModel):
        pol = choose_polarity(dps, polarity)
        encode_forest(problem, [pair[pol] for pair in dps], target_class, pol)
    else:
        pol = choose_polarity(dps, polarity)
        dp = dps[pol]
        if pol == target_class:
            encode_force_one(problem, dp)
        else:
            encode_force_zero(problem, dp)
    encode_consistency(problem)
    encode_onehot(problem)
    build_objective(problem, factual, weights)
    conditions = tuple(conditions)
    if conditions:
        problem = apply_conditions(problem, conditions)
    return Pipeline(model, registry, problem, factual, target_class, pol, conditions, weights)


# ---------------------------------------------------------------------------
# decoding


def decode_solution(registry: IndicatorRegistry, factual: Instance, assignment) -> list[FeatureCondition]:
    """Per-feature conditions selected by a consistent indicator assignment."""
    out = []
    for feature in registry.features:
        axis = registry.axes.get(feature.name)
        fv = factual[feature.name]
        if axis is None:
            out.append(FeatureCondition(feature.name, "unchanged", False, fv))
        elif isinstance(axis, ContinuousAxis):
            iv = axis.cell_interval(axis.cell_of_assignment(assignment))
            if iv.contains(fv):
                out.append(FeatureCondition(feature.name, "unchanged", False, fv, interval=iv))
            else:
                out.append(FeatureCondition(feature.name, "interval", True, fv, interval=iv))
        else:
            cat = axis.category_of_assignment(assignment)
            changed = cat != fv
            kind = "category" if changed else "unchanged"
            out.append(FeatureCondition(feature.name, kind, changed, fv, category=cat))
    return out


def _decode_with_conditions(
    registry: IndicatorRegistry, factual: Instance, assignment, conditions
) -> list[FeatureCondition]:
    base = {c.feature: c for c in decode_solution(registry, factual, assignment)}
    for cond in conditions:
        cur = base[cond.feature]
        feature = registry.feature_by_name[cond.feature]
        if feature.kind == CONTINUOUS:
            want = cond.interval if cond.op == "interval" else Interval(
                float(cond.category), float(cond.category), False, False
            )
            region = cur.interval.intersect(want) if cur.interval is not None else want
            if region.is_empty():
                raise InconsistentAssignment(
                    f"solution region for {cond.feature!r} does not meet condition {cond}"
                )
            changed = not region.contains(cur.factual_value)
            base[cond.feature] = FeatureCondition(
                cond.feature,
                "unchanged" if not changed else "interval",
                changed,
                cur.factual_value,
                interval=region,
            )
        else:
            category = cur.category
            if category is None:  # feature the model never tests
                if cond.op == "eq":
                    category = cond.category
                elif cur.factual_value != cond.category:
                    category = cur.factual_value
                else:
                    category = next(c for c in feature.categories if c != cond.category)
            if cond.op == "eq" and category != cond.category:
                raise InconsistentAssignment(
                    f"solution region for {cond.feature!r} does not meet condition {cond}"
                )
            if cond.op == "ne" and category == cond.category:
                raise InconsistentAssignment(
                    f"solution region for {cond.feature!r} does not meet condition {cond}"
                )
            changed = category != cur.factual_value
            base[cond.feature] = FeatureCondition(
                cond.feature,
                "category" if changed else "unchanged",
                changed,
                cur.factual_value,
                category=category,
            )
    return [base[f.name] for f in registry.features]


def _result_from_solution(pipeline: Pipeline, solution: Solution) -> CounterfactualSet:
    assignment = tuple(
        solution.assignment[v] for v in range(pipeline.registry.num_predicates)
    )
    conditions = _decode_with_conditions(
        pipeline.registry, pipeline.factual, assignment, pipeline.conditions
    )
    stats = encoding_stats(pipeline.problem)
    return CounterfactualSet(
        target_class=pipeline.target_class,
        conditions=conditions,
        objective_value=solution.objective_value,
        indicator_assignment=assignment,
        solver_info={
            "status": solution.status,
            "nodes": solution.nodes,
            "polarity": pipeline.polarity,
            "variables": stats.n_variables,
            "constraints": stats.n_constraints,
            "families": dict(stats.constraints_by_family),
        },
    )


# ---------------------------------------------------------------------------
# products


def counterfactual(
    model: AnyModel,
    factual: Instance,
    weights: WeightVector | None = None,
    target: int | str = "auto",
    conditions=(),
    *,
    config: SolverConfig | None = None,
    polarity: int | None = None,
) -> CounterfactualSet:
    """Minimum-cost region whose every point the model classifies as target."""
    pipeline = build_pipeline(model, factual, weights, target, conditions, polarity=polarity)
    solution = require_optimal(solve(pipeline.problem, config))
    return _result_from_solution(pipeline, solution)


def diverse_counterfactual(
    model: AnyModel,
    factual: Instance,
    weights: WeightVector | None = None,
    conditions=(),
    k: int = 1,
    target: int | str = "auto",
    *,
    config: SolverConfig | None = None,
    polarity: int | None = None,
) -> list[CounterfactualSet]:
    """Top-k distinct counterfactual regions under the given conditions."""
    pipeline = build_pipeline(model, factual, weights, target, conditions, polarity=polarity)
    solutions, status = enumerate_topk(pipeline.problem, k, config)
    if not solutions:
        if status == "cap_exceeded":
            raise CapExceeded("solver budget exhausted before the first solution")
        raise Infeasible("no region satisfies the conditions and the target class")
    return [_result_from_solution(pipeline, s) for s in solutions]


def robustness(model: AnyModel, factual: Instance, *, config: SolverConfig | None = None) -> RobustnessResult:
    """Smallest number of indicator changes that flips the model's decision."""
    witness = counterfactual(model, factual, weights=None, target="auto", config=config)
    value = witness.objective_value
    assert value.denominator == 1
    return RobustnessResult(int(value), witness)


def build_pi_problem(
    model: AnyModel,
    factual: Instance,
    keep=(),
    *,
    polarity: int | None = None,
    validate: bool = True,
):
    """Encode the prime-implicant maximization (without solving it).

    Constraints force the factual's own class; the objective counts
    changeable features, using an auxiliary change flag for features that
    carry several indicator variables.  Returns (problem, registry,
    prediction, polarity).
    """
    if validate:
        validate_model(model)
        validate_instance(model, factual)
    prediction = evaluate(model, factual)
    registry = build_registry(model)
    problem = new_problem(registry, sense="max")
    dps = dps_from_model(model, registry)
    kept_set = set(keep)
    if isinstance(model, RandomForestModel):
        pol = choose_polarity(dps, polarity)
        encode_forest(problem, [pair[pol] for pair in dps], prediction, pol)
    else:
        pol = choose_polarity(dps, polarity)
        dp = dps[pol]
        if pol == prediction:
            encode_force_one(problem, dp)
        else:
            encode_force_zero(problem, dp)
    encode_consistency(problem)
    encode_onehot(problem)

    factual_vec = registry.factual_vector(factual)
    objective: dict[int, Fraction] = {}
    constant = Fraction(0)
    for feature in registry.features:
        axis = registry.axes.get(feature.name)
        if axis is None:
            if feature.name not in kept_set:
                constant += 1  # untested features can always change
            continue
        var_ids = (axis.var_id,) if isinstance(axis, AtomGroup) else axis.var_ids
        for v in var_ids:
            problem.preferred[v] = factual_vec[v]
        if feature.name in kept_set:
            for v in var_ids:
                problem.fix(v, factual_vec[v])
            continue
        if len(var_ids) == 1:
            v = var_ids[0]
            if factual_vec[v] == 1:
                constant += 1
                objective[v] = objective.get(v, Fraction(0)) - 1
            else:
                objective[v] = objective.get(v, Fraction(0)) + 1
        else:
            aux = problem.add_variable(FEATURE_CHANGE, f"chg_{feature.name}", feature=feature.name)
            coeffs: dict[int, int] = {}
            rhs = 0
            for v in var_ids:
                if factual_vec[v] == 1:
                    coeffs[v] = -1
                    rhs -= 1
                else:
                    coeffs[v] = 1
            coeffs[aux.id] = -1
            problem.add_constraint(coeffs, ">=", rhs, "pi_link", f"chg_{feature.name}")
            objective[aux.id] = Fraction(1)
    problem.objective = objective
    problem.objective_constant = constant
    return problem, registry, prediction, pol


def prime_implicants(
    model: AnyModel,
    factual: Instance,
    keep=(),
    *,
    config: SolverConfig | None = None,
    polarity: int | None = None,
    verification_cap: int = 10**6,
) -> PrimeImplicantResult:
    """Features whose factual values suffice to preserve the prediction.

    Maximizes the number of features that may change while the class stays
    fixed; the unchanged complement Z is the prime-implicant set.  The
    universal property of Z is then checked by exhaustive enumeration (or
    skipped with a warning above the cap).
    """
    keep = tuple(keep)
    kept_set = set(keep)
    problem, registry, prediction, pol = build_pi_problem(
        model, factual, keep, polarity=polarity
    )
    solution = require_optimal(solve(problem, config))
    assignment = tuple(solution.assignment[v] for v in range(registry.num_predicates))
    decoded = decode_solution(registry, factual, assignment)
    changed = {c.feature for c in decoded if c.changed}
    changed |= {
        f.name for f in registry.features if f.name not in registry.axes and f.name not in kept_set
    }
    implicants = tuple(f.name for f in registry.features if f.name not in changed)
    changed_t = tuple(f.name for f in registry.features if f.name in changed)

    verified = False
    skipped = False
    counterexample = None
    try:
        verified, counterexample = check_universal_pi(
            model, factual, implicants, registry=registry, cap=verification_cap
        )
    except CapExceeded as exc:
        skipped = True
        warnings.warn(f"prime-implicant verification skipped: {exc}", stacklevel=2)

    stats = encoding_stats(problem)
    return PrimeImplicantResult(
        implicants=implicants,
        changed=changed_t,
        verified=verified,
        verification_skipped=skipped,
        counterexample=counterexample,
        objective_value=solution.objective_value,
        indicator_assignment=assignment,
        solver_info={
            "status": solution.status,
            "nodes": solution.nodes,
            "polarity": pol,
            "variables": stats.n_variables,
            "constraints": stats.n_constraints,
            "families": dict(stats.constraints_by_family),
        },
    )


# ---------------------------------------------------------------------------
# region sampling


def sample_region(
    conditions: list[FeatureCondition],
    features,
    rng: Random,
    *,
    window: float = 10.0,
) -> Instance:
    """One concrete instance inside a decoded region."""
    out: Instance = {}
    by_name = {f.name: f for f in features}
    for cond in conditions:
        feature = by_name[cond.feature]
        if feature.kind == CATEGORICAL:
            if cond.category is not None:
                out[cond.feature] = cond.category
            else:
                out[cond.feature] = cond.factual_value
            continue
        iv = cond.interval
        if iv is None:
            iv = Interval(cond.factual_value - window / 2, cond.factual_value + window / 2, False, False)
        lo, hi = iv.lo, iv.hi
        if lo == -INF and hi == INF:
            lo, hi = cond.factual_value - window / 2, cond.factual_value + window / 2
        elif lo == -INF:
            lo = hi - window
        elif hi == INF:
            hi = lo + window
        x = hi - rng.random() * (hi - lo)
        if x == lo and iv.lo_open:
            x = (lo + hi) / 2
        out[cond.feature] = x
    return out


def verify_region(
    model: AnyModel,
    result: CounterfactualSet,
    *,
    n_samples: int = 100,
    seed: int = 0,
) -> bool:
    """Sample the region and confirm every point gets the target class."""
    rng = Random(seed)
    for _ in range(n_samples):
        point = sample_region(result.conditions, model.features, rng)
        if evaluate(model, point) != result.target_class:
            return False
    return True
