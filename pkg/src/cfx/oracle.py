"""Brute-force ground truth for counterfactuals, robustness and prime
implicants on desk-scale instances.

The oracle shares the indicator registry with the encoder but none of the
encoding machinery: it enumerates the consistent-assignment space cell by
cell, evaluates the model at representative points, and scores candidates
with the exact rational objective.  Acceptance tests compare its optima
against the ILP pipeline's.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._intervals import INF, Interval
from ._registry import ContinuousAxis, IndicatorRegistry, OnehotGroup
from .errors import CapExceeded, Infeasible
from .models import AnyModel, Instance, evaluate

DEFAULT_SPACE_CAP = 10**6
DEFAULT_FLIP_FEATURE_CAP = 20


def enumerate_consistent(registry: IndicatorRegistry, cap: int = DEFAULT_SPACE_CAP):
    """Every consistent indicator assignment exactly once, fixed order."""
    return registry.iter_consistent(cap=cap)


def representative_instance(registry: IndicatorRegistry, assignment, *, edge: bool = False) -> Instance:
    """A concrete point inside the region an assignment decodes to.

    Bounded cells use the midpoint (or the upper endpoint when ``edge``);
    unbounded cells sit 1.0 inside the finite bound.  Features the model
    never tests default to 0 / their first category.
    """
    out: Instance = {}
    for feature in registry.features:
        axis = registry.axes.get(feature.name)
        if axis is None:
            out[feature.name] = 0.0 if feature.kind == "continuous" else feature.categories[0]
        elif isinstance(axis, ContinuousAxis):
            cell = axis.cell_of_assignment(assignment)
            iv = axis.cell_interval(cell)
            if iv.lo == -INF:
                out[feature.name] = iv.hi - 1.0
            elif iv.hi == INF:
                out[feature.name] = iv.lo + 1.0
            elif edge:
                out[feature.name] = iv.hi
            else:
                out[feature.name] = (iv.lo + iv.hi) / 2.0
        else:
            out[feature.name] = axis.category_of_assignment(assignment)
    return out


def _region_satisfies(registry: IndicatorRegistry, assignment, condition) -> bool:
    """Interval/equality check done geometrically, independent of the encoder."""
    axis = registry.axes.get(condition.feature)
    feature = registry.feature_by_name[condition.feature]
    if feature.kind == "continuous":
        iv = condition.interval if condition.op == "interval" else Interval(
            float(condition.category), float(condition.category), False, False
        )
        if axis is None:
            return True  # untested feature: any point of the condition works
        cell = axis.cell_interval(axis.cell_of_assignment(assignment))
        return not cell.intersect(iv).is_empty()
    if axis is None:
        return True
    cat = axis.category_of_assignment(assignment)
    return (cat == condition.category) if condition.op == "eq" else (cat != condition.category)


def _changed_features(registry: IndicatorRegistry, factual: Instance, assignment) -> set[str]:
    changed = set()
    for name, axis in registry.axes.items():
        if isinstance(axis, ContinuousAxis):
            if axis.cell_of_assignment(assignment) != axis.cell_of_value(factual[name]):
                changed.add(name)
        else:
            if axis.category_of_assignment(assignment) != factual[name]:
                changed.add(name)
    return changed


@dataclass
class BruteResult:
    objective: Fraction
    argmin: list[tuple]  # all optimal assignments, enumeration order
    evaluated: int


def brute_counterfactual(
    model: AnyModel,
    factual: Instance,
    weights,
    target: int,
    conditions=(),
    *,
    registry: IndicatorRegistry | None = None,
    cap: int = DEFAULT_SPACE_CAP,
    assert_cell_invariance: bool = False,
) -> BruteResult:
    """Exhaustive optimum of the weighted l1 objective over target-class cells."""
    registry = registry or IndicatorRegistry.from_model(model)
    factual_vec = registry.factual_vector(factual)
    best: Fraction | None = None
    argmin: list[tuple] = []
    seen = 0
    for assignment in registry.iter_consistent(cap=cap):
        seen += 1
        if conditions and not all(_region_satisfies(registry, assignment, c) for c in conditions):
            continue
        point = representative_instance(registry, assignment)
        if evaluate(model, point) != target:
            continue
        if assert_cell_invariance:
            other = representative_instance(registry, assignment, edge=True)
            if evaluate(model, other) != target:
                raise AssertionError("model class varies within one cell; registry is incomplete")
        cost = Fraction(0)
        for pid, fv in enumerate(factual_vec):
            if assignment[pid] != fv:
                cost += weights[pid]
        if best is None or cost < best:
            best = cost
            argmin = [assignment]
        elif cost == best:
            argmin.append(assignment)
    if best is None:
        raise Infeasible(f"no consistent region is classified as {target} under the conditions")
    return BruteResult(best, argmin, seen)


@dataclass
class BrutePiResult:
    max_changed: int
    witnesses: list[tuple]
    kept_sets: list[frozenset]  # complements of the witnesses' changed sets


def brute_pi(
    model: AnyModel,
    factual: Instance,
    keep=(),
    *,
    registry: IndicatorRegistry | None = None,
    cap: int = DEFAULT_SPACE_CAP,
) -> BrutePiResult:
    """Largest set of features that can change while the class is preserved."""
    registry = registry or IndicatorRegistry.from_model(model)
    keep = set(keep)
    all_names = {f.name for f in registry.features}
    free_untested = {f.name for f in registry.features if f.name not in registry.axes} - keep
    factual_class = evaluate(model, factual)
    factual_cells = {
        name: (axis.cell_of_value(factual[name]) if isinstance(axis, ContinuousAxis) else factual[name])
        for name, axis in registry.axes.items()
    }
    best = -1
    witnesses: list[tuple] = []
    kept_sets: list[frozenset] = []
    for assignment in registry.iter_consistent(cap=cap):
        changed = _changed_features(registry, factual, assignment)
        if changed & keep:
            continue
        if evaluate(model, representative_instance(registry, assignment)) != factual_class:
            continue
        n_changed = len(changed) + len(free_untested)
        if n_changed > best:
            best = n_changed
            witnesses = [assignment]
            kept_sets = [frozenset(all_names - changed - free_untested)]
        elif n_changed == best:
            witnesses.append(assignment)
            kept_sets.append(frozenset(all_names - changed - free_untested))
    if best < 0:
        raise Infeasible("factual class unreachable; model or keep set is degenerate")
    return BrutePiResult(best, witnesses, kept_sets)


def check_universal_pi(
    model: AnyModel,
    factual: Instance,
    kept,
    *,
    registry: IndicatorRegistry | None = None,
    cap: int = DEFAULT_SPACE_CAP,
    feature_cap: int = DEFAULT_FLIP_FEATURE_CAP,
) -> tuple[bool, Instance | None]:
    """Does keeping ``kept`` at factual values pin the class for every other
    assignment?  Returns (verified, counterexample).

    Raises :class:`CapExceeded` when the sweep would be too large.
    """
    registry = registry or IndicatorRegistry.from_model(model)
    kept = set(kept)
    factual_class = evaluate(model, factual)
    free_axes = [axis for name, axis in registry.axes.items() if name not in kept]
    if len(free_axes) > feature_cap:
        raise CapExceeded(f"{len(free_axes)} free features exceed the flip-enumeration cap of {feature_cap}")
    total = 1
    for axis in free_axes:
        total *= axis.n_cells if isinstance(axis, ContinuousAxis) else (
            len(axis.categories) if isinstance(axis, OnehotGroup) else 2
        )
        if total > cap:
            raise CapExceeded(f"universal check needs more than {cap} evaluations")

    def options(axis):
        if isinstance(axis, ContinuousAxis):
            vals = []
            for cell in range(axis.n_cells):
                iv = axis.cell_interval(cell)
                if iv.lo == -INF:
                    vals.append(iv.hi - 1.0)
                elif iv.hi == INF:
                    vals.append(iv.lo + 1.0)
                else:
                    vals.append((iv.lo + iv.hi) / 2.0)
            return vals
        return list(axis.categories)

    def sweep(i: int, point: Instance):
        if i == len(free_axes):
            if evaluate(model, point) != factual_class:
                return dict(point)
            return None
        axis = free_axes[i]
        for value in options(axis):
            point[axis.feature] = value
            bad = sweep(i + 1, point)
            if bad is not None:
                return bad
        point[axis.feature] = factual[axis.feature]
        return None

    counterexample = sweep(0, dict(factual))
    return (counterexample is None), counterexample
