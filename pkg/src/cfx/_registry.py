"""Indicator registry: the ordered table of binary atoms behind every encoding.

One registry is built per model (or forest) and shared by polynomials, the
ILP encoder and the brute-force oracle.  Variable ids 0..P-1 are exactly the
predicate ids, in a deterministic order: features in declaration order, then
ascending thresholds (continuous) or declared category order (categorical).

Categorical features come in two flavors:

* one-hot groups -- one variable per declared category (tree splits, and
  naive-Bayes features with three or more categories);
* atoms -- a single variable whose polarity selects between the two
  categories of a binary feature (truth-table variables, two-category
  naive-Bayes features).  This is what lets term merging eliminate
  context-irrelevant binary variables.
"""

from __future__ import annotations

import itertools
from bisect import bisect_left
from dataclasses import dataclass

from ._intervals import INF, Interval
from .errors import EnumerationCapExceeded, InconsistentAssignment, InvalidModel, UnknownFeature
from .models import (
    CATEGORICAL,
    CONTINUOUS,
    AnyModel,
    DecisionTreeModel,
    Feature,
    Instance,
    NaiveBayesModel,
    Predicate,
    RandomForestModel,
    TruthTable,
)

Assignment = tuple  # dense tuple of 0/1, indexed by predicate id


@dataclass(frozen=True)
class ThresholdIndex:
    """Sorted distinct thresholds of one continuous feature (Def.-8 style rule sets)."""

    feature: str
    thresholds: tuple[float, ...]

    def upper_rules(self, a: float) -> tuple[float, ...]:
        """Thresholds b with b >= a (includes a itself)."""
        return tuple(b for b in self.thresholds if b >= a)

    def lower_rules(self, a: float) -> tuple[float, ...]:
        """Thresholds b with b <= a (includes a itself)."""
        return tuple(b for b in self.thresholds if b <= a)


@dataclass(frozen=True)
class ContinuousAxis:
    feature: str
    thresholds: tuple[float, ...]
    var_ids: tuple[int, ...]  # ascending threshold order

    @property
    def n_cells(self) -> int:
        return len(self.thresholds) + 1

    def cell_of_value(self, x: float) -> int:
        return bisect_left(self.thresholds, x)

    def cell_interval(self, cell: int) -> Interval:
        lo = self.thresholds[cell - 1] if cell > 0 else -INF
        hi = self.thresholds[cell] if cell < len(self.thresholds) else INF
        return Interval(lo, hi, True, hi == INF)

    def pattern_for_cell(self, cell: int) -> tuple[int, ...]:
        q = len(self.thresholds)
        return (0,) * cell + (1,) * (q - cell)

    def cell_of_assignment(self, assignment) -> int:
        values = [assignment[v] for v in self.var_ids]
        cell = 0
        while cell < len(values) and values[cell] == 0:
            cell += 1
        if any(values[j] != 1 for j in range(cell, len(values))):
            raise InconsistentAssignment(
                f"feature {self.feature!r}: indicator pattern {values} is not monotone"
            )
        return cell


@dataclass(frozen=True)
class OnehotGroup:
    feature: str
    categories: tuple[str, ...]
    var_ids: tuple[int, ...]  # aligned with categories

    def category_of_assignment(self, assignment) -> str:
        hot = [c for c, v in zip(self.categories, self.var_ids) if assignment[v] == 1]
        if len(hot) != 1:
            raise InconsistentAssignment(
                f"feature {self.feature!r}: {len(hot)} one-hot variables set, expected exactly 1"
            )
        return hot[0]


@dataclass(frozen=True)
class AtomGroup:
    """A binary feature encoded by one variable: 1 selects categories[1]."""

    feature: str
    categories: tuple[str, str]
    var_id: int

    def category_of_assignment(self, assignment) -> str:
        return self.categories[assignment[self.var_id]]


Axis = ContinuousAxis | OnehotGroup | AtomGroup


class IndicatorRegistry:
    """Ordered predicate table plus per-feature consistency structure."""

    def __init__(self, features: tuple[Feature, ...], axes: dict[str, Axis], predicates: list[Predicate]):
        self.features = tuple(features)
        self.feature_by_name = {f.name: f for f in self.features}
        self.axes = axes
        self.predicates = tuple(predicates)
        self._id_by_key = {_pred_key(p): i for i, p in enumerate(self.predicates)}

    # -- construction -------------------------------------------------

    @classmethod
    def from_model(cls, model: AnyModel) -> "IndicatorRegistry":
        if isinstance(model, (DecisionTreeModel, RandomForestModel)):
            trees = model.trees if isinstance(model, RandomForestModel) else (model,)
            return cls._from_trees(model.features, trees)
        if isinstance(model, NaiveBayesModel):
            return cls._from_enumerable(model.features, atom_when_binary=True)
        if isinstance(model, TruthTable):
            return cls._from_enumerable(model.features, atom_when_binary=True)
        raise InvalidModel(f"cannot build a registry from {type(model).__name__}")

    @classmethod
    def _from_trees(cls, features, trees) -> "IndicatorRegistry":
        thresholds: dict[str, set[float]] = {}
        eq_features: set[str] = set()
        for tree in trees:
            stack = [tree.root]
            while stack:
                node = stack.pop()
                if node.is_leaf:
                    continue
                p = node.predicate
                if p.op == "le":
                    thresholds.setdefault(p.feature, set()).add(float(p.threshold))
                else:
                    eq_features.add(p.feature)
                stack.append(node.true_child)
                stack.append(node.false_child)
        axes: dict[str, Axis] = {}
        predicates: list[Predicate] = []
        for f in features:
            if f.kind == CONTINUOUS and f.name in thresholds:
                ts = tuple(sorted(thresholds[f.name]))
                ids = tuple(range(len(predicates), len(predicates) + len(ts)))
                predicates.extend(Predicate(f.name, "le", threshold=t) for t in ts)
                axes[f.name] = ContinuousAxis(f.name, ts, ids)
            elif f.kind == CATEGORICAL and f.name in eq_features:
                ids = tuple(range(len(predicates), len(predicates) + len(f.categories)))
                predicates.extend(Predicate(f.name, "eq", category=c) for c in f.categories)
                axes[f.name] = OnehotGroup(f.name, f.categories, ids)
        return cls(tuple(features), axes, predicates)

    @classmethod
    def _from_enumerable(cls, features, *, atom_when_binary: bool) -> "IndicatorRegistry":
        axes: dict[str, Axis] = {}
        predicates: list[Predicate] = []
        for f in features:
            if f.kind != CATEGORICAL:
                raise InvalidModel("enumerable classifiers must have categorical features only")
            if atom_when_binary and len(f.categories) == 2:
                var = len(predicates)
                predicates.append(Predicate(f.name, "eq", category=f.categories[1]))
                axes[f.name] = AtomGroup(f.name, (f.categories[0], f.categories[1]), var)
            else:
                ids = tuple(range(len(predicates), len(predicates) + len(f.categories)))
                predicates.extend(Predicate(f.name, "eq", category=c) for c in f.categories)
                axes[f.name] = OnehotGroup(f.name, f.categories, ids)
        return cls(tuple(features), axes, predicates)

    # -- lookups -------------------------------------------------------

    @property
    def num_predicates(self) -> int:
        return len(self.predicates)

    def id_of(self, predicate: Predicate) -> int:
        try:
            return self._id_by_key[_pred_key(predicate)]
        except KeyError:
            raise UnknownFeature(f"predicate {predicate} is not registered") from None

    def threshold_index(self, feature: str) -> ThresholdIndex:
        axis = self.axes.get(feature)
        if not isinstance(axis, ContinuousAxis):
            raise UnknownFeature(f"feature {feature!r} has no thresholds")
        return ThresholdIndex(feature, axis.thresholds)

    def continuous_axes(self) -> list[ContinuousAxis]:
        return [a for a in self.axes.values() if isinstance(a, ContinuousAxis)]

    def categorical_axes(self) -> list[OnehotGroup | AtomGroup]:
        return [a for a in self.axes.values() if isinstance(a, (OnehotGroup, AtomGroup))]

    def var_label(self, var_id: int) -> str:
        return str(self.predicates[var_id])

    # -- assignments ----------------------------------------------------

    def factual_vector(self, instance: Instance) -> tuple[int, ...]:
        """Indicator values of a concrete instance, dense over predicate ids."""
        vec = [0] * self.num_predicates
        for i, p in enumerate(self.predicates):
            vec[i] = 1 if p.holds_for(instance[p.feature]) else 0
        return tuple(vec)

    def count_consistent(self) -> int:
        n = 1
        for axis in self.axes.values():
            if isinstance(axis, ContinuousAxis):
                n *= axis.n_cells
            elif isinstance(axis, OnehotGroup):
                n *= len(axis.categories)
            else:
                n *= 2
        return n

    def iter_consistent(self, cap: int | None = None):
        """Yield every consistent assignment exactly once, in a fixed order."""
        if cap is not None and self.count_consistent() > cap:
            raise EnumerationCapExceeded(
                f"{self.count_consistent()} consistent assignments exceed the cap of {cap}"
            )
        per_axis: list[tuple[tuple[int, ...], list[tuple[int, ...]]]] = []
        for axis in self.axes.values():
            if isinstance(axis, ContinuousAxis):
                opts = [axis.pattern_for_cell(c) for c in range(axis.n_cells)]
                per_axis.append((axis.var_ids, opts))
            elif isinstance(axis, OnehotGroup):
                k = len(axis.categories)
                opts = [tuple(1 if j == i else 0 for j in range(k)) for i in range(k)]
                per_axis.append((axis.var_ids, opts))
            else:
                per_axis.append(((axis.var_id,), [(0,), (1,)]))
        base = [0] * self.num_predicates
        for combo in itertools.product(*(opts for _, opts in per_axis)):
            vec = list(base)
            for (ids, _), pattern in zip(per_axis, combo):
                for v, val in zip(ids, pattern):
                    vec[v] = val
            yield tuple(vec)

    def is_consistent(self, assignment) -> bool:
        try:
            self.check_consistent(assignment)
            return True
        except InconsistentAssignment:
            return False

    def check_consistent(self, assignment) -> None:
        if len(assignment) < self.num_predicates:
            raise InconsistentAssignment("assignment does not cover every registry predicate")
        for axis in self.axes.values():
            if isinstance(axis, ContinuousAxis):
                axis.cell_of_assignment(assignment)
            elif isinstance(axis, OnehotGroup):
                axis.category_of_assignment(assignment)
            # atoms are always consistent


def _pred_key(p: Predicate):
    if p.op == "le":
        return (p.feature, "le", float(p.threshold))
    return (p.feature, "eq", p.category)
