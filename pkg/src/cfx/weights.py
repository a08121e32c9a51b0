"""Objective weights for the weighted l1 distance over indicator variables.

Three schemes: uniform (Hamming distance, whose optimum is the classifier's
robustness), rule-conditioned inverse MAD for threshold rules, and inverse
standard deviation.  Categorical variables always use the inverse sample
standard deviation of their 0/1 indicator column.  Degenerate statistics
(zero spread, empty rule subsets) fall back to the largest finite weight
among the same feature's rules, else 1, so every weight stays strictly
positive.  Weights are rationalized before they reach the exact-integer
solver objective.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from fractions import Fraction

from ._registry import AtomGroup, IndicatorRegistry, OnehotGroup
from .errors import InvalidModel, MissingColumn

RATIONALIZE_DENOMINATOR_CAP = 10**6


@dataclass(frozen=True)
class Dataset:
    """Column-major records matching a model's feature declarations."""

    columns: dict  # name -> list of values
    n_rows: int

    def __post_init__(self):
        if self.n_rows <= 0:
            raise InvalidModel("dataset must be nonempty")
        for name, col in self.columns.items():
            if len(col) != self.n_rows:
                raise InvalidModel(f"column {name!r} has {len(col)} rows, expected {self.n_rows}")

    @classmethod
    def from_rows(cls, rows: list[dict]) -> "Dataset":
        if not rows:
            raise InvalidModel("dataset must be nonempty")
        columns = {name: [r[name] for r in rows] for name in rows[0]}
        return cls(columns, len(rows))

    def column(self, name: str) -> list:
        try:
            return self.columns[name]
        except KeyError:
            raise MissingColumn(f"dataset has no column {name!r}") from None


class WeightVector(dict):
    """Map registry variable id -> positive Fraction weight."""

    def __init__(self, registry: IndicatorRegistry, values: dict):
        super().__init__(values)
        self.registry = registry

    def labeled(self) -> dict[str, Fraction]:
        return {self.registry.var_label(v): w for v, w in sorted(self.items())}

    def scaled(self, factor) -> "WeightVector":
        f = Fraction(factor)
        return WeightVector(self.registry, {v: w * f for v, w in self.items()})


def _rationalize(x: float) -> Fraction:
    return Fraction(x).limit_denominator(RATIONALIZE_DENOMINATOR_CAP)


def uniform_weights(registry: IndicatorRegistry) -> WeightVector:
    """All weights 1: the objective becomes the Hamming distance."""
    return WeightVector(registry, {v: Fraction(1) for v in range(registry.num_predicates)})


def _indicator_column(dataset: Dataset, feature: str, category: str) -> list[float]:
    return [1.0 if v == category else 0.0 for v in dataset.column(feature)]


def _inverse_std(values: list[float]) -> Fraction | None:
    if len(values) < 2:
        return None
    spread = statistics.stdev(values)
    if spread == 0:
        return None
    return _rationalize(1.0 / spread)


def _mad(values: list[float]) -> float:
    center = statistics.median(values)
    return statistics.median([abs(v - center) for v in values])


def _apply_fallbacks(
    registry: IndicatorRegistry, raw: dict[int, Fraction | None]
) -> WeightVector:
    by_feature: dict[str, list[int]] = {}
    for pid, pred in enumerate(registry.predicates):
        by_feature.setdefault(pred.feature, []).append(pid)
    out: dict[int, Fraction] = {}
    for feature, pids in by_feature.items():
        finite = [raw[p] for p in pids if raw[p] is not None]
        fallback = max(finite) if finite else Fraction(1)
        for p in pids:
            out[p] = raw[p] if raw[p] is not None else fallback
    return WeightVector(registry, out)


def _categorical_raw(registry: IndicatorRegistry, dataset: Dataset, raw: dict) -> None:
    for axis in registry.categorical_axes():
        if isinstance(axis, OnehotGroup):
            for cat, var in zip(axis.categories, axis.var_ids):
                raw[var] = _inverse_std(_indicator_column(dataset, axis.feature, cat))
        elif isinstance(axis, AtomGroup):
            raw[axis.var_id] = _inverse_std(
                _indicator_column(dataset, axis.feature, axis.categories[1])
            )


def mad_rule_weights(registry: IndicatorRegistry, dataset: Dataset) -> WeightVector:
    """Inverse MAD per rule, computed over the rows that satisfy the rule.

    For a rule ``X <= a`` the statistic runs over S_r = {rows with X <= a};
    an empty subset or zero MAD falls back as documented above.
    """
    raw: dict[int, Fraction | None] = {}
    for axis in registry.continuous_axes():
        column = [float(v) for v in dataset.column(axis.feature)]
        for t, var in zip(axis.thresholds, axis.var_ids):
            subset = [v for v in column if v <= t]
            if not subset:
                raw[var] = None
                continue
            spread = _mad(subset)
            raw[var] = None if spread == 0 else _rationalize(1.0 / spread)
    _categorical_raw(registry, dataset, raw)
    return _apply_fallbacks(registry, raw)


def std_weights(registry: IndicatorRegistry, dataset: Dataset) -> WeightVector:
    """Inverse sample standard deviation per feature, shared by its rules."""
    raw: dict[int, Fraction | None] = {}
    for axis in registry.continuous_axes():
        column = [float(v) for v in dataset.column(axis.feature)]
        w = _inverse_std(column)
        for var in axis.var_ids:
            raw[var] = w
    _categorical_raw(registry, dataset, raw)
    return _apply_fallbacks(registry, raw)


def explicit_weights(registry: IndicatorRegistry, by_label: dict[str, float]) -> WeightVector:
    """User-supplied weights keyed by variable label (e.g. ``"X1<=10"``)."""
    values: dict[int, Fraction] = {}
    for pid in range(registry.num_predicates):
        label = registry.var_label(pid)
        if label in by_label:
            w = Fraction(by_label[label]) if isinstance(by_label[label], (int, str)) else _rationalize(by_label[label])
            if w < 0:
                raise InvalidModel(f"weight for {label!r} must be nonnegative")
            values[pid] = w
    unknown = set(by_label) - {registry.var_label(p) for p in range(registry.num_predicates)}
    if unknown:
        raise MissingColumn(f"weights reference unknown variables: {sorted(unknown)}")
    return WeightVector(registry, values)
