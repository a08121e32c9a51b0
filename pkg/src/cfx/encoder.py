"""Compile decision polynomials into 0/1 integer linear programs.

Constraint families:

* ``generation`` -- per-term rows forcing a polynomial to 0 (sum of literal
  expressions <= len-1) or enabling it to be forced to 1 (sum >= len * delta);
* ``cardinality`` -- delta bookkeeping: sum delta = 1 for a single polynomial,
  per-tree sum delta_ji = delta_j, and the forest majority row;
* ``consistency`` -- threshold-chain rows guaranteeing that an indicator
  assignment decodes to a nonempty region;
* ``onehot`` -- one value per categorical group;
* ``pi_link`` -- auxiliary rows tying per-feature change flags to indicator
  diffs (prime-implicant objective);
* ``nogood`` -- cuts added during top-k enumeration.

Negated literals are folded algebraically into integer coefficients and
right-hand sides; every coefficient is an exact integer and objective
weights are exact rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ._intervals import INF, Interval
from ._registry import AtomGroup, IndicatorRegistry, OnehotGroup
from .errors import (
    EmptyPolynomialUnsatisfiable,
    InfeasibleCondition,
    MissingWeight,
    UnknownFeature,
)
from .models import CONTINUOUS, Instance
from .polynomial import DecisionPolynomial

# variable kinds
INDICATOR = "indicator"
ONEHOT = "onehot"
TREE_DELTA = "tree_delta"
TERM_DELTA = "term_delta"
FEATURE_CHANGE = "feature_change"

DECISION_KINDS = (INDICATOR, ONEHOT)


@dataclass(frozen=True)
class IlpVariable:
    id: int
    kind: str
    label: str
    predicate_id: int | None = None
    feature: str | None = None
    category: str | None = None
    tree_index: int | None = None
    term_index: int | None = None


@dataclass(frozen=True)
class LinearConstraint:
    coeffs: tuple  # ((var_id, int_coef), ...) sorted by var id
    relation: str  # "<=" | ">=" | "=="
    rhs: int
    family: str
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(sorted(self.coeffs)))
        if not self.coeffs:
            raise ValueError("constraint needs at least one nonzero coefficient")

    def normalized(self) -> tuple:
        """Canonical <=-form key for structural comparison (ignores labels)."""
        if self.relation == "<=":
            return (self.coeffs, self.rhs)
        if self.relation == ">=":
            return (tuple((v, -c) for v, c in self.coeffs), -self.rhs)
        return ("==", self.coeffs, self.rhs)


@dataclass
class IlpProblem:
    registry: IndicatorRegistry
    variables: list[IlpVariable] = field(default_factory=list)
    constraints: list[LinearConstraint] = field(default_factory=list)
    objective: dict[int, Fraction] = field(default_factory=dict)
    objective_constant: Fraction = Fraction(0)
    sense: str = "min"
    fixed: dict[int, int] = field(default_factory=dict)
    preferred: dict[int, int] = field(default_factory=dict)

    def add_variable(self, kind: str, label: str, **meta) -> IlpVariable:
        var = IlpVariable(id=len(self.variables), kind=kind, label=label, **meta)
        self.variables.append(var)
        return var

    def add_constraint(self, coeffs: dict[int, int], relation: str, rhs: int, family: str, label: str = "") -> LinearConstraint:
        con = LinearConstraint(tuple((v, c) for v, c in coeffs.items() if c != 0), relation, rhs, family, label)
        self.constraints.append(con)
        return con

    def fix(self, var_id: int, value: int) -> None:
        old = self.fixed.get(var_id)
        if old is not None and old != value:
            raise InfeasibleCondition(
                f"variable {self.variables[var_id].label!r} fixed to both 0 and 1"
            )
        self.fixed[var_id] = value

    def decision_ids(self) -> list[int]:
        return [v.id for v in self.variables if v.kind in DECISION_KINDS]

    def clone(self) -> "IlpProblem":
        return IlpProblem(
            registry=self.registry,
            variables=list(self.variables),
            constraints=list(self.constraints),
            objective=dict(self.objective),
            objective_constant=self.objective_constant,
            sense=self.sense,
            fixed=dict(self.fixed),
            preferred=dict(self.preferred),
        )

    def objective_at(self, assignment) -> Fraction:
        total = self.objective_constant
        for var, coef in self.objective.items():
            total += coef * assignment[var]
        return total


def new_problem(registry: IndicatorRegistry, sense: str = "min") -> IlpProblem:
    """Fresh problem with one binary variable per registry predicate."""
    problem = IlpProblem(registry=registry, sense=sense)
    for pid, pred in enumerate(registry.predicates):
        kind = INDICATOR if pred.op == "le" else ONEHOT
        problem.add_variable(
            kind,
            registry.var_label(pid),
            predicate_id=pid,
            feature=pred.feature,
            category=pred.category,
        )
    return problem


# ---------------------------------------------------------------------------
# registries


def build_registry(model) -> IndicatorRegistry:
    """All predicates of a model, deduplicated and deterministically ordered."""
    return IndicatorRegistry.from_model(model)


# ---------------------------------------------------------------------------
# generation constraints


def _term_row(term) -> tuple[dict[int, int], int]:
    """Coefficients and negated-literal count of one term's literal sum."""
    coeffs: dict[int, int] = {}
    negs = 0
    for pid, pol in sorted(term.literals):
        if pol:
            coeffs[pid] = coeffs.get(pid, 0) + 1
        else:
            coeffs[pid] = coeffs.get(pid, 0) - 1
            negs += 1
    return coeffs, negs


def encode_force_zero(problem: IlpProblem, dp: DecisionPolynomial) -> list[LinearConstraint]:
    """One row per term: the literal sum stays <= len - 1, so every term is 0."""
    out = []
    for i, term in enumerate(dp.terms):
        coeffs, negs = _term_row(term)
        out.append(
            problem.add_constraint(coeffs, "<=", len(term) - 1 - negs, "generation", f"zero_t{i}")
        )
    return out


def encode_force_one(
    problem: IlpProblem, dp: DecisionPolynomial, tree_index: int | None = None
) -> tuple[list[LinearConstraint], list[IlpVariable]]:
    """Per-term rows ``sum >= len * delta_i`` plus ``sum delta_i = 1``.

    Any assignment satisfying them makes the polynomial evaluate to 1.
    """
    if dp.is_empty:
        raise EmptyPolynomialUnsatisfiable("an empty polynomial can never be forced to 1")
    rows = []
    deltas = []
    prefix = f"d{tree_index}_" if tree_index is not None else "d_"
    for i, term in enumerate(dp.terms):
        delta = problem.add_variable(TERM_DELTA, f"{prefix}{i}", tree_index=tree_index, term_index=i)
        deltas.append(delta)
        coeffs, negs = _term_row(term)
        coeffs[delta.id] = -len(term)
        rows.append(problem.add_constraint(coeffs, ">=", -negs, "generation", f"one_t{i}"))
    card = problem.add_constraint({d.id: 1 for d in deltas}, "==", 1, "cardinality", "pick_one")
    return rows + [card], deltas


def encode_tree_indicator(
    problem: IlpProblem, dp: DecisionPolynomial, tree_index: int
) -> tuple[list[LinearConstraint], IlpVariable]:
    """Per-term rows ``sum - len <= delta - 1`` sharing one tree delta.

    delta = 0 forces the polynomial to 0; an empty polynomial yields no rows
    and the caller must fix delta = 0 itself.
    """
    delta = problem.add_variable(TREE_DELTA, f"d_tree{tree_index}", tree_index=tree_index)
    rows = []
    for i, term in enumerate(dp.terms):
        coeffs, negs = _term_row(term)
        coeffs[delta.id] = -1
        rows.append(
            problem.add_constraint(coeffs, "<=", len(term) - 1 - negs, "generation", f"ind_t{tree_index}_{i}")
        )
    return rows, delta


def votes_needed(n_trees: int, target_class: int) -> int:
    """Minimum votes for ``target_class`` to win under the ties-to-0 rule."""
    if target_class == 1:
        return n_trees // 2 + 1
    return (n_trees + 1) // 2


@dataclass
class ForestEncoding:
    route: str  # "force_one" | "indicator"
    constraints: list[LinearConstraint]
    tree_deltas: list[IlpVariable | None]
    majority: LinearConstraint


def encode_forest(
    problem: IlpProblem,
    dps: list[DecisionPolynomial],
    target_class: int,
    polarity: int,
) -> ForestEncoding:
    """Majority-consistent generation constraints from one DP per tree.

    With the target-polarity family the per-tree force-one form is used and
    at least ``votes_needed`` tree deltas must be 1; with the opposite family
    each tree gets an indicator delta and at most ``m - votes_needed`` of
    them may be 1.
    """
    m = len(dps)
    needed = votes_needed(m, target_class)
    rows: list[LinearConstraint] = []
    tree_deltas: list[IlpVariable | None] = []
    if polarity == target_class:
        usable = sum(1 for dp in dps if not dp.is_empty)
        if usable < needed:
            raise EmptyPolynomialUnsatisfiable(
                f"only {usable} trees can output class {target_class}; {needed} needed"
            )
        for j, dp in enumerate(dps):
            if dp.is_empty:
                tree_deltas.append(None)
                continue
            term_rows = []
            term_deltas = []
            for i, term in enumerate(dp.terms):
                delta = problem.add_variable(TERM_DELTA, f"d{j}_{i}", tree_index=j, term_index=i)
                term_deltas.append(delta)
                coeffs, negs = _term_row(term)
                coeffs[delta.id] = -len(term)
                term_rows.append(problem.add_constraint(coeffs, ">=", -negs, "generation", f"one_t{j}_{i}"))
            tree_delta = problem.add_variable(TREE_DELTA, f"d_tree{j}", tree_index=j)
            coeffs = {d.id: 1 for d in term_deltas}
            coeffs[tree_delta.id] = -1
            rows.extend(term_rows)
            rows.append(problem.add_constraint(coeffs, "==", 0, "cardinality", f"tree{j}_sum"))
            tree_deltas.append(tree_delta)
        majority = problem.add_constraint(
            {d.id: 1 for d in tree_deltas if d is not None}, ">=", needed, "cardinality", "majority"
        )
    else:
        for j, dp in enumerate(dps):
            term_rows, tree_delta = encode_tree_indicator(problem, dp, j)
            if dp.is_empty:
                problem.fix(tree_delta.id, 0)
            rows.extend(term_rows)
            tree_deltas.append(tree_delta)
        majority = problem.add_constraint(
            {d.id: 1 for d in tree_deltas}, "<=", m - needed, "cardinality", "majority"
        )
    rows.append(majority)
    return ForestEncoding(
        route="force_one" if polarity == target_class else "indicator",
        constraints=rows,
        tree_deltas=tree_deltas,
        majority=majority,
    )


def choose_polarity(dp_pairs, override: int | None = None) -> int:
    """Smaller total term count wins; ties go to the 0-polynomial family.

    A ``None`` entry (the unrepresentable side of a constant enumerable
    classifier) loses to any real polynomial.
    """
    if override is not None:
        return override
    if not isinstance(dp_pairs, list):
        dp_pairs = [dp_pairs]

    def count(side: int) -> float:
        total = 0
        for pair in dp_pairs:
            if pair[side] is None:
                return math.inf
            total += len(pair[side].terms)
        return total

    return 0 if count(0) <= count(1) else 1


# ---------------------------------------------------------------------------
# structure constraints


def encode_consistency(problem: IlpProblem) -> list[LinearConstraint]:
    """Threshold-chain rows: X<=a true forces X<=b true for b>=a, and dually.

    Emitted per (feature, threshold) on features with at least two
    thresholds, simplified (trivial rows dropped, duplicate adjacent-pair
    rows deduplicated, so q=2 yields the single pairwise implication).
    """
    rows: list[LinearConstraint] = []
    seen: set = set()
    for axis in problem.registry.continuous_axes():
        q = len(axis.thresholds)
        if q < 2:
            continue
        for k in range(q):
            var_a = axis.var_ids[k]
            uppers = axis.var_ids[k + 1:]
            lowers = axis.var_ids[:k]
            if uppers:
                coeffs = {v: 1 for v in uppers}
                coeffs[var_a] = -len(uppers)
                con = LinearConstraint(tuple(coeffs.items()), ">=", 0, "consistency", f"{axis.feature}_up{k}")
                if con.normalized() not in seen:
                    seen.add(con.normalized())
                    problem.constraints.append(con)
                    rows.append(con)
            if lowers:
                coeffs = {v: 1 for v in lowers}
                coeffs[var_a] = -len(lowers)
                con = LinearConstraint(tuple(coeffs.items()), "<=", 0, "consistency", f"{axis.feature}_dn{k}")
                if con.normalized() not in seen:
                    seen.add(con.normalized())
                    problem.constraints.append(con)
                    rows.append(con)
    return rows


def encode_onehot(problem: IlpProblem) -> list[LinearConstraint]:
    """One equality per one-hot group; atoms need no constraint."""
    rows = []
    for axis in problem.registry.categorical_axes():
        if isinstance(axis, OnehotGroup):
            rows.append(
                problem.add_constraint({v: 1 for v in axis.var_ids}, "==", 1, "onehot", f"{axis.feature}_onehot")
            )
    return rows


# ---------------------------------------------------------------------------
# objective


def build_objective(problem: IlpProblem, factual: Instance, weights) -> dict[int, Fraction]:
    """Weighted l1 distance to the factual, with absolute values folded away.

    A variable whose factual indicator value is 1 contributes ``w * (1 - v)``;
    a factual 0 contributes ``w * v``.  Also records the factual values as
    the solver's preferred branching values.
    """
    registry = problem.registry
    factual_vec = registry.factual_vector(factual)
    coeffs: dict[int, Fraction] = {}
    constant = Fraction(0)
    for pid in range(registry.num_predicates):
        w = weights.get(pid)
        if w is None:
            raise MissingWeight(f"no weight for registry variable {registry.var_label(pid)!r}")
        w = Fraction(w)
        if factual_vec[pid] == 1:
            constant += w
            coeffs[pid] = coeffs.get(pid, Fraction(0)) - w
        else:
            coeffs[pid] = coeffs.get(pid, Fraction(0)) + w
        problem.preferred[pid] = factual_vec[pid]
    problem.objective = {v: c for v, c in coeffs.items() if c != 0}
    problem.objective_constant = constant
    return problem.objective


# ---------------------------------------------------------------------------
# user conditions


@dataclass(frozen=True)
class Condition:
    """A diversity condition: interval on a continuous feature or (in)equality
    on a categorical one."""

    feature: str
    op: str  # "interval" | "eq" | "ne"
    interval: Interval | None = None
    category: str | None = None

    @staticmethod
    def between(feature: str, lo: float = -INF, hi: float = INF, lo_open: bool = False, hi_open: bool = False) -> "Condition":
        return Condition(feature, "interval", interval=Interval(lo, hi, lo_open, hi_open))

    @staticmethod
    def greater(feature: str, lo: float, strict: bool = True) -> "Condition":
        return Condition(feature, "interval", interval=Interval(lo, INF, strict, True))

    @staticmethod
    def less_equal(feature: str, hi: float, strict: bool = False) -> "Condition":
        return Condition(feature, "interval", interval=Interval(-INF, hi, True, strict))

    @staticmethod
    def equals(feature: str, value) -> "Condition":
        return Condition(feature, "eq", category=str(value))

    @staticmethod
    def not_equals(feature: str, value) -> "Condition":
        return Condition(feature, "ne", category=str(value))

    def __str__(self) -> str:
        if self.op == "interval":
            return f"{self.feature} in {self.interval}"
        return f"{self.feature} {'=' if self.op == 'eq' else '!='} {self.category}"


def apply_conditions(problem: IlpProblem, conditions) -> IlpProblem:
    """Translate conditions into fixed indicator values on a fresh problem."""
    out = problem.clone()
    registry = out.registry
    for cond in conditions:
        feat = registry.feature_by_name.get(cond.feature)
        if feat is None:
            raise UnknownFeature(f"condition references undeclared feature {cond.feature!r}")
        axis = registry.axes.get(cond.feature)
        if feat.kind == CONTINUOUS:
            iv = _condition_interval(cond, feat)
            if iv.is_empty():
                raise InfeasibleCondition(f"condition {cond} describes an empty interval")
            if axis is None:
                continue  # feature untested by the model: vacuous for the ILP
            for t, var in zip(axis.thresholds, axis.var_ids):
                if iv.hi <= t:
                    out.fix(var, 1)
                elif iv.lo > t or (iv.lo == t and iv.lo_open):
                    out.fix(var, 0)
        else:
            if cond.op == "interval":
                raise UnknownFeature(f"interval condition on categorical feature {feat.name!r}")
            if cond.category not in feat.categories:
                raise UnknownFeature(
                    f"category {cond.category!r} not declared for feature {feat.name!r}"
                )
            if axis is None:
                continue
            _fix_categorical(out, axis, cond)
    return out


def _condition_interval(cond: Condition, feat) -> Interval:
    if cond.op == "interval":
        return cond.interval
    if cond.op == "eq":
        v = float(cond.category)
        return Interval(v, v, False, False)
    raise UnknownFeature(f"'{cond.op}' condition is not defined on continuous feature {feat.name!r}")


def _fix_categorical(problem: IlpProblem, axis, cond: Condition) -> None:
    want = cond.op == "eq"
    if isinstance(axis, AtomGroup):
        if cond.category == axis.categories[1]:
            problem.fix(axis.var_id, 1 if want else 0)
        else:
            problem.fix(axis.var_id, 0 if want else 1)
        return
    target = axis.var_ids[axis.categories.index(cond.category)]
    if want:
        for cat, var in zip(axis.categories, axis.var_ids):
            problem.fix(var, 1 if var == target else 0)
    else:
        problem.fix(target, 0)


# ---------------------------------------------------------------------------
# stats and export


@dataclass(frozen=True)
class EncodingStats:
    n_variables: int
    n_constraints: int
    variables_by_kind: dict
    constraints_by_family: dict
    n_fixed: int

    def as_dict(self) -> dict:
        return {
            "variables": self.n_variables,
            "constraints": self.n_constraints,
            "variables_by_kind": dict(self.variables_by_kind),
            "constraints_by_family": dict(self.constraints_by_family),
            "fixed": self.n_fixed,
        }


def encoding_stats(problem: IlpProblem) -> EncodingStats:
    by_kind: dict[str, int] = {}
    for v in problem.variables:
        by_kind[v.kind] = by_kind.get(v.kind, 0) + 1
    by_family: dict[str, int] = {}
    for c in problem.constraints:
        by_family[c.family] = by_family.get(c.family, 0) + 1
    return EncodingStats(
        n_variables=len(problem.variables),
        n_constraints=len(problem.constraints),
        variables_by_kind=by_kind,
        constraints_by_family=by_family,
        n_fixed=len(problem.fixed),
    )


def export_lp(problem: IlpProblem) -> str:
    """CPLEX-style LP text for external-solver cross checks.

    Variables are named ``x<id>``; a comment block maps them back to their
    labels.  Fixed assignments become Bounds entries.
    """

    def term_str(coef, var) -> str:
        c = float(coef)
        sign = "+" if c >= 0 else "-"
        mag = abs(c)
        mag_s = str(int(mag)) if mag.is_integer() else repr(mag)
        return f"{sign} {mag_s} x{var}"

    lines = ["\\ 0/1 ILP exported by cfx"]
    for v in problem.variables:
        lines.append(f"\\ x{v.id} = {v.label}")
    if problem.objective_constant:
        lines.append(f"\\ objective constant: {float(problem.objective_constant)!r}")
    lines.append("Minimize" if problem.sense == "min" else "Maximize")
    obj_terms = [term_str(c, v) for v, c in sorted(problem.objective.items())] or ["+ 0 x0"]
    lines.append(" obj: " + " ".join(obj_terms).lstrip("+ "))
    lines.append("Subject To")
    rel_map = {"<=": "<=", ">=": ">=", "==": "="}
    for i, con in enumerate(problem.constraints):
        body = " ".join(term_str(c, v) for v, c in con.coeffs).lstrip("+ ")
        lines.append(f" c{i}: {body} {rel_map[con.relation]} {con.rhs}")
    if problem.fixed:
        lines.append("Bounds")
        for var, val in sorted(problem.fixed.items()):
            lines.append(f" x{var} = {val}")
    lines.append("Binary")
    lines.append(" " + " ".join(f"x{v.id}" for v in problem.variables))
    lines.append("End")
    return "\n".join(lines) + "\n"
