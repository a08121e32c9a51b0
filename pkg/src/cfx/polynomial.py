"""Decision polynomials: multilinear 0/1 representations of classifiers.

A class-c decision polynomial is a sum of monic products of indicator
literals, with no constant term, that evaluates to 1 exactly when the
classifier outputs c.  Trees contribute one term per root-to-leaf path;
enumerable classifiers (naive Bayes, truth tables) contribute one
full-length term per joint assignment, which :func:`reduce_dp` then
compresses by merging term pairs that differ in a single opposite-polarity
literal (context-specific independence).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ._registry import IndicatorRegistry
from .errors import (
    ConstantClassifier,
    EnumerationCapExceeded,
    InvalidModel,
    InvalidPolynomial,
)
from .models import (
    AnyModel,
    DecisionTreeModel,
    NaiveBayesModel,
    TruthTable,
    enumerate_paths,
    evaluate,
)

#: (predicate_id, polarity); polarity False stands for the (1 - v) factor.
Literal = tuple[int, bool]

#: Joint-assignment count above which enumerable construction refuses to run.
DEFAULT_ASSIGNMENT_CAP = 1 << 20


@dataclass(frozen=True)
class Term:
    """A monic product of literals; never empty, one literal per predicate."""

    literals: frozenset

    def __post_init__(self):
        object.__setattr__(self, "literals", frozenset(self.literals))
        if not self.literals:
            raise InvalidPolynomial("constant terms are not allowed")
        preds = [pid for pid, _ in self.literals]
        if len(set(preds)) != len(preds):
            raise InvalidPolynomial("a term may contain at most one literal per predicate")

    def __len__(self) -> int:
        return len(self.literals)

    def evaluate(self, assignment) -> int:
        for pid, pol in self.literals:
            if assignment[pid] != (1 if pol else 0):
                return 0
        return 1


@dataclass(frozen=True)
class DecisionPolynomial:
    target_class: int
    terms: tuple[Term, ...]
    registry: IndicatorRegistry

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        seen = set()
        for t in self.terms:
            if t.literals in seen:
                raise InvalidPolynomial("duplicate terms are not allowed")
            seen.add(t.literals)

    @property
    def is_empty(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"

        def lit_str(lit: Literal) -> str:
            pid, pol = lit
            name = f"1[{self.registry.var_label(pid)}]"
            return name if pol else f"(1-{name})"

        parts = []
        for t in self.terms:
            lits = sorted(t.literals, key=lambda l: l[0])
            parts.append("*".join(lit_str(l) for l in lits))
        return " + ".join(parts)


def _term_sort_key(term: Term):
    return tuple(sorted((pid, not pol) for pid, pol in term.literals))


def dp_from_tree(
    tree: DecisionTreeModel,
    target_class: int,
    registry: IndicatorRegistry | None = None,
) -> DecisionPolynomial:
    """One term per root-to-leaf path reaching ``target_class``.

    A tree that never reaches the class yields the empty polynomial, which
    evaluates to 0 everywhere.
    """
    if registry is None:
        registry = IndicatorRegistry.from_model(tree)
    terms = []
    for literals, leaf_class in enumerate_paths(tree):
        if leaf_class != target_class:
            continue
        lits = frozenset((registry.id_of(p), pol) for p, pol in literals)
        if len({pid for pid, _ in lits}) != len(lits):
            continue  # path tests a predicate both ways: identically zero
        terms.append(Term(lits))
    return DecisionPolynomial(target_class, tuple(terms), registry)


def _enumerate_terms(
    classifier: NaiveBayesModel | TruthTable,
    registry: IndicatorRegistry,
    assignment_cap: int,
) -> tuple[list[Term], list[Term], int]:
    if not isinstance(classifier, (NaiveBayesModel, TruthTable)):
        raise InvalidModel(f"not an enumerable classifier: {type(classifier).__name__}")
    features = classifier.features
    total = 1
    for f in features:
        total *= len(f.categories)
    if total > assignment_cap:
        raise EnumerationCapExceeded(f"{total} joint assignments exceed the cap of {assignment_cap}")

    lit_for_value: list[dict[str, Literal]] = []
    for f in features:
        axis = registry.axes[f.name]
        table: dict[str, Literal] = {}
        for cat in f.categories:
            if hasattr(axis, "var_id"):  # atom: one variable, polarity selects
                table[cat] = (axis.var_id, cat == axis.categories[1])
            else:
                table[cat] = (axis.var_ids[axis.categories.index(cat)], True)
        lit_for_value.append(table)

    terms: tuple[list[Term], list[Term]] = ([], [])
    for values in itertools.product(*(f.categories for f in features)):
        instance = {f.name: v for f, v in zip(features, values)}
        cls = evaluate(classifier, instance)
        literals = frozenset(lit_for_value[i][v] for i, v in enumerate(values))
        terms[cls].append(Term(literals))
    return terms[0], terms[1], total


def enumerable_dps(
    classifier: NaiveBayesModel | TruthTable,
    registry: IndicatorRegistry | None = None,
    *,
    assignment_cap: int = DEFAULT_ASSIGNMENT_CAP,
    reduce: bool = True,
    allow_constant_side: bool = False,
) -> tuple:
    """Both decision polynomials of an enumerable classifier in one sweep.

    A constant classifier's always-true class has no constant-free
    polynomial: that raises :class:`ConstantClassifier`, unless
    ``allow_constant_side`` turns the unrepresentable side into ``None``
    (the other side is then the empty polynomial and fully describes the
    classifier).
    """
    if registry is None:
        registry = IndicatorRegistry.from_model(classifier)
    terms0, terms1, total = _enumerate_terms(classifier, registry, assignment_cap)
    dps = []
    for cls, terms in ((0, terms0), (1, terms1)):
        if len(terms) == total:
            if allow_constant_side:
                dps.append(None)
                continue
            raise ConstantClassifier(
                f"classifier outputs {cls} on every assignment; no decision polynomial exists"
            )
        dp = DecisionPolynomial(cls, tuple(terms), registry)
        dps.append(reduce_dp(dp) if reduce else dp)
    return dps[0], dps[1]


def dp_from_enumerable(
    classifier: NaiveBayesModel | TruthTable,
    target_class: int,
    registry: IndicatorRegistry | None = None,
    *,
    assignment_cap: int = DEFAULT_ASSIGNMENT_CAP,
) -> DecisionPolynomial:
    """Reduced decision polynomial of an enumerable classifier.

    A class the classifier never outputs yields the empty polynomial, even
    when the classifier is constant; a class it always outputs has no
    constant-free polynomial and raises :class:`ConstantClassifier`.
    """
    if registry is None:
        registry = IndicatorRegistry.from_model(classifier)
    terms0, terms1, total = _enumerate_terms(classifier, registry, assignment_cap)
    terms = (terms0, terms1)[target_class]
    if len(terms) == total:
        raise ConstantClassifier(
            f"classifier outputs {target_class} on every assignment; no decision polynomial exists"
        )
    return reduce_dp(DecisionPolynomial(target_class, tuple(terms), registry))


def reduce_dp(dp: DecisionPolynomial) -> DecisionPolynomial:
    """Fixpoint of pairwise term merging.

    Two terms differing in exactly one opposite-polarity literal are replaced
    by their common part.  Output is deterministic for a given registry
    order; semantics (value on every consistent assignment) are preserved.
    """
    terms: list[frozenset] = [t.literals for t in dp.terms]
    changed = True
    while changed:
        changed = False
        for pid in range(dp.registry.num_predicates):
            terms, merged = _merge_pass(terms, pid)
            changed = changed or merged
    return DecisionPolynomial(dp.target_class, tuple(Term(t) for t in terms), dp.registry)


def _merge_pass(terms: list[frozenset], pid: int) -> tuple[list[frozenset], bool]:
    pos_lit = (pid, True)
    neg_lit = (pid, False)
    out: list[frozenset] = []
    open_pos: dict[frozenset, int] = {}
    open_neg: dict[frozenset, int] = {}
    merged = False
    for t in terms:
        if pos_lit in t:
            rest = t - {pos_lit}
            j = open_neg.pop(rest, None)
            if j is None:
                open_pos[rest] = len(out)
                out.append(t)
            else:
                if not rest:
                    raise InvalidPolynomial("merge produced a constant term; the polynomial is not a valid DP")
                out[j] = rest
                merged = True
        elif neg_lit in t:
            rest = t - {neg_lit}
            j = open_pos.pop(rest, None)
            if j is None:
                open_neg[rest] = len(out)
                out.append(t)
            else:
                if not rest:
                    raise InvalidPolynomial("merge produced a constant term; the polynomial is not a valid DP")
                out[j] = rest
                merged = True
        else:
            out.append(t)
    return out, merged


def eval_dp(dp: DecisionPolynomial, assignment, *, check_consistency: bool = True) -> int:
    """Sum of term products at a consistent indicator assignment."""
    if check_consistency:
        dp.registry.check_consistent(assignment)
    return sum(t.evaluate(assignment) for t in dp.terms)


def check_prop2(
    p0: DecisionPolynomial,
    p1: DecisionPolynomial,
    *,
    cap: int = 10**6,
) -> bool:
    """True iff p0 + p1 == 1 on every consistent assignment (exhaustive check)."""
    if p0.registry is not p1.registry:
        raise InvalidPolynomial("polynomials must share one registry")
    for assignment in p0.registry.iter_consistent(cap=cap):
        if eval_dp(p0, assignment, check_consistency=False) + eval_dp(p1, assignment, check_consistency=False) != 1:
            return False
    return True


def dps_from_model(model: AnyModel, registry: IndicatorRegistry):
    """Per-class polynomials for any supported model.

    Trees and enumerables give a single (p0, p1) pair; forests give a list
    of per-tree pairs, all over the shared registry.
    """
    if isinstance(model, DecisionTreeModel):
        return dp_from_tree(model, 0, registry), dp_from_tree(model, 1, registry)
    if isinstance(model, (NaiveBayesModel, TruthTable)):
        return enumerable_dps(model, registry, allow_constant_side=True)
    # random forest
    return [(dp_from_tree(t, 0, registry), dp_from_tree(t, 1, registry)) for t in model.trees]
