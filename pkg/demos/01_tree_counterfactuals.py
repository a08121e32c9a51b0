"""A decision tree, its decision polynomials, and counterfactual regions.

The tree below classifies (X1, X2) by two threshold rules per branch.  We
read off both decision polynomials, compile the "must be class 0" system
into a 0/1 ILP, and decode the optimum back into an infinite counterfactual
region.  Then we steer the answer with a diversity condition.
"""

from cfx import (
    Condition,
    build_registry,
    counterfactual,
    diverse_counterfactual,
    dp_from_tree,
    evaluate,
)
from cfx.models import DecisionTreeModel, Feature, Predicate, TreeNode

L = TreeNode.leaf
S = TreeNode.split
le = lambda f, t: Predicate(f, "le", threshold=float(t))

features = (Feature("X1", "continuous"), Feature("X2", "continuous"))
tree = DecisionTreeModel(
    S(le("X1", 10), S(le("X2", 50), L(1), L(0)), S(le("X2", 20), L(1), L(0))),
    features,
)
factual = {"X1": 5.0, "X2": 30.0}

print("factual:", factual, "->", evaluate(tree, factual))

registry = build_registry(tree)
print("\nindicator variables:", [str(p) for p in registry.predicates])
print("1-polynomial:", dp_from_tree(tree, 1, registry))
print("0-polynomial:", dp_from_tree(tree, 0, registry))

result = counterfactual(tree, factual)
print(f"\nnearest class-{result.target_class} region (cost {result.objective_value}):")
for cond in result.conditions:
    print("  ", cond.describe())

print("\ntop-2 diverse counterfactuals:")
for i, res in enumerate(diverse_counterfactual(tree, factual, k=2), 1):
    changed = ", ".join(c.describe() for c in res.conditions if c.changed)
    print(f"  #{i} cost {res.objective_value}: {changed}")

print("\nwith the condition X2 <= 50 the X2-flip family disappears:")
steered = diverse_counterfactual(tree, factual, conditions=[Condition.less_equal("X2", 50)], k=1)[0]
for cond in steered.conditions:
    print("  ", cond.describe())
