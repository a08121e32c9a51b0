"""Objective weights from data, robustness, and bias probing via conditions.

A screening tree scores reoffense risk from sex, age, juvenile felonies and
prior crimes (with a deliberately planted bias).  Uniform weights give the
robustness; rule-conditioned MAD / inverse-std weights change which region
is nearest; a diversity condition pins the obvious answer and exposes the
planted one.
"""

from cfx import Condition, build_registry, counterfactual, evaluate, robustness
from cfx.interface.artifacts import parse_csv_dataset
from cfx.models import DecisionTreeModel, Feature, Predicate, TreeNode
from cfx.weights import mad_rule_weights, std_weights, uniform_weights

L = TreeNode.leaf
S = TreeNode.split
le = lambda f, t: Predicate(f, "le", threshold=float(t))
eq = lambda f, c: Predicate(f, "eq", category=c)

features = (
    Feature("sex", "categorical", ("Male", "Female")),
    Feature("age", "continuous"),
    Feature("juvenile_felonies", "continuous"),
    Feature("prior_crimes", "continuous"),
)
tree = DecisionTreeModel(
    S(le("juvenile_felonies", 0),
      S(le("prior_crimes", 2),
        S(le("age", 25), S(eq("sex", "Male"), L(0), L(1)), L(0)),
        S(le("age", 40), L(1), S(eq("sex", "Male"), L(0), L(1)))),
      L(1)),
    features,
)
factual = {"sex": "Male", "age": 33, "juvenile_felonies": 0, "prior_crimes": 2}
print("factual:", factual, "->", evaluate(tree, factual), "(low score)")

rob = robustness(tree, factual)
print(f"\nrobustness (min indicator flips to change the score): {rob.value}")
for cond in rob.witness.conditions:
    if cond.changed:
        print("   flip:", cond.describe())

csv_text = """sex,age,juvenile_felonies,prior_crimes
Male,23,0,0
Male,31,0,2
Female,27,1,3
Male,45,0,1
Female,38,0,0
Male,19,2,4
Male,52,0,2
Female,24,0,1
Male,36,1,5
Female,41,0,2
Male,29,0,3
Female,33,0,0
"""
registry = build_registry(tree)
dataset = parse_csv_dataset(csv_text, features)
for name, scheme in (("uniform", uniform_weights(registry)),
                     ("inverse rule MAD", mad_rule_weights(registry, dataset)),
                     ("inverse std", std_weights(registry, dataset))):
    if name == "uniform":
        res = counterfactual(tree, factual)
    else:
        res = counterfactual(tree, factual, weights=scheme)
    changed = ", ".join(c.describe() for c in res.conditions if c.changed)
    print(f"\n{name:>16} weights -> cost {float(res.objective_value):.3f}: {changed}")

print("\npinning the record clean (juvenile felonies = 0, prior crimes = 2)")
print("removes the obvious flips and exposes the planted bias:")
steered = counterfactual(
    tree,
    factual,
    conditions=[
        Condition.equals("juvenile_felonies", 0),
        Condition.equals("prior_crimes", 2),
    ],
)
for cond in steered.conditions:
    marker = "  * " if cond.changed else "    "
    print(marker + cond.describe())
print(f"(cost {steered.objective_value}: the model would score a young woman high"
      " on an otherwise identical record)")
