"""Prime implicants of a vote-style naive Bayes classifier.

Twelve binary votes, four of which carry signal (the rest are pure noise).
Enumerating the joint table gives thousands of raw terms; merging terms
that differ in one irrelevant vote collapses the polynomial down to the
informative votes.  Maximizing the number of changeable features then
yields the prime implicants, and a keep-toggle gives conditional ones.
"""

from cfx import brute_pi, build_registry, evaluate, prime_implicants
from cfx.models import Feature, NaiveBayesModel
from cfx.polynomial import enumerable_dps

strengths = {2: 0.8, 3: 0.9, 4: 0.75, 10: 0.85}
features = tuple(Feature(f"vote{i + 1}", "categorical", ("-", "+")) for i in range(12))
cpt = {}
for i, f in enumerate(features):
    if i in strengths:
        s = strengths[i]
        cpt[f.name] = {"-": (s, 1 - s), "+": (1 - s, s)}
    else:
        cpt[f.name] = {"-": (0.5, 0.5), "+": (0.5, 0.5)}
model = NaiveBayesModel(features, (0.5, 0.5), cpt)
factual = {f.name: "+" for f in features}

print("factual votes:", "".join("+" if factual[f.name] == "+" else "-" for f in features))
print("prediction:", evaluate(model, factual))

registry = build_registry(model)
raw0, raw1 = enumerable_dps(model, registry, reduce=False, allow_constant_side=True)
red0, red1 = enumerable_dps(model, registry, allow_constant_side=True)
print(f"\n0-polynomial: {len(raw0.terms)} enumerated terms -> {len(red0.terms)} after merging")
print(f"1-polynomial: {len(raw1.terms)} enumerated terms -> {len(red1.terms)} after merging")
print("merged 1-polynomial:", red1)

pi = prime_implicants(model, factual)
print(f"\nprime implicants (keep these, flip anything else): {', '.join(pi.implicants)}")
print(f"changeable features: {len(pi.changed)} of {len(features)}")
print("universal property verified:", pi.verified)

brute = brute_pi(model, factual)
print("exhaustive maximum changeable:", brute.max_changed, "- matches the ILP")

conditional = prime_implicants(model, factual, keep=("vote1",))
print(f"\nconditional (vote1 kept): {', '.join(conditional.implicants)}")
print("universal property verified:", conditional.verified)
