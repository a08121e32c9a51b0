"""Write the toy model artifacts under fixtures/ used by the CLI examples.

Run from the repository root:  python demos/00_build_fixtures.py
"""

import json
import os

from cfx.interface.artifacts import canonical_bytes, serialize_model
from cfx.models import DecisionTreeModel, Feature, NaiveBayesModel, Predicate, RandomForestModel, TreeNode

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURES = os.path.join(HERE, "..", "fixtures")

L = TreeNode.leaf
S = TreeNode.split


def le(feature, threshold):
    return Predicate(feature, "le", threshold=float(threshold))


def eq(feature, category):
    return Predicate(feature, "eq", category=category)


def two_feature_tree():
    features = (Feature("X1", "continuous"), Feature("X2", "continuous"))
    root = S(le("X1", 10), S(le("X2", 50), L(1), L(0)), S(le("X2", 20), L(1), L(0)))
    return DecisionTreeModel(root, features), {"X1": 5, "X2": 30}


def three_tree_forest():
    features = tuple(Feature(n, "continuous") for n in ("X1", "X2", "X3"))
    t1 = DecisionTreeModel(S(le("X2", 1), S(le("X3", 2), L(1), L(0)), S(le("X3", 10), L(1), L(0))), features)
    t2 = DecisionTreeModel(S(le("X1", 5), S(le("X2", 2), L(1), L(0)), L(0)), features)
    t3 = DecisionTreeModel(S(le("X1", 3), S(le("X3", 5), L(1), L(0)), S(le("X2", 6), L(0), L(1))), features)
    return RandomForestModel((t1, t2, t3), features), {"X1": 3, "X2": 1, "X3": 2}


def ballot_nbc(n_votes=12, informative=(2, 3, 4, 10)):
    features = tuple(Feature(f"vote{i + 1}", "categorical", ("-", "+")) for i in range(n_votes))
    cpt = {}
    strengths = {2: 0.8, 3: 0.9, 4: 0.75, 10: 0.85}
    for i, f in enumerate(features):
        if i in informative:
            s = strengths[i]
            cpt[f.name] = {"-": (s, 1 - s), "+": (1 - s, s)}
        else:
            cpt[f.name] = {"-": (0.5, 0.5), "+": (0.5, 0.5)}
    model = NaiveBayesModel(features, (0.5, 0.5), cpt)
    factual = {f.name: "+" for f in features}
    return model, factual


def screening_tree():
    features = (
        Feature("sex", "categorical", ("Male", "Female")),
        Feature("age", "continuous"),
        Feature("juvenile_felonies", "continuous"),
        Feature("prior_crimes", "continuous"),
    )
    # high-score (1) when young with priors, when any juvenile felonies,
    # or -- an embedded bias -- when female with priors
    root = S(
        le("juvenile_felonies", 0),
        S(
            le("prior_crimes", 2),
            S(le("age", 25), S(eq("sex", "Male"), L(0), L(1)), L(0)),
            S(le("age", 40), L(1), S(eq("sex", "Male"), L(0), L(1))),
        ),
        L(1),
    )
    model = DecisionTreeModel(root, features)
    factual = {"sex": "Male", "age": 33, "juvenile_felonies": 0, "prior_crimes": 2}
    return model, factual


SCREENING_CSV = """sex,age,juvenile_felonies,prior_crimes
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


def write(name, payload_bytes):
    os.makedirs(FIXTURES, exist_ok=True)
    path = os.path.join(FIXTURES, name)
    with open(path, "wb") as fh:
        fh.write(payload_bytes)
    print(f"wrote {os.path.relpath(path)}")


def main():
    dt, dt_point = two_feature_tree()
    write("decision_tree.json", canonical_bytes(serialize_model(dt)))
    write("dt_instance.json", json.dumps(dt_point, indent=2).encode() + b"\n")

    rf, rf_point = three_tree_forest()
    write("random_forest.json", canonical_bytes(serialize_model(rf)))
    write("rf_instance.json", json.dumps(rf_point, indent=2).encode() + b"\n")

    nb, nb_point = ballot_nbc()
    write("ballot_nbc.json", canonical_bytes(serialize_model(nb)))
    write("nb_instance.json", json.dumps(nb_point, indent=2).encode() + b"\n")

    sc, sc_point = screening_tree()
    write("screening_tree.json", canonical_bytes(serialize_model(sc)))
    write("screening_instance.json", json.dumps(sc_point, indent=2).encode() + b"\n")
    write("screening.csv", SCREENING_CSV.encode())


if __name__ == "__main__":
    main()
