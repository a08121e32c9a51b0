"""Exact counterfactual explanations for multilinear classifiers.

Decision trees, majority-vote forests and enumerable Bayes classifiers are
compiled into decision polynomials, then into 0/1 integer linear programs,
solved exactly by branch and bound, and decoded back into counterfactual
regions, robustness values and prime-implicant explanations.
"""

from . import errors
from ._intervals import Interval
from ._registry import IndicatorRegistry, ThresholdIndex
from .encoder import (
    Condition,
    IlpProblem,
    LinearConstraint,
    apply_conditions,
    build_objective,
    build_registry,
    encode_consistency,
    encode_force_one,
    encode_force_zero,
    encode_forest,
    encode_onehot,
    encode_tree_indicator,
    encoding_stats,
    export_lp,
    new_problem,
)
from .explainer import (
    CounterfactualSet,
    FeatureCondition,
    PrimeImplicantResult,
    RobustnessResult,
    counterfactual,
    decode_solution,
    diverse_counterfactual,
    prime_implicants,
    robustness,
    verify_region,
)
from .ilp_solver import Solution, SolverConfig, enumerate_topk, solve
from .models import (
    DecisionTreeModel,
    Feature,
    NaiveBayesModel,
    Predicate,
    RandomForestModel,
    TreeNode,
    TruthTable,
    enumerate_paths,
    evaluate,
    validate_instance,
    validate_model,
)
from .oracle import brute_counterfactual, brute_pi, check_universal_pi, enumerate_consistent
from .polynomial import (
    DecisionPolynomial,
    Term,
    check_prop2,
    dp_from_enumerable,
    dp_from_tree,
    eval_dp,
    reduce_dp,
)
from .weights import Dataset, WeightVector, mad_rule_weights, std_weights, uniform_weights

__version__ = "0.1.0"

__all__ = [
    "Condition",
    "CounterfactualSet",
    "Dataset",
    "DecisionPolynomial",
    "DecisionTreeModel",
    "Feature",
    "FeatureCondition",
    "IlpProblem",
    "IndicatorRegistry",
    "Interval",
    "LinearConstraint",
    "NaiveBayesModel",
    "Predicate",
    "PrimeImplicantResult",
    "RandomForestModel",
    "RobustnessResult",
    "Solution",
    "SolverConfig",
    "Term",
    "ThresholdIndex",
    "TreeNode",
    "TruthTable",
    "WeightVector",
    "apply_conditions",
    "brute_counterfactual",
    "brute_pi",
    "build_objective",
    "build_registry",
    "check_prop2",
    "check_universal_pi",
    "counterfactual",
    "decode_solution",
    "diverse_counterfactual",
    "dp_from_enumerable",
    "dp_from_tree",
    "encode_consistency",
    "encode_force_one",
    "encode_force_zero",
    "encode_forest",
    "encode_onehot",
    "encode_tree_indicator",
    "encoding_stats",
    "enumerate_consistent",
    "enumerate_paths",
    "enumerate_topk",
    "errors",
    "eval_dp",
    "evaluate",
    "export_lp",
    "mad_rule_weights",
    "new_problem",
    "prime_implicants",
    "reduce_dp",
    "robustness",
    "solve",
    "std_weights",
    "uniform_weights",
    "validate_instance",
    "validate_model",
    "verify_region",
]
