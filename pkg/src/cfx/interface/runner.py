"""Shared request runner: one code path behind both the CLI and the service.

A request is a plain dict (the HTTP body format); the CLI translates its
flags into the same dict, so identical requests produce byte-identical
explanation documents through :func:`cfx.interface.artifacts.canonical_bytes`.
"""

from __future__ import annotations

from fractions import Fraction

from .._intervals import INF
from ..errors import InvalidModel, MissingColumn
from ..explainer import (
    CounterfactualSet,
    counterfactual,
    diverse_counterfactual,
    prime_implicants,
    robustness,
    verify_region,
)
from ..ilp_solver import SolverConfig
from ..models import AnyModel, evaluate, model_kind, validate_instance, validate_model
from ..encoder import build_registry
from ..weights import Dataset, WeightVector, explicit_weights, mad_rule_weights, std_weights, uniform_weights
from .artifacts import SCHEMA_EXPLANATION, parse_condition, parse_instance

KINDS = ("explain", "diverse", "robustness", "pi")


def _fraction_json(x: Fraction) -> list[int]:
    return [x.numerator, x.denominator]


def _weights_for(model: AnyModel, scheme: str, explicit: dict | None, dataset: Dataset | None) -> WeightVector:
    registry = build_registry(model)
    if scheme == "explicit":
        if not explicit:
            raise InvalidModel("scheme 'explicit' needs a weights map")
        return explicit_weights(registry, explicit)
    if scheme == "uniform":
        return uniform_weights(registry)
    if dataset is None:
        raise MissingColumn(f"weight scheme {scheme!r} needs a dataset")
    if scheme == "mad":
        return mad_rule_weights(registry, dataset)
    if scheme == "std":
        return std_weights(registry, dataset)
    raise InvalidModel(f"unknown weight scheme {scheme!r}")


def _feature_condition_json(cond) -> dict:
    out = {"feature": cond.feature, "changed": cond.changed, "factual": cond.factual_value}
    if cond.kind == "unchanged":
        out["op"] = "unchanged"
        out["value"] = cond.factual_value
    elif cond.kind == "category":
        out["op"] = "eq"
        out["value"] = cond.category
    else:
        iv = cond.interval
        if iv.lo == -INF and iv.hi == INF:
            out["op"] = "unchanged"
            out["value"] = cond.factual_value
        elif iv.lo == -INF:
            out["op"] = "lt" if iv.hi_open else "le"
            out["value"] = iv.hi
        elif iv.hi == INF:
            out["op"] = "gt" if iv.lo_open else "ge"
            out["value"] = iv.lo
        else:
            out["op"] = "in_interval"
            out["lo"] = iv.lo
            out["hi"] = iv.hi
            out["lo_open"] = iv.lo_open
            out["hi_open"] = iv.hi_open
    return out


def _result_json(model: AnyModel, result: CounterfactualSet, seed: int) -> dict:
    ok = verify_region(model, result, n_samples=100, seed=seed)
    return {
        "objective": float(result.objective_value),
        "objective_exact": _fraction_json(result.objective_value),
        "conditions": [_feature_condition_json(c) for c in result.conditions],
        "assignment": _assignment_json(result),
        "validity_check": {"samples": 100, "passed": ok, "seed": seed},
    }


def _assignment_json(result: CounterfactualSet) -> dict:
    return {str(i): v for i, v in enumerate(result.indicator_assignment)}


def normalize_request(body: dict) -> dict:
    """Fill defaults and drop irrelevant keys; this is what gets echoed."""
    kind = body.get("kind", "explain")
    if kind not in KINDS:
        raise InvalidModel(f"unknown request kind {kind!r}")
    out = {
        "kind": kind,
        "instance": parse_instance(body["instance"]),
        "seed": int(body.get("seed", 0)),
    }
    if kind in ("explain", "diverse"):
        out["scheme"] = body.get("scheme", "uniform")
        out["target"] = body.get("target", "auto")
        out["conditions"] = list(body.get("conditions", []))
        out["k"] = int(body.get("k", 1)) if kind == "diverse" else 1
        if body.get("weights"):
            out["scheme"] = "explicit"
            out["weights"] = dict(body["weights"])
        if body.get("dataset_id"):
            out["dataset_id"] = body["dataset_id"]
    elif kind == "pi":
        out["keep"] = [str(f) for f in body.get("keep", [])]
    return out


def run_request(
    model: AnyModel,
    model_ref: str,
    body: dict,
    *,
    dataset: Dataset | None = None,
    time_limit: float | None = None,
) -> dict:
    """Execute one explanation request and build the ExplanationFile payload."""
    request = normalize_request(body)
    instance = request["instance"]
    validate_model(model)
    validate_instance(model, instance)
    seed = request["seed"]
    config = SolverConfig(time_limit=time_limit) if time_limit else None
    prediction = evaluate(model, instance)

    payload = {
        "schema": SCHEMA_EXPLANATION,
        "kind": request["kind"],
        "request": {**request, "model": model_ref},
        "model_type": model_kind(model),
        "prediction": prediction,
    }

    kind = request["kind"]
    if kind in ("explain", "diverse"):
        conditions = [parse_condition(c) for c in request.get("conditions", [])]
        weights = _weights_for(model, request["scheme"], request.get("weights"), dataset)
        target = request["target"]
        if target != "auto":
            target = int(target)
        k = request.get("k", 1)
        if kind == "diverse" or k > 1:
            results = diverse_counterfactual(
                model, instance, weights=weights, conditions=conditions, k=k, target=target, config=config
            )
        else:
            results = [counterfactual(model, instance, weights=weights, target=target, conditions=conditions, config=config)]
        first = results[0]
        payload["target_class"] = first.target_class
        payload.update(_result_json(model, first, seed))
        payload["alternatives"] = [_result_json(model, r, seed + i + 1) for i, r in enumerate(results[1:])]
        payload["weights"] = {label: _fraction_json(w) for label, w in weights.labeled().items()}
        payload["solver_stats"] = first.solver_info
    elif kind == "robustness":
        rob = robustness(model, instance, config=config)
        payload["target_class"] = rob.witness.target_class
        payload.update(_result_json(model, rob.witness, seed))
        payload["robustness"] = rob.value
        payload["weights"] = {label: [1, 1] for label in uniform_weights(build_registry(model)).labeled()}
        payload["solver_stats"] = rob.witness.solver_info
    else:  # pi
        pi = prime_implicants(model, instance, keep=request.get("keep", ()), config=config)
        payload["target_class"] = prediction
        payload["prime_implicants"] = {
            "kept": list(pi.implicants),
            "changed": list(pi.changed),
            "verified": pi.verified,
            "verification_skipped": pi.verification_skipped,
            "max_changed": int(pi.objective_value),
        }
        payload["objective"] = float(pi.objective_value)
        payload["objective_exact"] = _fraction_json(pi.objective_value)
        payload["assignment"] = {str(i): v for i, v in enumerate(pi.indicator_assignment)}
        payload["solver_stats"] = pi.solver_info
    return payload
