"""The ``cfx`` command line.

Subcommands: explain, diverse, robustness, pi, weights, stats,
oracle-check, serve.  Exit codes: 0 success, 2 infeasible, 3 budget
exceeded, 1 usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from ..encoder import build_registry, encoding_stats, export_lp
from ..errors import CapExceeded, CfxError, EnumerationCapExceeded, Infeasible
from ..explainer import build_pipeline
from ..selfcheck import run_oracle_trials
from ..weights import mad_rule_weights, std_weights, uniform_weights
from .artifacts import (
    SCHEMA_WEIGHTS,
    canonical_bytes,
    condition_to_json,
    load_csv_dataset,
    load_instance_file,
    load_model_file,
    parse_fix,
)
from .runner import run_request
from .service import DEFAULT_PORT, serve

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_CAP = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's default 2
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_common(p: argparse.ArgumentParser, *, instance: bool = True, dataset: bool = True):
    p.add_argument("--model", required=True, help="model artifact JSON path")
    if instance:
        p.add_argument("--instance", required=True, help="factual instance JSON path")
    if dataset:
        p.add_argument("--dataset", help="CSV dataset (needed for mad/std weights)")
    p.add_argument("--out", help="write the result document to this path")
    p.add_argument("--seed", type=int, default=0, help="seed for validity sampling")
    p.add_argument("--time-limit", type=float, default=None, help="solver wall-time limit in seconds")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cfx", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, diverse in (("explain", False), ("diverse", True)):
        p = sub.add_parser(name, help="counterfactual explanation" + (" (top-k, with conditions)" if diverse else ""))
        _add_common(p)
        p.add_argument("--scheme", default="uniform", choices=["uniform", "mad", "std"])
        p.add_argument("--weights", help="explicit weights JSON path (overrides --scheme)")
        p.add_argument("--target", default="auto", choices=["auto", "0", "1"])
        p.add_argument("--fix", action="append", default=[], metavar="COND",
                       help="condition: f=v | f!=v | f:lo..hi | f:>x | f:>=x | f:<x | f:<=x")
        if diverse:
            p.add_argument("--k", type=int, default=2)

    p = sub.add_parser("robustness", help="minimum number of indicator flips")
    _add_common(p, dataset=False)

    p = sub.add_parser("pi", help="prime implicants (conditionally with --keep)")
    _add_common(p, dataset=False)
    p.add_argument("--keep", action="append", default=[], metavar="FEATURE",
                   help="feature that must keep its factual value")

    p = sub.add_parser("weights", help="compute an objective weight vector")
    _add_common(p, instance=False)
    p.add_argument("--scheme", default="uniform", choices=["uniform", "mad", "std"])

    p = sub.add_parser("stats", help="encoding statistics (and optional LP export)")
    _add_common(p, dataset=False)
    p.add_argument("--target", default="auto", choices=["auto", "0", "1"])
    p.add_argument("--export-lp", help="write the 0/1 ILP in LP text format")

    p = sub.add_parser("oracle-check", help="randomized solver-vs-oracle agreement trials")
    p.add_argument("--trials", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kinds", default="dt,rf,nbc")
    p.add_argument("--max-vars", type=int, default=22)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--model-dir", default=None)
    return parser


def _emit(payload: dict, out_path: str | None) -> None:
    data = canonical_bytes(payload)
    if out_path:
        with open(out_path, "wb") as fh:
            fh.write(data)
    sys.stdout.write(data.decode("utf-8"))


def _explanation_request(args, kind: str) -> dict:
    body: dict = {"kind": kind, "instance": load_instance_file(args.instance), "seed": args.seed}
    if kind in ("explain", "diverse"):
        body["scheme"] = args.scheme
        body["target"] = args.target if args.target == "auto" else int(args.target)
        body["conditions"] = [condition_to_json(parse_fix(f)) for f in args.fix]
        if getattr(args, "k", None):
            body["k"] = args.k
        if args.weights:
            with open(args.weights, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
            body["weights"] = {
                label: (w[0] / w[1] if isinstance(w, list) else w)
                for label, w in doc.get("weights", doc).items()
            }
    if kind == "pi":
        body["keep"] = args.keep
    return body


def _run_explanation(args, kind: str) -> int:
    model, model_hash = load_model_file(args.model)
    dataset = load_csv_dataset(args.dataset, model.features) if getattr(args, "dataset", None) else None
    body = _explanation_request(args, kind)
    payload = run_request(model, model_hash, body, dataset=dataset, time_limit=args.time_limit)
    _emit(payload, args.out)
    return EXIT_OK


def _run_weights(args) -> int:
    model, model_hash = load_model_file(args.model)
    registry = build_registry(model)
    if args.scheme == "uniform":
        wv = uniform_weights(registry)
    else:
        if not args.dataset:
            raise CfxError(f"--scheme {args.scheme} needs --dataset")
        dataset = load_csv_dataset(args.dataset, model.features)
        wv = mad_rule_weights(registry, dataset) if args.scheme == "mad" else std_weights(registry, dataset)
    payload = {
        "schema": SCHEMA_WEIGHTS,
        "model": model_hash,
        "scheme": args.scheme,
        "weights": {label: [w.numerator, w.denominator] for label, w in wv.labeled().items()},
    }
    _emit(payload, args.out)
    return EXIT_OK


def _run_stats(args) -> int:
    model, model_hash = load_model_file(args.model)
    factual = load_instance_file(args.instance)
    target = args.target if args.target == "auto" else int(args.target)
    pipeline = build_pipeline(model, factual, target=target)
    stats = encoding_stats(pipeline.problem)
    payload = {"model": model_hash, "target_class": pipeline.target_class,
               "polarity": pipeline.polarity, **stats.as_dict()}
    if args.export_lp:
        with open(args.export_lp, "w", encoding="utf-8") as fh:
            fh.write(export_lp(pipeline.problem))
        payload["lp_export"] = args.export_lp
    _emit(payload, args.out)
    return EXIT_OK


def _run_oracle_check(args) -> int:
    kinds = tuple(k.strip() for k in args.kinds.split(",") if k.strip())
    report = run_oracle_trials(args.seed, args.trials, kinds, max_registry_vars=args.max_vars)
    print(f"trials: {report.trials}  agreements: {report.agreements}  "
          f"infeasible-agreements: {report.infeasible_agreements}  failures: {len(report.failures)}")
    for line in report.failures:
        print(f"FAIL {line}")
    return EXIT_OK if report.ok else EXIT_USAGE


def _run_serve(args) -> int:
    port = args.port or int(os.environ.get("CFX_PORT", DEFAULT_PORT))
    model_dir = args.model_dir or os.environ.get("CFX_MODEL_DIR", os.path.join(os.getcwd(), "cfx-models"))
    print(f"cfx service on http://127.0.0.1:{port} (models in {model_dir})")
    serve(port, model_dir)
    return EXIT_OK


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command in ("explain", "diverse"):
            return _run_explanation(args, args.command)
        if args.command == "robustness":
            return _run_explanation(args, "robustness")
        if args.command == "pi":
            return _run_explanation(args, "pi")
        if args.command == "weights":
            return _run_weights(args)
        if args.command == "stats":
            return _run_stats(args)
        if args.command == "oracle-check":
            return _run_oracle_check(args)
        if args.command == "serve":
            return _run_serve(args)
        return EXIT_USAGE
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (CapExceeded, EnumerationCapExceeded) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (CfxError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
