"""CLI, HTTP service, model store and serialization formats."""

from .artifacts import (
    canonical_bytes,
    content_hash,
    load_csv_dataset,
    load_instance_file,
    load_model_file,
    parse_condition,
    parse_csv_dataset,
    parse_fix,
    parse_instance,
    parse_model,
    serialize_model,
)
from .cli import main, run
from .runner import normalize_request, run_request
from .service import make_server, serve
from .store import ModelStore

__all__ = [
    "ModelStore",
    "canonical_bytes",
    "content_hash",
    "load_csv_dataset",
    "load_instance_file",
    "load_model_file",
    "main",
    "make_server",
    "normalize_request",
    "parse_condition",
    "parse_csv_dataset",
    "parse_fix",
    "parse_instance",
    "parse_model",
    "run",
    "run_request",
    "serialize_model",
    "serve",
]
