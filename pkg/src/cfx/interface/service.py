"""Threaded HTTP service exposing the explanation pipelines.

Endpoints (JSON in/out unless noted)::

    GET  /v1/health                               -> {"status": "ok"}
    POST /v1/models               (artifact JSON) -> {"id", "type", "created_at"}
    GET  /v1/models                               -> {"models": [...]}
    GET  /v1/models/{id}                          -> artifact JSON
    POST /v1/models/{id}/predict                  -> {"class", "model_id"}
    POST /v1/models/{id}/counterfactual           -> ExplanationFile
    POST /v1/models/{id}/robustness               -> ExplanationFile
    POST /v1/models/{id}/prime-implicants         -> ExplanationFile
    POST /v1/datasets             (text/csv)      -> {"id"}

Status codes: 400 validation, 404 unknown id, 413 cap exceeded,
422 infeasible.  Every response carries permissive CORS headers so the
browser explorer can talk to it directly.
"""

from __future__ import annotations

import json
import re
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from ..errors import CapExceeded, CfxError, EnumerationCapExceeded, Infeasible
from ..models import evaluate, validate_instance
from .artifacts import canonical_bytes, parse_csv_dataset, parse_instance
from .runner import run_request
from .store import ModelStore

DEFAULT_PORT = 8321


def _status_for(exc: Exception) -> int:
    if isinstance(exc, Infeasible):
        return 422
    if isinstance(exc, (CapExceeded, EnumerationCapExceeded)):
        return 413
    if isinstance(exc, (CfxError, ValueError, KeyError, TypeError, json.JSONDecodeError)):
        return 400
    return 500


class _Handler(BaseHTTPRequestHandler):
    store: ModelStore  # set by make_server
    protocol_version = "HTTP/1.1"

    # -- plumbing --------------------------------------------------------

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send(self, status: int, body: bytes, content_type: str = "application/json") -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()
        self.wfile.write(body)

    def _send_json(self, status: int, payload: dict) -> None:
        self._send(status, canonical_bytes(payload))

    def _body(self) -> bytes:
        length = int(self.headers.get("Content-Length") or 0)
        return self.rfile.read(length) if length else b""

    def _json_body(self) -> dict:
        raw = self._body()
        if not raw:
            return {}
        return json.loads(raw.decode("utf-8"))

    # -- routing -----------------------------------------------------------

    def do_OPTIONS(self):
        self._send(204, b"")

    def do_GET(self):
        try:
            if self.path == "/v1/health":
                return self._send_json(200, {"status": "ok"})
            if self.path == "/v1/models":
                return self._send_json(200, {"models": self.store.list_models()})
            m = re.fullmatch(r"/v1/models/([0-9a-f]{64})", self.path)
            if m:
                model_id = m.group(1)
                if not self.store.has_model(model_id):
                    return self._send_json(404, {"error": "unknown model id"})
                return self._send(200, self.store.model_bytes(model_id))
            return self._send_json(404, {"error": "no such route"})
        except Exception as exc:  # noqa: BLE001 - boundary
            self._send_json(_status_for(exc), {"error": type(exc).__name__, "detail": str(exc)})

    def do_POST(self):
        try:
            if self.path == "/v1/models":
                meta = self.store.put_model(self._body())
                return self._send_json(200, meta)
            if self.path == "/v1/datasets":
                dataset_id = self.store.put_dataset(self._body())
                return self._send_json(200, {"id": dataset_id})
            m = re.fullmatch(r"/v1/models/([0-9a-f]{64})/([a-z-]+)", self.path)
            if not m:
                return self._send_json(404, {"error": "no such route"})
            model_id, action = m.groups()
            if not self.store.has_model(model_id):
                return self._send_json(404, {"error": "unknown model id"})
            model = self.store.load_model(model_id)
            body = self._json_body()
            if action == "predict":
                instance = parse_instance(body.get("instance", body))
                validate_instance(model, instance)
                return self._send_json(200, {"model_id": model_id, "class": evaluate(model, instance)})
            kind_map = {
                "counterfactual": "explain",
                "robustness": "robustness",
                "prime-implicants": "pi",
            }
            if action not in kind_map:
                return self._send_json(404, {"error": f"no such action {action!r}"})
            body = dict(body)
            body.setdefault("kind", kind_map[action])
            if body["kind"] == "explain" and int(body.get("k", 1)) > 1:
                body["kind"] = "diverse"
            dataset = None
            if body.get("dataset_id"):
                if not self.store.has_dataset(body["dataset_id"]):
                    return self._send_json(404, {"error": "unknown dataset id"})
                dataset = parse_csv_dataset(self.store.dataset_text(body["dataset_id"]), model.features)
            payload = run_request(model, model_id, body, dataset=dataset)
            return self._send_json(200, payload)
        except Exception as exc:  # noqa: BLE001 - boundary
            self._send_json(_status_for(exc), {"error": type(exc).__name__, "detail": str(exc)})


def make_server(port: int, model_dir: str) -> ThreadingHTTPServer:
    """Bound, ready-to-serve HTTP server; call ``serve_forever`` on it."""
    handler = type("Handler", (_Handler,), {"store": ModelStore(model_dir)})
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def serve(port: int, model_dir: str) -> None:
    server = make_server(port, model_dir)
    try:
        server.serve_forever()
    finally:
        server.server_close()
