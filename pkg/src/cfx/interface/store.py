"""Flat-directory model and dataset store keyed by content hash."""

from __future__ import annotations

import json
import os
import tempfile
import time

from ..errors import InvalidModel
from ..models import AnyModel
from .artifacts import content_hash, parse_model


class ModelStore:
    """Artifacts under ``root/models``, datasets under ``root/datasets``.

    Ids are sha256 hex digests of the uploaded bytes, so re-uploading
    identical content is idempotent.  Writes are atomic (tmp + rename).
    """

    def __init__(self, root: str):
        self.root = root
        self.model_dir = os.path.join(root, "models")
        self.dataset_dir = os.path.join(root, "datasets")
        os.makedirs(self.model_dir, exist_ok=True)
        os.makedirs(self.dataset_dir, exist_ok=True)

    # -- models ---------------------------------------------------------

    def put_model(self, raw: bytes) -> dict:
        model = parse_model(json.loads(raw.decode("utf-8")))  # validate before storing
        model_id = content_hash(raw)
        path = os.path.join(self.model_dir, f"{model_id}.json")
        meta_path = os.path.join(self.model_dir, f"{model_id}.meta.json")
        if not os.path.exists(path):
            _atomic_write(path, raw)
            meta = {
                "id": model_id,
                "type": json.loads(raw.decode("utf-8")).get("type"),
                "created_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            }
            _atomic_write(meta_path, json.dumps(meta, sort_keys=True).encode())
        return self.model_meta(model_id)

    def model_meta(self, model_id: str) -> dict:
        meta_path = os.path.join(self.model_dir, f"{model_id}.meta.json")
        with open(meta_path, "rb") as fh:
            return json.loads(fh.read().decode("utf-8"))

    def has_model(self, model_id: str) -> bool:
        return os.path.exists(os.path.join(self.model_dir, f"{model_id}.json"))

    def model_bytes(self, model_id: str) -> bytes:
        path = os.path.join(self.model_dir, f"{model_id}.json")
        with open(path, "rb") as fh:
            return fh.read()

    def load_model(self, model_id: str) -> AnyModel:
        return parse_model(json.loads(self.model_bytes(model_id).decode("utf-8")))

    def list_models(self) -> list[dict]:
        out = []
        for name in sorted(os.listdir(self.model_dir)):
            if name.endswith(".meta.json"):
                with open(os.path.join(self.model_dir, name), "rb") as fh:
                    out.append(json.loads(fh.read().decode("utf-8")))
        return out

    # -- datasets ---------------------------------------------------------

    def put_dataset(self, raw: bytes) -> str:
        if not raw.strip():
            raise InvalidModel("dataset upload is empty")
        dataset_id = content_hash(raw)
        path = os.path.join(self.dataset_dir, f"{dataset_id}.csv")
        if not os.path.exists(path):
            _atomic_write(path, raw)
        return dataset_id

    def has_dataset(self, dataset_id: str) -> bool:
        return os.path.exists(os.path.join(self.dataset_dir, f"{dataset_id}.csv"))

    def dataset_text(self, dataset_id: str) -> str:
        with open(os.path.join(self.dataset_dir, f"{dataset_id}.csv"), "r", encoding="utf-8", newline="") as fh:
            return fh.read()


def _atomic_write(path: str, data: bytes) -> None:
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
