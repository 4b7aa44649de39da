"""Loading externally produced dense embeddings and cosine similarity.

The interchange format is line-delimited JSON, one row per (id, field):

    {"id": "...", "field": "context|question|answer|rubric_fc", "vector": [...]}

Lines starting with '#' are header comments (the producer records its model
id, pooling and normalization there) and are skipped; a comment holding a
JSON object is parsed into ``EmbeddingTable.meta``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import EmbeddingError

EMBEDDING_FIELDS = ("context", "question", "answer", "rubric_fc")


@dataclass
class EmbeddingTable:
    """Immutable lookup of (datapoint id, field) -> dense vector."""

    dim: int
    entries: dict[tuple[str, str], np.ndarray]
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def vector(self, item_id: str, field_name: str) -> np.ndarray:
        key = (item_id, field_name)
        if key not in self.entries:
            raise EmbeddingError(f"missing embedding for id={item_id!r} field={field_name!r}")
        return self.entries[key]


def load_embeddings(path: str | Path) -> EmbeddingTable:
    """Load an embedding table; the dimension is inferred from the first row.

    Raises EmbeddingError on a dimension mismatch, a non-finite component, a
    duplicate (id, field) key, or an unknown field name.
    """
    path = Path(path)
    if not path.is_file():
        raise EmbeddingError(f"embedding file not found: {path}")
    entries: dict[tuple[str, str], np.ndarray] = {}
    meta: dict = {}
    dim: int | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            where = f"{path.name}:{lineno}"
            if line.startswith("#"):
                comment = line.lstrip("#").strip()
                if comment.startswith("{"):
                    try:
                        meta.update(json.loads(comment))
                    except json.JSONDecodeError:
                        pass  # free-form comment
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise EmbeddingError(f"{where}: invalid JSON ({exc.msg})") from exc
            if not isinstance(record, dict) or not {"id", "field", "vector"} <= record.keys():
                raise EmbeddingError(f"{where}: expected fields id/field/vector")
            field_name = record["field"]
            if field_name not in EMBEDDING_FIELDS:
                raise EmbeddingError(f"{where}: unknown field {field_name!r}")
            vector = record["vector"]
            if not isinstance(vector, list) or not vector:
                raise EmbeddingError(f"{where}: vector must be a non-empty list")
            array = np.asarray(vector, dtype=np.float64)
            if array.ndim != 1:
                raise EmbeddingError(f"{where}: vector must be one-dimensional")
            if dim is None:
                dim = array.shape[0]
            elif array.shape[0] != dim:
                raise EmbeddingError(
                    f"{where}: dimension {array.shape[0]} does not match table dimension {dim}"
                )
            if not np.all(np.isfinite(array)):
                raise EmbeddingError(f"{where}: vector has a non-finite component")
            key = (str(record["id"]), field_name)
            if key in entries:
                raise EmbeddingError(f"{where}: duplicate key id={key[0]!r} field={key[1]!r}")
            array.setflags(write=False)
            entries[key] = array
    if dim is None:
        raise EmbeddingError(f"{path}: no embedding rows")
    return EmbeddingTable(dim=dim, entries=entries, meta=meta)


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """u.v / (|u| |v|); 0 if either norm is 0. Dimensions must match."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise EmbeddingError(f"dimension mismatch: {u.shape} vs {v.shape}")
    norm_u = math.sqrt(float(np.dot(u, u)))
    norm_v = math.sqrt(float(np.dot(v, v)))
    if norm_u == 0.0 or norm_v == 0.0:
        return 0.0
    return float(np.dot(u, v)) / (norm_u * norm_v)
