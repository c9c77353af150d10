"""Fixed-width unit vectors for cleaned summaries.

Two interchangeable sources: a remote sentence-embedding HTTP service, and a
deterministic signed feature-hashing fallback that needs no model weights.
Both produce unit-L2 vectors of the same default width (384) so one model
layout serves either.
"""

import re
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import requests

from .errors import BackendUnavailable, DimensionMismatch, EmptyText

DEFAULT_DIM = 384
SOURCE_REMOTE = "remote"
SOURCE_HASHED = "hashed"

_TOKEN = re.compile(r"[a-z0-9]+")

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


@dataclass(frozen=True)
class EmbeddingVector:
    values: np.ndarray
    source: str

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])


def tokenize(text: str) -> list[str]:
    """Lowercase maximal alphanumeric runs."""
    return _TOKEN.findall(text.lower())


def _fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h


def embed_hashed(text: str, dim: int = DEFAULT_DIM) -> EmbeddingVector:
    """Signed bag-of-words feature hashing, L2-normalized.

    Each token hashes (FNV-1a, 64-bit) to a bucket ``h mod dim`` with sign
    +1 when the top hash bit is clear, -1 otherwise; the token's occurrence
    count accumulates there. Pure in (text, dim) and invariant under token
    order.
    """
    counts = Counter(tokenize(text))
    if not counts:
        raise EmptyText(f"no tokens in {text!r}")
    values = np.zeros(dim, dtype=float)
    for token, count in counts.items():
        h = _fnv1a64(token.encode("utf-8"))
        sign = 1.0 if (h >> 63) == 0 else -1.0
        values[h % dim] += sign * count
    norm = float(np.linalg.norm(values))
    if norm == 0.0:
        # only reachable when hash collisions cancel every bucket exactly
        raise EmptyText(f"token buckets of {text!r} cancelled to zero")
    return EmbeddingVector(values / norm, SOURCE_HASHED)


def embed_hashed_batch(texts: list[str], dim: int = DEFAULT_DIM) -> list[EmbeddingVector]:
    return [embed_hashed(t, dim) for t in texts]


def _normalize_rows(matrix: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    if np.any(norms == 0.0):
        raise EmptyText("embedding service returned a zero vector")
    return matrix / norms


def embed_remote(
    endpoint: str,
    texts: list[str],
    dim: int = DEFAULT_DIM,
    timeout: float = 60.0,
    batch_size: int = 64,
    parallelism: int = 4,
) -> list[EmbeddingVector]:
    """Embed texts via ``POST {"texts": [...]} -> {"vectors": [[...]]}``.

    Order-preserving; vectors are re-normalized locally no matter what the
    service returns.
    """
    for text in texts:
        if not text:
            raise EmptyText("cannot embed an empty text")
    if not texts:
        return []

    batches = [texts[i : i + batch_size] for i in range(0, len(texts), batch_size)]

    def fetch(batch: list[str]) -> np.ndarray:
        try:
            response = requests.post(endpoint, json={"texts": batch}, timeout=timeout)
            response.raise_for_status()
            payload = response.json()
        except requests.RequestException as exc:
            raise BackendUnavailable(f"embedding service unreachable: {exc}") from exc
        except ValueError as exc:
            raise BackendUnavailable(
                f"embedding service sent non-JSON response: {exc}"
            ) from exc
        vectors = payload.get("vectors") if isinstance(payload, dict) else None
        if not isinstance(vectors, list) or len(vectors) != len(batch):
            raise BackendUnavailable(
                "embedding service response lacks one vector per text"
            )
        matrix = np.asarray(vectors, dtype=float)
        if matrix.ndim != 2 or matrix.shape[1] != dim:
            got = matrix.shape[1] if matrix.ndim == 2 else "ragged"
            raise DimensionMismatch(f"expected dimension {dim}, service sent {got}")
        return _normalize_rows(matrix)

    with ThreadPoolExecutor(max_workers=max(1, parallelism)) as pool:
        results = list(pool.map(fetch, batches))
    stacked = np.vstack(results)
    return [EmbeddingVector(row, SOURCE_REMOTE) for row in stacked]


def as_matrix(vectors) -> np.ndarray:
    """Stack EmbeddingVectors (or raw rows) into an (n, dim) float matrix."""
    rows = [v.values if isinstance(v, EmbeddingVector) else np.asarray(v, float) for v in vectors]
    if not rows:
        return np.empty((0, DEFAULT_DIM))
    return np.vstack(rows)
