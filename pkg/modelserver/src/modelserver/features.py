"""Deterministic text featurization for the toy models.

Tokens are hashed with SHA-256 (not Python's salted ``hash``) so features
are stable across processes and runs.
"""

from __future__ import annotations

import hashlib
import re

import numpy as np

_TOKEN_RE = re.compile(r"[a-z0-9']+")


def tokens(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def token_id(token: str, size: int, salt: int = 0) -> int:
    digest = hashlib.sha256(f"{salt}:{token}".encode("utf-8")).digest()
    return int.from_bytes(digest[:4], "big") % size


def bow_vector(text: str, dim: int, salt: int = 0) -> np.ndarray:
    """L2-normalized hashed bag of words; zero text maps to a fixed basis."""
    vec = np.zeros(dim, dtype=np.float32)
    for tok in tokens(text):
        digest = hashlib.sha256(f"{salt}:{tok}".encode("utf-8")).digest()
        index = int.from_bytes(digest[:4], "big") % dim
        sign = 1.0 if digest[4] % 2 == 0 else -1.0
        vec[index] += sign
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        vec[0] = 1.0
        return vec
    return vec / norm


def id_sequence(text: str, vocab_size: int, max_len: int, salt: int = 0) -> list[int]:
    """Hashed token ids, padded with 0 (id 0 is reserved for padding)."""
    ids = [1 + token_id(tok, vocab_size - 1, salt) for tok in tokens(text)][:max_len]
    return ids + [0] * (max_len - len(ids))
