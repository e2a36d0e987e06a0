"""Client for the neural model service, with an offline stub.

Wire protocol (JSON over HTTP):

    POST /v1/embed     {"texts": [str]}                      -> {"vectors": [[float]]}
    POST /v1/pair      {"question", "sentence", "model"}     -> {"label", "p_relevant"}
    POST /v1/nli       {"premise", "labels": [str]}          -> {"label", "scores": [float]}
    POST /v1/moods     {"sentence"}                          -> {"imperative", "interrogative", "indicative"}
    POST /v1/summarize {"text", "family", "aspect",
                        "strategy", "max_len"}               -> {"summary"}
    GET  /v1/health                                          -> {"status", "models": [str]}

Offline mode answers every call deterministically from seeded hashes and
token-overlap rules, so the whole pipeline runs with no service at all.
Responses are cached on disk when ``cache_dir`` is set (key: SHA-256 of the
endpoint plus canonical request body); every request here is idempotent, so
retries with exponential backoff are safe.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
import re
import time
from dataclasses import dataclass
from pathlib import Path

import requests


class GatewayError(RuntimeError):
    """Model-service call failed (after retries) or returned garbage."""


@dataclass
class GatewayConfig:
    base_url: str = "http://127.0.0.1:8752"
    timeout: float = 30.0
    max_retries: int = 2
    batch_size: int = 16
    cache_dir: str | Path | None = None
    mode: str = "offline"  # "live" or "offline"
    stub_seed: int = 0
    stub_dim: int = 64

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.mode not in ("live", "offline"):
            raise ValueError(f"unknown gateway mode: {self.mode!r}")


_TOKEN_RE = re.compile(r"[a-z0-9']+")


def _tokens(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


class GatewayClient:
    """Thread-safe inference client; one instance per configuration."""

    def __init__(self, config: GatewayConfig = GatewayConfig()):
        from .lingfeat import RuleMoodProvider  # deferred: lingfeat imports us

        self.config = config
        self.service_calls = 0  # actual dispatches, i.e. cache misses
        self._moods = RuleMoodProvider()
        if config.cache_dir:
            Path(config.cache_dir).mkdir(parents=True, exist_ok=True)

    # -- public API ---------------------------------------------------------

    def embed(self, texts: list[str]) -> list[list[float]]:
        """One unit-norm vector per text, batched by config.batch_size."""
        if not texts:
            raise ValueError("embed requires at least one text")
        vectors: list[list[float]] = []
        size = self.config.batch_size
        for batch_index, start in enumerate(range(0, len(texts), size)):
            batch = texts[start : start + size]
            response = self._request(
                "/v1/embed", {"texts": batch}, batch_index=batch_index
            )
            vectors.extend(response["vectors"])
        return vectors

    def pair(self, question: str, sentence: str, model: str = "pair"):
        response = self._request(
            "/v1/pair", {"question": question, "sentence": sentence, "model": model}
        )
        return response["label"], float(response["p_relevant"])

    def nli_label(self, sentence: str, candidate_labels: list[str]):
        if not candidate_labels:
            raise ValueError("candidate_labels must be non-empty")
        response = self._request(
            "/v1/nli", {"premise": sentence, "labels": list(candidate_labels)}
        )
        return response["label"], [float(s) for s in response["scores"]]

    def moods(self, sentence: str) -> tuple[float, float, float]:
        response = self._request("/v1/moods", {"sentence": sentence})
        return (
            float(response["imperative"]),
            float(response["interrogative"]),
            float(response["indicative"]),
        )

    def summarize(self, text: str, model_key, max_len: int = 64) -> str:
        family, aspect, strategy = model_key
        aspect = getattr(aspect, "value", aspect)
        response = self._request(
            "/v1/summarize",
            {
                "text": text,
                "family": family,
                "aspect": aspect,
                "strategy": strategy,
                "max_len": int(max_len),
            },
        )
        return response["summary"]

    def health(self) -> dict:
        if self.config.mode == "offline":
            return {"status": "ok", "models": []}
        try:
            reply = requests.get(
                self.config.base_url + "/v1/health", timeout=self.config.timeout
            )
            reply.raise_for_status()
            return reply.json()
        except requests.RequestException as exc:
            raise GatewayError(f"health check failed: {exc}") from exc

    # -- dispatch -----------------------------------------------------------

    def _request(self, endpoint: str, body: dict, batch_index: int = 0) -> dict:
        key = self._cache_key(endpoint, body)
        cached = self._cache_read(key)
        if cached is not None:
            return cached
        self.service_calls += 1
        if self.config.mode == "offline":
            response = self._stub(endpoint, body)
        else:
            response = self._post(endpoint, body, batch_index)
        self._cache_write(key, response)
        return response

    def _post(self, endpoint: str, body: dict, batch_index: int) -> dict:
        url = self.config.base_url + endpoint
        last_error = None
        for attempt in range(self.config.max_retries + 1):
            try:
                reply = requests.post(url, json=body, timeout=self.config.timeout)
            except requests.RequestException as exc:
                last_error = exc
            else:
                if reply.status_code < 400:
                    return reply.json()
                if reply.status_code < 500:  # rejected; retrying cannot help
                    raise GatewayError(
                        f"{endpoint} rejected request "
                        f"({reply.status_code}): {reply.text[:500]}"
                    )
                last_error = f"server error {reply.status_code}"
            if attempt < self.config.max_retries:
                time.sleep(0.2 * 2**attempt * (0.5 + random.random()))
        raise GatewayError(
            f"{endpoint} failed after {self.config.max_retries + 1} attempts "
            f"(batch {batch_index}): {last_error}"
        )

    # -- caching ------------------------------------------------------------

    def _cache_key(self, endpoint: str, body: dict) -> str:
        canonical = json.dumps(body, sort_keys=True, ensure_ascii=False)
        material = f"{self.config.mode}|{endpoint}|{canonical}"
        return hashlib.sha256(material.encode("utf-8")).hexdigest()

    def _cache_read(self, key: str) -> dict | None:
        if not self.config.cache_dir:
            return None
        path = Path(self.config.cache_dir) / f"{key}.json"
        if not path.exists():
            return None
        return json.loads(path.read_text(encoding="utf-8"))

    def _cache_write(self, key: str, response: dict) -> None:
        if not self.config.cache_dir:
            return
        path = Path(self.config.cache_dir) / f"{key}.json"
        path.write_text(json.dumps(response, ensure_ascii=False), encoding="utf-8")

    # -- offline stub ---------------------------------------------------------

    def _stub(self, endpoint: str, body: dict) -> dict:
        if endpoint == "/v1/embed":
            return {"vectors": [self._stub_vector(t) for t in body["texts"]]}
        if endpoint == "/v1/pair":
            q = set(_tokens(body["question"]))
            s = set(_tokens(body["sentence"]))
            p_relevant = len(q & s) / max(1, len(s))
            label = "relevant" if p_relevant >= 0.5 else "irrelevant"
            return {"label": label, "p_relevant": p_relevant}
        if endpoint == "/v1/nli":
            sentence_tokens = set(_tokens(body["premise"]))
            overlaps = [
                len(set(_tokens(label)) & sentence_tokens) for label in body["labels"]
            ]
            exp = [math.exp(o - max(overlaps)) for o in overlaps]
            total = sum(exp)
            scores = [e / total for e in exp]
            best = overlaps.index(max(overlaps))
            return {"label": body["labels"][best], "scores": scores}
        if endpoint == "/v1/moods":
            p_imp, p_int, p_ind = self._moods.probabilities(body["sentence"])
            return {"imperative": p_imp, "interrogative": p_int, "indicative": p_ind}
        if endpoint == "/v1/summarize":
            words = body["text"].split()
            return {"summary": " ".join(words[: body["max_len"]])}
        raise GatewayError(f"offline stub has no handler for {endpoint}")

    def _stub_vector(self, text: str) -> list[float]:
        """Hashed bag-of-words embedding: stable, and token overlap shows up
        as positive cosine similarity."""
        dim = self.config.stub_dim
        vec = [0.0] * dim
        tokens = _tokens(text)
        if not tokens:
            vec[0] = 1.0
            return vec
        for token in tokens:
            digest = hashlib.sha256(
                f"{self.config.stub_seed}:{token}".encode("utf-8")
            ).digest()
            index = int.from_bytes(digest[:4], "big") % dim
            sign = 1.0 if digest[4] % 2 == 0 else -1.0
            vec[index] += sign
        norm = math.sqrt(sum(v * v for v in vec))
        if norm == 0.0:
            vec[0] = 1.0
            return vec
        return [v / norm for v in vec]
