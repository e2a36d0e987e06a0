"""Model registry: which handle serves which key.

Role keys ("embed", "pair", "nli", "moods") back the fixed endpoints;
summarizer keys are "family:aspect:strategy" strings.  A YAML config lists
checkpoints to load or toy-train directives to run at startup:

    models:
      - key: embed
        kind: encoder
      - key: moods
        kind: moods-rule
      - key: pair
        kind: checkpoint
        path: pair.pt
      - key: bart:suggestion:pipeline
        kind: train
        task: summarize
        dataset: chunks.jsonl
        hyperparams: {epochs: 200}
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .models import Encoder, PairClassifier, load_checkpoint
from .moods_rules import RuleMoods
from .training import toy_finetune


class RegistryError(RuntimeError):
    """Bad registry config or a missing checkpoint."""


@dataclass
class ModelRegistry:
    handles: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def keys(self) -> list[str]:
        return sorted(self.handles)

    def get(self, key: str):
        if key not in self.handles:
            raise KeyError(key)
        return self.handles[key]

    def register(self, key: str, handle, meta: dict | None = None) -> None:
        self.handles[key] = handle
        self.meta[key] = meta or {}

    def summarizer_keys(self) -> list[str]:
        return [k for k in self.keys() if self.meta.get(k, {}).get("role") == "summarizer"]


def default_registry(seed: int = 0) -> ModelRegistry:
    """Seeded role models; no summarizers until one is trained or loaded."""
    registry = ModelRegistry()
    encoder = Encoder(seed=seed)
    registry.register("embed", encoder, {"role": "embed", "init": "seeded"})
    registry.register("nli", encoder, {"role": "nli", "init": "seeded"})
    registry.register(
        "pair", PairClassifier(seed=seed), {"role": "pair", "init": "seeded"}
    )
    registry.register("moods", RuleMoods(), {"role": "moods", "init": "rule-based"})
    return registry


def _load_entry(registry: ModelRegistry, entry: dict, base_dir: Path) -> None:
    key = entry.get("key")
    kind = entry.get("kind")
    if not key or not kind:
        raise RegistryError(f"registry entry needs key and kind: {entry}")
    meta = dict(entry.get("meta", {}))
    if kind == "encoder":
        handle = Encoder(seed=int(entry.get("seed", 0)))
        meta.setdefault("init", "seeded")
    elif kind == "moods-rule":
        handle = RuleMoods()
        meta.setdefault("init", "rule-based")
    elif kind == "checkpoint":
        path = base_dir / entry["path"]
        if not path.exists():
            raise RegistryError(f"checkpoint missing for key {key!r}: {path}")
        ckpt_kind, handle, ckpt_meta = load_checkpoint(path)
        meta.setdefault("checkpoint", str(path))
        meta.setdefault("model_kind", ckpt_kind)
        meta.update(ckpt_meta)
    elif kind == "train":
        dataset = base_dir / entry["dataset"]
        if not dataset.exists():
            raise RegistryError(f"training dataset missing for key {key!r}: {dataset}")
        result = toy_finetune(entry["task"], dataset, entry.get("hyperparams"))
        if not result.ok:
            raise RegistryError(
                f"startup training failed for key {key!r}: loss did not decrease"
            )
        handle = result.model
        meta.setdefault("trained_on", str(dataset))
        meta.update(result.metrics)
    else:
        raise RegistryError(f"unknown registry kind {kind!r} for key {key!r}")
    meta.setdefault("role", _infer_role(key))
    registry.register(key, handle, meta)


def _infer_role(key: str) -> str:
    if key in ("embed", "nli", "pair", "moods"):
        return key
    return "summarizer"


def load_registry(config_path: str | Path) -> ModelRegistry:
    config_path = Path(config_path)
    payload = yaml.safe_load(config_path.read_text(encoding="utf-8")) or {}
    entries = payload.get("models")
    if not entries:
        raise RegistryError(f"no models listed in {config_path}")
    registry = ModelRegistry()
    for entry in entries:
        _load_entry(registry, entry, config_path.parent)
    return registry
