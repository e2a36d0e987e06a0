"""Toy fine-tuning for the four task shapes the service can host.

Datasets are JSON lines in the orchestrating toolkit's export formats:

    pair       {"question": str, "sentence": str, "label": "relevant"|"irrelevant"}
    triplet    {"anchor": str, "positive": str, "negative": str}
    multiclass {"text": str, "label": str}
    summarize  {"text": str, "summary": str}

Training is full-precision CPU Adam over a few hundred examples at most;
the point is smoke-level behavior (loss goes down, separable data is
separated, tiny summarization sets are memorized), not quality.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import torch
from torch import nn

from .models import BOS, EOS, PAD, Encoder, PairClassifier, Seq2SeqSummarizer, TextCNN

DEFAULT_HYPERPARAMS = {
    "pair": {"epochs": 30, "lr": 0.05, "batch_size": 16, "seed": 0},
    "triplet": {"epochs": 10, "lr": 0.05, "batch_size": 32, "seed": 0, "margin": 0.5},
    "multiclass": {"epochs": 25, "lr": 0.005, "batch_size": 16, "seed": 0},
    "summarize": {"epochs": 300, "lr": 0.01, "batch_size": 16, "seed": 0},
}

_REQUIRED_FIELDS = {
    "pair": ("question", "sentence", "label"),
    "triplet": ("anchor", "positive", "negative"),
    "multiclass": ("text", "label"),
    "summarize": ("text", "summary"),
}


class TrainingError(ValueError):
    """Bad task name, dataset, or hyperparameters."""


@dataclass
class TrainResult:
    status: str  # "ok" when the training loss decreased, else "failed"
    task: str
    losses: list[float]
    metrics: dict = field(default_factory=dict)
    model: object = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def load_dataset(task: str, path: str | Path) -> list[dict]:
    if task not in _REQUIRED_FIELDS:
        raise TrainingError(f"unknown task {task!r}")
    rows = []
    with Path(path).open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            row = json.loads(line)
            missing = [f for f in _REQUIRED_FIELDS[task] if f not in row]
            if missing:
                raise TrainingError(
                    f"{task} dataset line {line_no} missing fields {missing}"
                )
            rows.append(row)
    if not rows:
        raise TrainingError(f"dataset {path} is empty")
    return rows


def _epoch_batches(n: int, batch_size: int, generator: torch.Generator):
    order = torch.randperm(n, generator=generator).tolist()
    for start in range(0, n, batch_size):
        yield order[start : start + batch_size]


def toy_finetune(task: str, dataset_path: str | Path, hyperparams: dict | None = None) -> TrainResult:
    """Train one toy model; status is "failed" when the loss never improves."""
    if task not in _REQUIRED_FIELDS:
        raise TrainingError(f"unknown task {task!r}")
    hp = dict(DEFAULT_HYPERPARAMS[task])
    hp.update(hyperparams or {})
    rows = load_dataset(task, dataset_path)
    torch.manual_seed(int(hp["seed"]))
    trainer = {
        "pair": _train_pair,
        "triplet": _train_triplet,
        "multiclass": _train_multiclass,
        "summarize": _train_summarizer,
    }[task]
    model, losses, metrics = trainer(rows, hp)
    status = "ok" if losses[-1] < losses[0] else "failed"
    return TrainResult(status=status, task=task, losses=losses, metrics=metrics, model=model)


def _run_epochs(model, batches_fn, loss_fn, hp):
    optimizer = torch.optim.Adam(model.parameters(), lr=float(hp["lr"]))
    generator = torch.Generator().manual_seed(int(hp["seed"]))
    losses = []
    for _ in range(int(hp["epochs"])):
        model.train()
        total, count = 0.0, 0
        for batch in batches_fn(generator):
            optimizer.zero_grad()
            loss = loss_fn(batch)
            loss.backward()
            optimizer.step()
            total += float(loss.detach()) * len(batch)
            count += len(batch)
        losses.append(total / count)
    return losses


def _train_pair(rows, hp):
    model = PairClassifier(seed=int(hp["seed"]))
    X = torch.stack(
        [
            torch.from_numpy(model.featurize(r["question"], r["sentence"]))
            for r in rows
        ]
    )
    y = torch.tensor(
        [1 if r["label"] == "relevant" else 0 for r in rows], dtype=torch.long
    )
    criterion = nn.CrossEntropyLoss()

    def loss_fn(batch):
        idx = torch.tensor(batch)
        return criterion(model(X[idx]), y[idx])

    losses = _run_epochs(
        model,
        lambda g: _epoch_batches(len(rows), int(hp["batch_size"]), g),
        loss_fn,
        hp,
    )
    with torch.no_grad():
        model.eval()
        accuracy = float((model(X).argmax(dim=1) == y).float().mean())
    return model, losses, {"train_accuracy": accuracy}


def _train_triplet(rows, hp):
    model = Encoder(seed=int(hp["seed"]))
    anchors = model.featurize([r["anchor"] for r in rows])
    positives = model.featurize([r["positive"] for r in rows])
    negatives = model.featurize([r["negative"] for r in rows])
    criterion = nn.TripletMarginLoss(margin=float(hp["margin"]))

    def loss_fn(batch):
        idx = torch.tensor(batch)
        return criterion(
            model(anchors[idx]), model(positives[idx]), model(negatives[idx])
        )

    losses = _run_epochs(
        model,
        lambda g: _epoch_batches(len(rows), int(hp["batch_size"]), g),
        loss_fn,
        hp,
    )
    with torch.no_grad():
        model.eval()
        a, p, n = model(anchors), model(positives), model(negatives)
        d_ap = ((a - p) ** 2).sum(dim=1)
        d_an = ((a - n) ** 2).sum(dim=1)
        separated = float((d_ap < d_an).float().mean())
    return model, losses, {"separated_fraction": separated}


def _train_multiclass(rows, hp):
    classes = sorted({r["label"] for r in rows})
    model = TextCNN(classes=classes, seed=int(hp["seed"]))
    X = model.featurize([r["text"] for r in rows])
    index = {c: i for i, c in enumerate(classes)}
    y = torch.tensor([index[r["label"]] for r in rows], dtype=torch.long)
    criterion = nn.CrossEntropyLoss()

    def loss_fn(batch):
        idx = torch.tensor(batch)
        return criterion(model(X[idx]), y[idx])

    losses = _run_epochs(
        model,
        lambda g: _epoch_batches(len(rows), int(hp["batch_size"]), g),
        loss_fn,
        hp,
    )
    with torch.no_grad():
        model.eval()
        accuracy = float((model(X).argmax(dim=1) == y).float().mean())
    return model, losses, {"train_accuracy": accuracy, "classes": classes}


def _train_summarizer(rows, hp):
    vocab = Seq2SeqSummarizer.build_vocab(
        [r["text"] for r in rows] + [r["summary"] for r in rows]
    )
    model = Seq2SeqSummarizer(vocab=vocab, seed=int(hp["seed"]))

    sources = [model.ids(r["text"]) or [PAD] for r in rows]
    targets = [model.ids(r["summary"], limit=64) for r in rows]
    src_len = max(len(s) for s in sources)
    tgt_len = max(len(t) for t in targets) + 1  # room for BOS/EOS shift

    src = torch.full((len(rows), src_len), PAD, dtype=torch.long)
    lengths = torch.zeros(len(rows), dtype=torch.long)
    tgt_in = torch.full((len(rows), tgt_len), PAD, dtype=torch.long)
    tgt_out = torch.full((len(rows), tgt_len), PAD, dtype=torch.long)
    for i, (s, t) in enumerate(zip(sources, targets)):
        src[i, : len(s)] = torch.tensor(s)
        lengths[i] = len(s)
        tgt_in[i, 0] = BOS
        tgt_in[i, 1 : len(t) + 1] = torch.tensor(t)
        tgt_out[i, : len(t)] = torch.tensor(t)
        tgt_out[i, len(t)] = EOS
    criterion = nn.CrossEntropyLoss(ignore_index=PAD)

    def loss_fn(batch):
        idx = torch.tensor(batch)
        logits = model(src[idx], lengths[idx], tgt_in[idx])
        return criterion(logits.reshape(-1, logits.shape[-1]), tgt_out[idx].reshape(-1))

    losses = _run_epochs(
        model,
        lambda g: _epoch_batches(len(rows), int(hp["batch_size"]), g),
        loss_fn,
        hp,
    )
    return model, losses, {"vocab_size": len(vocab)}
