"""Trainable and rule-composed classifiers for relevance and aspect labels.

The logistic regression here is deliberately self-contained (batch gradient
descent with backtracking line search) so its gradients can be checked
against finite differences and its training is bit-reproducible.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .corpus import Aspect, DataError, Relevance, SentenceRecord, Thread
from .evalkit import macro_f1
from .gateway import GatewayError
from .lingfeat import (
    FEATURE_NAMES,
    PatternLists,
    RuleMoodProvider,
    featurize,
    has_personal_pronoun,
)

MODEL_SCHEMA_VERSION = 1

DEFAULT_LAMBDA_GRID = (0.01, 0.1, 1.0, 10.0, 100.0)

RELEVANCE_CLASSES = (Relevance.IRRELEVANT.value, Relevance.RELEVANT.value)
ASPECT_CLASSES = tuple(a.value for a in Aspect.canonical_order())


@dataclass
class LogRegModel:
    """Multinomial logistic regression; binary is the two-class case."""

    classes: list[str]
    weights: np.ndarray  # (n_classes, n_features)
    bias: np.ndarray  # (n_classes,)
    lam: float
    class_weights: dict[str, float]
    feature_names: list[str]

    def __post_init__(self):
        if self.weights.shape != (len(self.classes), len(self.feature_names)):
            raise ValueError("weight shape does not match classes/features")
        if self.lam <= 0:
            raise ValueError("regularization strength must be positive")


def balanced_class_weights(y: list[str], classes: list[str]) -> dict[str, float]:
    """w_c = N / (K * N_c) over the classes that actually occur in y."""
    counts = {c: 0 for c in classes}
    for label in y:
        counts[label] += 1
    n, k = len(y), len(classes)
    return {c: n / (k * counts[c]) for c in classes if counts[c] > 0}


def _softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def _loss_and_grad(weights, bias, X, Y, sample_w, lam):
    """Mean weighted cross-entropy plus (lam/2)*||W||^2; bias unpenalized."""
    n = X.shape[0]
    scores = X @ weights.T + bias
    shifted = scores - scores.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1))
    log_probs = shifted - log_norm[:, None]
    loss = -(sample_w * (log_probs * Y).sum(axis=1)).sum() / n
    loss += 0.5 * lam * float((weights**2).sum())

    probs = np.exp(log_probs)
    delta = (probs - Y) * (sample_w / n)[:, None]
    grad_w = delta.T @ X + lam * weights
    grad_b = delta.sum(axis=0)
    return loss, grad_w, grad_b


def _fit(X, y, classes, lam, balanced, max_iter=1000, tol=1e-6):
    """Batch gradient descent with Armijo backtracking from a zero start."""
    n, d = X.shape
    k = len(classes)
    index = {c: i for i, c in enumerate(classes)}
    Y = np.zeros((n, k))
    for i, label in enumerate(y):
        Y[i, index[label]] = 1.0

    class_w = balanced_class_weights(y, classes) if balanced else {}
    sample_w = np.array([class_w.get(label, 1.0) for label in y])

    weights = np.zeros((k, d))
    bias = np.zeros(k)
    loss, grad_w, grad_b = _loss_and_grad(weights, bias, X, Y, sample_w, lam)
    for _ in range(max_iter):
        grad_norm_sq = float((grad_w**2).sum() + (grad_b**2).sum())
        if grad_norm_sq**0.5 < tol:
            break
        step = 1.0
        for _ in range(60):
            new_w = weights - step * grad_w
            new_b = bias - step * grad_b
            new_loss, new_gw, new_gb = _loss_and_grad(
                new_w, new_b, X, Y, sample_w, lam
            )
            if new_loss <= loss - 1e-4 * step * grad_norm_sq:
                break
            step *= 0.5
        weights, bias = new_w, new_b
        loss, grad_w, grad_b = new_loss, new_gw, new_gb
    return weights, bias, class_w


def kfold_indices(n: int, folds: int, seed: int) -> list[list[int]]:
    """Shuffled contiguous fold partition: each index lands in exactly one."""
    order = list(range(n))
    random.Random(seed).shuffle(order)
    return [list(chunk) for chunk in np.array_split(np.array(order), folds)]


def train_logreg(
    X,
    y,
    folds: int = 10,
    grid: tuple[float, ...] = DEFAULT_LAMBDA_GRID,
    balanced: bool = True,
    seed: int = 0,
    classes: list[str] | None = None,
    feature_names: list[str] | None = None,
) -> LogRegModel:
    """Grid-search the regularization strength by k-fold CV, then refit.

    The winning strength maximizes mean fold macro-F1 (ties go to the
    earlier grid entry); the returned model is refit on all data.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    y = [str(label) for label in y]
    if len(X) != len(y):
        raise ValueError("X and y lengths differ")
    if len(X) < folds:
        raise ValueError(f"need at least {folds} examples for {folds}-fold CV")
    if not grid:
        raise ValueError("lambda grid must be non-empty")
    if not np.isfinite(X).all():
        raise ValueError("feature matrix contains non-finite values")

    present = set(y)
    if classes is None:
        classes = sorted(present)
    missing = [c for c in classes if c not in present]
    if missing:
        raise ValueError(f"classes absent from training data: {missing}")

    fold_sets = kfold_indices(len(y), folds, seed)
    y_arr = np.array(y, dtype=object)
    best_lam, best_score = None, -1.0
    for lam in grid:
        scores = []
        for fold in fold_sets:
            mask = np.ones(len(y), dtype=bool)
            mask[fold] = False
            w, b, _ = _fit(X[mask], list(y_arr[mask]), classes, lam, balanced)
            probs = _softmax(X[~mask] @ w.T + b)
            preds = [classes[i] for i in probs.argmax(axis=1)]
            scores.append(macro_f1(list(y_arr[~mask]), preds))
        mean_score = sum(scores) / len(scores)
        if mean_score > best_score:
            best_lam, best_score = lam, mean_score

    weights, bias, class_w = _fit(X, y, classes, best_lam, balanced)
    return LogRegModel(
        classes=list(classes),
        weights=weights,
        bias=bias,
        lam=best_lam,
        class_weights=class_w,
        feature_names=list(feature_names or [f"f{i}" for i in range(X.shape[1])]),
    )


def predict(model: LogRegModel, x) -> tuple[str, np.ndarray]:
    """(label, probabilities); argmax ties resolve to the earlier class."""
    x = np.asarray(x, dtype=float).ravel()
    if x.shape[0] != model.weights.shape[1]:
        raise ValueError(
            f"feature dimension {x.shape[0]} != model dimension "
            f"{model.weights.shape[1]}"
        )
    probs = _softmax(model.weights @ x + model.bias)
    return model.classes[int(np.argmax(probs))], probs


def save_model(model: LogRegModel, path: str | Path) -> None:
    payload = {
        "schema_version": MODEL_SCHEMA_VERSION,
        "classes": model.classes,
        "weights": model.weights.tolist(),
        "bias": model.bias.tolist(),
        "lambda": model.lam,
        "class_weights": model.class_weights,
        "feature_names": model.feature_names,
    }
    Path(path).write_text(json.dumps(payload, indent=2), encoding="utf-8")


def load_model(path: str | Path) -> LogRegModel:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("schema_version") != MODEL_SCHEMA_VERSION:
        raise DataError(f"unsupported model schema in {path}")
    return LogRegModel(
        classes=list(payload["classes"]),
        weights=np.array(payload["weights"], dtype=float),
        bias=np.array(payload["bias"], dtype=float),
        lam=float(payload["lambda"]),
        class_weights={k: float(v) for k, v in payload["class_weights"].items()},
        feature_names=list(payload["feature_names"]),
    )


# -- triplets ---------------------------------------------------------------


@dataclass(frozen=True)
class Triplet:
    """(question, relevant sentence, irrelevant sentence) from one thread."""

    anchor: str
    positive: str
    negative: str


def build_triplets(threads: list[Thread]) -> list[Triplet]:
    """All (q, relevant, irrelevant) combinations per thread.

    Threads with no irrelevant sentences contribute nothing.
    """
    triplets = []
    for thread in threads:
        positives, negatives = [], []
        for sentence in thread.sentences():
            if sentence.relevance_gold is None:
                raise DataError(
                    f"thread {thread.thread_id!r} has unlabeled sentences"
                )
            if sentence.relevance_gold is Relevance.RELEVANT:
                positives.append(sentence.text)
            else:
                negatives.append(sentence.text)
        if not negatives:
            continue
        query = thread.query()
        triplets.extend(
            Triplet(anchor=query, positive=pos, negative=neg)
            for pos in positives
            for neg in negatives
        )
    return triplets


# -- zero-shot label mapping --------------------------------------------------

CANDIDATE_LABELS = (
    "informative", "information", "cause",
    "question", "interrogative",
    "suggestion", "imperative", "instruction", "command",
    "personal experience", "experience", "personal",
)

_INFO_LABELS = frozenset({"informative", "information", "cause"})
_QUESTION_LABELS = frozenset({"question", "interrogative"})
_SUGGESTION_LABELS = frozenset({"suggestion", "imperative", "instruction", "command"})


def zs_map(
    nli_label: str,
    sentence: str,
    variant: str = "zs",
    p: PatternLists = PatternLists(),
) -> Aspect:
    """Map an entailment label to an aspect.

    The "zs_pp" variant reroutes information-type labels to Experience when
    the sentence carries a personal pronoun.
    """
    if nli_label not in CANDIDATE_LABELS:
        raise ValueError(f"unknown zero-shot label: {nli_label!r}")
    if variant not in ("zs", "zs_pp"):
        raise ValueError(f"unknown variant: {variant!r}")
    if nli_label in _INFO_LABELS:
        if variant == "zs_pp" and has_personal_pronoun(sentence, p):
            return Aspect.EXPERIENCE
        return Aspect.INFORMATION
    if nli_label in _QUESTION_LABELS:
        return Aspect.QUESTION
    if nli_label in _SUGGESTION_LABELS:
        return Aspect.SUGGESTION
    return Aspect.EXPERIENCE


# -- stage backends -----------------------------------------------------------


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    na, nb = float(np.linalg.norm(a)), float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


class CosineLRBackend:
    """Relevance from a logistic head over query/sentence cosine similarity."""

    name = "cosine-lr"

    def __init__(self, embed_fn, model: LogRegModel):
        self.embed_fn = embed_fn
        self.model = model

    def predict(self, query: str, records: list[SentenceRecord]) -> list[Relevance]:
        vectors = self.embed_fn([query] + [s.text for s in records])
        q = np.asarray(vectors[0])
        labels = []
        for vec in vectors[1:]:
            label, _ = predict(self.model, [cosine(q, np.asarray(vec))])
            labels.append(Relevance(label))
        return labels


class GatewayPairBackend:
    """Relevance from the model service's sentence-pair classifier."""

    name = "gateway-pair"

    def __init__(self, client, model: str = "pair"):
        self.client = client
        self.model = model

    def predict(self, query: str, records: list[SentenceRecord]) -> list[Relevance]:
        labels = []
        for record in records:
            label, _ = self.client.pair(query, record.text, self.model)
            labels.append(Relevance.from_string(label))
        return labels


class GoldRelevanceBackend:
    """Echoes gold labels; for tests and gold-mode pipeline runs."""

    name = "gold"

    def predict(self, query: str, records: list[SentenceRecord]) -> list[Relevance]:
        missing = [s for s in records if s.relevance_gold is None]
        if missing:
            raise DataError("gold relevance labels missing")
        return [s.relevance_gold for s in records]


def classify_relevance(thread: Thread, backend) -> Thread:
    """Attach relevance_pred to every sentence; gold labels are untouched."""
    records = list(thread.sentences())
    try:
        labels = backend.predict(thread.query(), records)
    except GatewayError as exc:
        raise GatewayError(
            f"relevance backend {backend.name!r} failed on thread "
            f"{thread.thread_id!r}: {exc}"
        ) from exc
    label_iter = iter(labels)
    answers = []
    for answer in thread.answers:
        sentences = tuple(
            replace(s, relevance_pred=next(label_iter)) for s in answer.sentences
        )
        answers.append(replace(answer, sentences=sentences))
    return replace(thread, answers=tuple(answers))


class GMBackend:
    """Feature-based aspect classifier over mood/pronoun/question features."""

    name = "gm"

    def __init__(self, model: LogRegModel, patterns=None, provider=None):
        self.model = model
        self.patterns = patterns or PatternLists()
        self.provider = provider or RuleMoodProvider(self.patterns)

    def predict(self, records: list[SentenceRecord]) -> list[Aspect]:
        labels = []
        for record in records:
            fv = featurize(record.text, self.patterns, self.provider)
            label, _ = predict(self.model, fv.as_list())
            labels.append(Aspect.from_string(label))
        return labels


class ZsBackend:
    """Zero-shot aspect labels via the service's NLI endpoint."""

    def __init__(self, client, variant: str = "zs", patterns=None):
        if variant not in ("zs", "zs_pp"):
            raise ValueError(f"unknown variant: {variant!r}")
        self.client = client
        self.variant = variant
        self.patterns = patterns or PatternLists()
        self.name = variant

    def predict(self, records: list[SentenceRecord]) -> list[Aspect]:
        labels = []
        for record in records:
            nli_label, _ = self.client.nli_label(record.text, list(CANDIDATE_LABELS))
            labels.append(zs_map(nli_label, record.text, self.variant, self.patterns))
        return labels


class GatewayMulticlassBackend:
    """Direct four-way aspect decision from the service (NLI over aspect names)."""

    name = "gateway-multiclass"

    def __init__(self, client):
        self.client = client

    def predict(self, records: list[SentenceRecord]) -> list[Aspect]:
        labels = []
        for record in records:
            label, _ = self.client.nli_label(record.text, list(ASPECT_CLASSES))
            labels.append(Aspect.from_string(label))
        return labels


class GoldAspectBackend:
    """Echoes gold aspect labels; for tests and gold-mode pipeline runs."""

    name = "gold"

    def predict(self, records: list[SentenceRecord]) -> list[Aspect]:
        missing = [s for s in records if s.aspect_gold is None]
        if missing:
            raise DataError("gold aspect labels missing")
        return [s.aspect_gold for s in records]


def classify_aspect(thread: Thread, backend) -> Thread:
    """Attach aspect_pred to exactly the predicted-relevant sentences."""
    records = list(thread.sentences())
    if any(s.relevance_pred is None for s in records):
        raise DataError(
            f"thread {thread.thread_id!r} lacks relevance predictions"
        )
    relevant = [s for s in records if s.relevance_pred is Relevance.RELEVANT]
    try:
        labels = backend.predict(relevant)
    except GatewayError as exc:
        raise GatewayError(
            f"aspect backend {backend.name!r} failed on thread "
            f"{thread.thread_id!r}: {exc}"
        ) from exc
    by_id = {id(s): a for s, a in zip(relevant, labels)}
    answers = []
    for answer in thread.answers:
        sentences = tuple(
            replace(s, aspect_pred=by_id.get(id(s))) for s in answer.sentences
        )
        answers.append(replace(answer, sentences=sentences))
    return replace(thread, answers=tuple(answers))
