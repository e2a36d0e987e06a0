"""End-to-end orchestration: relevance, aspect, chunking, summarization.

Two input strategies exist for the summarizer.  "pipeline" feeds the
per-aspect chunks of (predicted-)relevant sentences; "ans" bypasses the
two classification stages and feeds the whole preprocessed answer text to
every configured per-aspect summarizer, leaving absence handling to the
evaluation pairing rule.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .classify import classify_aspect, classify_relevance
from .corpus import Aspect, DataError, Relevance, SentenceRecord, SummarySet, Thread
from .gateway import GatewayClient, GatewayError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AspectChunk:
    """In-order concatenation of one aspect's sentences for one thread."""

    thread_id: str
    aspect: Aspect
    sentences: tuple[SentenceRecord, ...]

    @property
    def joined_text(self) -> str:
        return " ".join(s.text for s in self.sentences)


@dataclass(frozen=True)
class SummarizerSpec:
    backend: str = "extractive"  # "extractive" or "gateway"
    model_name: str = "bart"  # model family key on the service
    strategy: str = "pipeline"  # "pipeline" or "ans"
    max_words: int = 64

    def __post_init__(self):
        if self.max_words < 1:
            raise ValueError("max_words must be >= 1")
        if self.backend not in ("extractive", "gateway"):
            raise ValueError(f"unknown summarizer backend: {self.backend!r}")
        if self.strategy not in ("pipeline", "ans"):
            raise ValueError(f"unknown strategy: {self.strategy!r}")


class PipelineStageError(RuntimeError):
    """Wraps a stage failure with the stage name and thread id."""

    def __init__(self, stage: str, thread_id: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed on thread {thread_id!r}: {cause}")
        self.stage = stage
        self.thread_id = thread_id
        self.cause = cause


def chunk_by_aspect(thread: Thread, label_source: str = "predicted") -> list[AspectChunk]:
    """One chunk per aspect with at least one labeled sentence.

    Sentences are ordered by their stored (answer_index, sentence_index),
    so a permuted answer array still yields the source order.
    """
    if label_source not in ("gold", "predicted"):
        raise ValueError(f"unknown label source: {label_source!r}")
    records = list(thread.sentences())
    if label_source == "gold":
        unlabeled = [s for s in records if s.relevance_gold is None]
        if unlabeled:
            raise DataError(
                f"thread {thread.thread_id!r}: gold labels missing on "
                f"{len(unlabeled)} sentence(s)"
            )
        missing_aspect = [
            s
            for s in records
            if s.relevance_gold is Relevance.RELEVANT and s.aspect_gold is None
        ]
        if missing_aspect:
            raise DataError(
                f"thread {thread.thread_id!r}: relevant sentences lack gold aspects"
            )
        label_of = lambda s: s.aspect_gold
    else:
        if any(s.relevance_pred is None for s in records):
            raise DataError(
                f"thread {thread.thread_id!r}: relevance predictions missing"
            )
        label_of = lambda s: s.aspect_pred

    chunks = []
    for aspect in Aspect.canonical_order():
        members = sorted(
            (s for s in records if label_of(s) is aspect),
            key=lambda s: (s.answer_index, s.sentence_index),
        )
        if members:
            chunks.append(
                AspectChunk(
                    thread_id=thread.thread_id,
                    aspect=aspect,
                    sentences=tuple(members),
                )
            )
    return chunks


def _lead(sentences: list[str], max_words: int) -> str:
    """First sentences within the word budget; never splits a sentence and
    always emits at least one."""
    taken = [sentences[0]]
    total = len(sentences[0].split())
    for sentence in sentences[1:]:
        count = len(sentence.split())
        if total + count > max_words:
            break
        taken.append(sentence)
        total += count
    return " ".join(taken)


def summarize_chunk(
    chunk: AspectChunk, spec: SummarizerSpec, client: GatewayClient | None = None
) -> str:
    """Summarize one chunk with the configured backend."""
    if not chunk.sentences:
        raise ValueError("cannot summarize an empty chunk")
    if spec.backend == "extractive":
        return _lead([s.text for s in chunk.sentences], spec.max_words)
    if client is None:
        raise ValueError("gateway backend requires a client")
    return client.summarize(
        chunk.joined_text,
        (spec.model_name, chunk.aspect, spec.strategy),
        max_len=spec.max_words,
    )


@dataclass
class PipelineConfig:
    relevance_backend: object
    aspect_backend: object
    summarizer: SummarizerSpec = SummarizerSpec()
    client: GatewayClient | None = None
    gateway_fallback: str = "fail"  # "fail" or "extractive"


def _summarize_or_fallback(chunk, cfg: PipelineConfig) -> str:
    try:
        return summarize_chunk(chunk, cfg.summarizer, cfg.client)
    except GatewayError:
        if cfg.gateway_fallback != "extractive":
            raise
        log.warning(
            "gateway summarizer failed for thread %r aspect %s; "
            "falling back to extractive lead",
            chunk.thread_id,
            chunk.aspect.value,
        )
        return _lead([s.text for s in chunk.sentences], cfg.summarizer.max_words)


def run_pipeline(thread: Thread, cfg: PipelineConfig) -> SummarySet:
    """Produce a SummarySet for one preprocessed thread."""
    if cfg.summarizer.strategy == "ans":
        return _run_answers_direct(thread, cfg)

    try:
        thread = classify_relevance(thread, cfg.relevance_backend)
    except Exception as exc:
        raise PipelineStageError("relevance", thread.thread_id, exc) from exc
    try:
        thread = classify_aspect(thread, cfg.aspect_backend)
    except Exception as exc:
        raise PipelineStageError("aspect", thread.thread_id, exc) from exc
    try:
        chunks = chunk_by_aspect(thread, "predicted")
    except Exception as exc:
        raise PipelineStageError("chunking", thread.thread_id, exc) from exc

    summaries = {}
    for chunk in chunks:
        try:
            summaries[chunk.aspect] = _summarize_or_fallback(chunk, cfg)
        except Exception as exc:
            raise PipelineStageError("summarization", thread.thread_id, exc) from exc
    return SummarySet(thread_id=thread.thread_id, summaries=summaries)


def _run_answers_direct(thread: Thread, cfg: PipelineConfig) -> SummarySet:
    """The "ans" strategy: whole answer text into each per-aspect model."""
    sentences = [s.text for s in thread.sentences()]
    summaries = {}
    if not sentences:
        return SummarySet(thread_id=thread.thread_id, summaries={})
    full_text = " ".join(sentences)
    for aspect in Aspect.canonical_order():
        try:
            if cfg.summarizer.backend == "extractive":
                summaries[aspect] = _lead(sentences, cfg.summarizer.max_words)
            else:
                if cfg.client is None:
                    raise ValueError("gateway backend requires a client")
                summaries[aspect] = cfg.client.summarize(
                    full_text,
                    (cfg.summarizer.model_name, aspect, "ans"),
                    max_len=cfg.summarizer.max_words,
                )
        except GatewayError as exc:
            if cfg.gateway_fallback == "extractive":
                summaries[aspect] = _lead(sentences, cfg.summarizer.max_words)
            else:
                raise PipelineStageError(
                    "summarization", thread.thread_id, exc
                ) from exc
        except Exception as exc:
            raise PipelineStageError("summarization", thread.thread_id, exc) from exc
    return SummarySet(thread_id=thread.thread_id, summaries=summaries)


def best_answer_summaries(thread: Thread) -> SummarySet:
    """Baseline: copy the best answer's text into every aspect slot."""
    if thread.best_answer_index is None:
        log.warning("thread %r has no best answer; empty baseline", thread.thread_id)
        return SummarySet(thread_id=thread.thread_id, summaries={})
    text = thread.answers[thread.best_answer_index].raw_text
    return SummarySet(
        thread_id=thread.thread_id,
        summaries={aspect: text for aspect in Aspect.canonical_order()},
    )
