"""Canonical data model, thread ingestion, and stratified splitting.

A corpus is a JSON-lines file with one thread per line:

    {"thread_id": str, "category": str, "subject": str, "content": str,
     "answers": [str], "best_answer_index": int|null}

The annotated variant adds per-answer ``sentences`` (tokenized texts) and
``annotations`` arrays aligned to them, each entry carrying
``{"relevance": "relevant"|"irrelevant", "aspect": str|null}`` plus the
predicted counterparts when present.  Summary files hold one
``{"thread_id": str, "summaries": {"suggestion": str, ...}}`` per line.
"""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

log = logging.getLogger(__name__)


class DataError(ValueError):
    """Malformed or inconsistent input data."""


class Aspect(Enum):
    """The four answer aspects, in canonical (tie-break) order."""

    SUGGESTION = "suggestion"
    EXPERIENCE = "experience"
    INFORMATION = "information"
    QUESTION = "question"

    @classmethod
    def canonical_order(cls) -> list["Aspect"]:
        return [cls.SUGGESTION, cls.EXPERIENCE, cls.INFORMATION, cls.QUESTION]

    @classmethod
    def from_string(cls, value: str) -> "Aspect":
        try:
            return cls(value.lower())
        except ValueError:
            raise DataError(f"unknown aspect label: {value!r}") from None


class Relevance(Enum):
    RELEVANT = "relevant"
    IRRELEVANT = "irrelevant"

    @classmethod
    def from_string(cls, value: str) -> "Relevance":
        try:
            return cls(value.lower())
        except ValueError:
            raise DataError(f"unknown relevance label: {value!r}") from None


class Split(Enum):
    TRAIN = "train"
    VAL = "val"
    TEST = "test"


@dataclass(frozen=True)
class SentenceRecord:
    """One tokenized answer sentence with provenance and labels."""

    text: str
    answer_index: int
    sentence_index: int
    relevance_gold: Relevance | None = None
    aspect_gold: Aspect | None = None
    relevance_pred: Relevance | None = None
    aspect_pred: Aspect | None = None

    def __post_init__(self):
        if not self.text or self.text[-1] not in ".!?":
            raise DataError(f"sentence lacks terminal punctuation: {self.text!r}")
        if sum(c.isalnum() for c in self.text) < 2:
            raise DataError(f"sentence has fewer than 2 alphanumerics: {self.text!r}")
        if self.aspect_gold is not None and self.relevance_gold is not Relevance.RELEVANT:
            raise DataError(
                f"gold aspect on a sentence not gold-relevant: {self.text!r}"
            )


@dataclass(frozen=True)
class Answer:
    """A source answer; ``sentences`` is populated by preprocessing."""

    answer_index: int
    raw_text: str
    sentences: tuple[SentenceRecord, ...] = ()


@dataclass(frozen=True)
class Thread:
    """One query plus its ordered answers; the unit of splitting."""

    thread_id: str
    category: str
    subject: str
    content: str
    answers: tuple[Answer, ...]
    best_answer_index: int | None = None

    def query(self) -> str:
        """Question text: subject joined with the (possibly empty) body."""
        parts = [p for p in (self.subject, self.content) if p]
        return " ".join(parts)

    def sentences(self):
        for answer in self.answers:
            yield from answer.sentences


@dataclass
class SummarySet:
    """Per-aspect summaries for one thread; only non-empty entries are kept."""

    thread_id: str
    summaries: dict[Aspect, str] = field(default_factory=dict)

    def __post_init__(self):
        self.summaries = {a: s for a, s in self.summaries.items() if s}


@dataclass
class SplitAssignment:
    """thread_id -> split name; every corpus thread assigned exactly once."""

    assignment: dict[str, Split]

    def ids_for(self, split: Split) -> list[str]:
        return [tid for tid, s in self.assignment.items() if s is split]


# -- serialization --------------------------------------------------------

_REQUIRED_KEYS = ("thread_id", "category", "subject", "answers")


def thread_from_record(record: dict, line_no: int | None = None) -> Thread:
    """Build a Thread from one JSONL record, validating required fields."""
    where = f" at line {line_no}" if line_no is not None else ""
    for key in _REQUIRED_KEYS:
        if key not in record:
            raise DataError(f"record missing {key!r}{where}")
    raw_answers = record["answers"]
    if not isinstance(raw_answers, list) or not all(
        isinstance(a, str) for a in raw_answers
    ):
        raise DataError(f"'answers' must be a list of strings{where}")

    sentences = record.get("sentences")
    annotations = record.get("annotations")
    if sentences is not None and len(sentences) != len(raw_answers):
        raise DataError(f"'sentences' not aligned to answers{where}")
    answers = []
    for i, raw in enumerate(raw_answers):
        records = ()
        if sentences is not None:
            texts = sentences[i]
            labels = annotations[i] if annotations is not None else [{}] * len(texts)
            if len(labels) != len(texts):
                raise DataError(
                    f"annotations not aligned to sentences for answer {i}{where}"
                )
            records = tuple(
                _sentence_from_record(text, i, j, lab)
                for j, (text, lab) in enumerate(zip(texts, labels))
            )
        answers.append(Answer(answer_index=i, raw_text=raw, sentences=records))

    best = record.get("best_answer_index")
    if best is not None:
        if not isinstance(best, int) or not 0 <= best < len(answers):
            raise DataError(
                f"best_answer_index {best!r} out of range{where}"
            )
    return Thread(
        thread_id=str(record["thread_id"]),
        category=str(record["category"]),
        subject=str(record["subject"]),
        content=str(record.get("content", "") or ""),
        answers=tuple(answers),
        best_answer_index=best,
    )


def _sentence_from_record(text, answer_index, sentence_index, lab) -> SentenceRecord:
    def opt(key, parser):
        value = lab.get(key)
        return None if value is None else parser(value)

    return SentenceRecord(
        text=text,
        answer_index=answer_index,
        sentence_index=sentence_index,
        relevance_gold=opt("relevance", Relevance.from_string),
        aspect_gold=opt("aspect", Aspect.from_string),
        relevance_pred=opt("relevance_pred", Relevance.from_string),
        aspect_pred=opt("aspect_pred", Aspect.from_string),
    )


def thread_to_record(thread: Thread) -> dict:
    """Inverse of thread_from_record; includes sentence arrays when present."""
    record = {
        "thread_id": thread.thread_id,
        "category": thread.category,
        "subject": thread.subject,
        "content": thread.content,
        "answers": [a.raw_text for a in thread.answers],
        "best_answer_index": thread.best_answer_index,
    }
    if any(a.sentences for a in thread.answers):
        record["sentences"] = [[s.text for s in a.sentences] for a in thread.answers]
        record["annotations"] = [
            [_sentence_labels(s) for s in a.sentences] for a in thread.answers
        ]
    return record


def _sentence_labels(s: SentenceRecord) -> dict:
    lab = {
        "relevance": s.relevance_gold.value if s.relevance_gold else None,
        "aspect": s.aspect_gold.value if s.aspect_gold else None,
    }
    if s.relevance_pred is not None:
        lab["relevance_pred"] = s.relevance_pred.value
    if s.aspect_pred is not None:
        lab["aspect_pred"] = s.aspect_pred.value
    return lab


def ingest(path: str | Path, format: str = "jsonl") -> list[Thread]:
    """Read threads from a JSONL file.

    Records with zero answers are skipped (a warning reports the count).
    Malformed records and duplicate thread_ids raise DataError naming the
    offending line.
    """
    if format != "jsonl":
        raise DataError(f"unsupported format: {format!r}")
    path = Path(path)
    threads: list[Thread] = []
    seen: dict[str, int] = {}
    skipped = 0
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"invalid JSON at line {line_no}: {exc}") from exc
            thread = thread_from_record(record, line_no)
            if not thread.answers:
                skipped += 1
                continue
            if thread.thread_id in seen:
                raise DataError(
                    f"duplicate thread_id {thread.thread_id!r} at line {line_no} "
                    f"(first seen at line {seen[thread.thread_id]})"
                )
            seen[thread.thread_id] = line_no
            threads.append(thread)
    if skipped:
        log.warning("skipped %d records with zero answers in %s", skipped, path)
    return threads


def write_threads(path: str | Path, threads: list[Thread]) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for thread in threads:
            fh.write(json.dumps(thread_to_record(thread), ensure_ascii=False) + "\n")


def summary_set_to_record(ss: SummarySet) -> dict:
    return {
        "thread_id": ss.thread_id,
        "summaries": {a.value: text for a, text in ss.summaries.items()},
    }


def summary_set_from_record(record: dict) -> SummarySet:
    return SummarySet(
        thread_id=str(record["thread_id"]),
        summaries={
            Aspect.from_string(name): text
            for name, text in record.get("summaries", {}).items()
        },
    )


def read_summary_sets(path: str | Path) -> list[SummarySet]:
    out = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(summary_set_from_record(json.loads(line)))
    return out


def write_summary_sets(path: str | Path, sets: list[SummarySet]) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for ss in sets:
            fh.write(json.dumps(summary_set_to_record(ss), ensure_ascii=False) + "\n")


# -- splitting -------------------------------------------------------------


def largest_remainder_counts(total: int, ratios: tuple[float, ...]) -> list[int]:
    """Apportion ``total`` into integer counts proportional to ``ratios``.

    Floors first, then hands the remaining units to the largest fractional
    parts; ties go to the earlier ratio position, so the result is
    deterministic and each count is within 1 of ratio * total.
    """
    exact = [r * total for r in ratios]
    counts = [int(e) for e in exact]
    remainder = total - sum(counts)
    by_fraction = sorted(
        range(len(ratios)), key=lambda i: (-(exact[i] - counts[i]), i)
    )
    for i in by_fraction[:remainder]:
        counts[i] += 1
    return counts


def stratified_split(
    threads: list[Thread],
    ratios: tuple[float, float, float] = (0.6, 0.2, 0.2),
    seed: int = 0,
) -> SplitAssignment:
    """Assign threads to train/val/test per category, largest-remainder style.

    Threads are shuffled within each category before assignment; the same
    seed always yields the identical assignment.  Categories with fewer than
    3 threads go entirely to Train (with a warning).
    """
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"split ratios must sum to 1, got {ratios}")
    for thread in threads:
        if not thread.category:
            raise DataError(f"thread {thread.thread_id!r} has no category")

    by_category: dict[str, list[Thread]] = {}
    for thread in threads:
        by_category.setdefault(thread.category, []).append(thread)

    rng = random.Random(seed)
    assignment: dict[str, Split] = {}
    splits = [Split.TRAIN, Split.VAL, Split.TEST]
    for category in sorted(by_category):
        members = list(by_category[category])
        if len(members) < 3:
            log.warning(
                "category %r has %d thread(s) (<3); assigning all to train",
                category,
                len(members),
            )
            for thread in members:
                assignment[thread.thread_id] = Split.TRAIN
            continue
        rng.shuffle(members)
        counts = largest_remainder_counts(len(members), ratios)
        cursor = 0
        for split, count in zip(splits, counts):
            for thread in members[cursor : cursor + count]:
                assignment[thread.thread_id] = split
            cursor += count
    return SplitAssignment(assignment)
