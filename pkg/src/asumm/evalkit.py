"""Evaluation metrics: ROUGE-1/2/L, P/R/F1 reports, Cohen's kappa,
and compression-ratio bookkeeping.

ROUGE tokenization is lowercase whitespace splitting with per-token
punctuation stripping, no stemming, no stopword removal; those choices are
recorded in the emitted reports.
"""

from __future__ import annotations

import logging
import string
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .corpus import Aspect, Relevance, SummarySet, Thread

log = logging.getLogger(__name__)

ROUGE_CONFIG = {
    "lowercase": True,
    "stemming": False,
    "stopwords_removed": False,
    "token_punctuation_stripped": True,
}


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float


def _f1(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def _prf(matches: float, n_candidate: float, n_reference: float) -> PRF:
    p = matches / n_candidate if n_candidate else 0.0
    r = matches / n_reference if n_reference else 0.0
    return PRF(p, r, _f1(p, r))


@dataclass(frozen=True)
class RougeScore:
    r1: PRF
    r2: PRF
    rl: PRF
    empty_reference: bool = False

    def to_dict(self) -> dict:
        return {
            "r1": vars(self.r1),
            "r2": vars(self.r2),
            "rl": vars(self.rl),
            "empty_reference": self.empty_reference,
        }


def rouge_tokens(text: str) -> list[str]:
    """Lowercased whitespace tokens with edge punctuation stripped."""
    out = []
    for token in text.lower().split():
        token = token.strip(string.punctuation)
        if token:
            out.append(token)
    return out


def _ngram_prf(cand: list[str], ref: list[str], n: int) -> PRF:
    cand_grams = Counter(tuple(cand[i : i + n]) for i in range(len(cand) - n + 1))
    ref_grams = Counter(tuple(ref[i : i + n]) for i in range(len(ref) - n + 1))
    matches = sum(min(c, ref_grams[g]) for g, c in cand_grams.items())
    return _prf(matches, sum(cand_grams.values()), sum(ref_grams.values()))


def lcs_length(a: list[str], b: list[str]) -> int:
    """Longest common subsequence length (rolling-row DP)."""
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        curr = [0] * (len(b) + 1)
        for j, y in enumerate(b, start=1):
            if x == y:
                curr[j] = prev[j - 1] + 1
            else:
                curr[j] = max(prev[j], curr[j - 1])
        prev = curr
    return prev[-1]


def rouge(candidate: str, reference: str) -> RougeScore:
    """ROUGE-1/2 from clipped n-gram counts, ROUGE-L from the LCS."""
    cand = rouge_tokens(candidate)
    ref = rouge_tokens(reference)
    if not ref:
        zero = PRF(0.0, 0.0, 0.0)
        return RougeScore(zero, zero, zero, empty_reference=True)
    lcs = lcs_length(cand, ref)
    return RougeScore(
        r1=_ngram_prf(cand, ref, 1),
        r2=_ngram_prf(cand, ref, 2),
        rl=_prf(lcs, len(cand), len(ref)),
    )


@dataclass
class AspectRouge:
    """Mean ROUGE over the threads whose gold set contains the aspect."""

    aspect: Aspect
    support: int
    mean: RougeScore

    def to_dict(self) -> dict:
        return {
            "aspect": self.aspect.value,
            "support": self.support,
            "mean": self.mean.to_dict(),
        }


def _mean_scores(scores: list[RougeScore]) -> RougeScore:
    def mean_prf(pick) -> PRF:
        return PRF(
            precision=sum(pick(s).precision for s in scores) / len(scores),
            recall=sum(pick(s).recall for s in scores) / len(scores),
            f1=sum(pick(s).f1 for s in scores) / len(scores),
        )

    return RougeScore(
        r1=mean_prf(lambda s: s.r1),
        r2=mean_prf(lambda s: s.r2),
        rl=mean_prf(lambda s: s.rl),
    )


def evaluate_summaries(
    system: list[SummarySet], gold: list[SummarySet]
) -> dict[Aspect, AspectRouge]:
    """Pair system and gold summaries per aspect, averaging over threads
    whose gold set contains the aspect.

    A missing system summary scores zero for its pair; aspects the system
    invents beyond gold are ignored.
    """
    system_by_id = {s.thread_id: s for s in system}
    gold_by_id = {g.thread_id: g for g in gold}
    unmatched = sorted(set(system_by_id) ^ set(gold_by_id))
    if unmatched:
        raise ValueError(f"unmatched thread_ids between system and gold: {unmatched}")

    per_aspect: dict[Aspect, list[RougeScore]] = {}
    for thread_id, gold_set in gold_by_id.items():
        system_set = system_by_id[thread_id]
        for aspect, reference in gold_set.summaries.items():
            candidate = system_set.summaries.get(aspect, "")
            per_aspect.setdefault(aspect, []).append(rouge(candidate, reference))
    return {
        aspect: AspectRouge(aspect, len(scores), _mean_scores(scores))
        for aspect, scores in per_aspect.items()
    }


# -- classification metrics ---------------------------------------------------


@dataclass
class ConfusionMatrix:
    """Rows are gold labels, columns predicted, in the given label order."""

    labels: list[str]
    counts: np.ndarray

    def to_dict(self) -> dict:
        return {"labels": self.labels, "counts": self.counts.tolist()}


@dataclass
class ClassificationReport:
    per_class: dict[str, PRF]
    macro_f1: float
    confusion: ConfusionMatrix

    def to_dict(self) -> dict:
        return {
            "per_class": {label: vars(prf) for label, prf in self.per_class.items()},
            "macro_f1": self.macro_f1,
            "confusion": self.confusion.to_dict(),
        }


def classification_report(
    gold: list[str], pred: list[str], labels: list[str] | None = None
) -> ClassificationReport:
    """Per-class P/R/F1 and a confusion matrix.

    macro_f1 averages F1 over the classes present in gold only.
    """
    if len(gold) != len(pred):
        raise ValueError(f"label list lengths differ: {len(gold)} vs {len(pred)}")
    if labels is None:
        labels = sorted(set(gold) | set(pred))
    index = {label: i for i, label in enumerate(labels)}
    stray = sorted({x for x in (*gold, *pred) if x not in index})
    if stray:
        raise ValueError(f"labels outside the provided label list: {stray}")
    counts = np.zeros((len(labels), len(labels)), dtype=int)
    for g, p in zip(gold, pred):
        counts[index[g], index[p]] += 1

    per_class = {}
    for i, label in enumerate(labels):
        tp = counts[i, i]
        per_class[label] = _prf(tp, counts[:, i].sum(), counts[i, :].sum())
    present = {g for g in gold}
    macro = float(
        np.mean([per_class[label].f1 for label in labels if label in present])
    )
    return ClassificationReport(per_class, macro, ConfusionMatrix(labels, counts))


def macro_f1(gold: list[str], pred: list[str]) -> float:
    return classification_report(gold, pred).macro_f1


def cohens_kappa(a1: list, a2: list) -> float:
    """Chance-corrected agreement between two aligned label lists."""
    if len(a1) != len(a2):
        raise ValueError("annotator label lists must be the same length")
    if not a1:
        raise ValueError("cannot compute kappa of empty annotations")
    n = len(a1)
    p_o = sum(x == y for x, y in zip(a1, a2)) / n
    c1, c2 = Counter(a1), Counter(a2)
    p_e = sum(c1[label] * c2.get(label, 0) for label in c1) / (n * n)
    if p_e == 1.0:
        return 1.0 if p_o == 1.0 else 0.0
    return (p_o - p_e) / (1 - p_e)


# -- report bundle ---------------------------------------------------------------

HUMAN_EVAL_DIMENSIONS = (
    "coherence",
    "consistency",
    "fluency",
    "relevance",
    "coverage",
)


@dataclass
class EvalReport:
    """Serializable bundle of whatever was measured in one evaluation run.

    ``human_eval`` holds externally collected Likert means per dimension
    (schema only; nothing in this package produces them).
    """

    rouge_per_aspect: dict[Aspect, AspectRouge] | None = None
    classification: ClassificationReport | None = None
    kappa: float | None = None
    compression: "CompressionReport | None" = None
    human_eval: dict[str, float] | None = None

    def to_dict(self) -> dict:
        if self.human_eval is not None:
            unknown = set(self.human_eval) - set(HUMAN_EVAL_DIMENSIONS)
            if unknown:
                raise ValueError(f"unknown human-eval dimensions: {sorted(unknown)}")
        out: dict = {"rouge_config": ROUGE_CONFIG}
        if self.rouge_per_aspect is not None:
            out["per_aspect"] = {
                a.value: entry.to_dict() for a, entry in self.rouge_per_aspect.items()
            }
        if self.classification is not None:
            out["report"] = self.classification.to_dict()
        if self.kappa is not None:
            out["kappa"] = self.kappa
        if self.compression is not None:
            out["compression"] = self.compression.to_dict()
        if self.human_eval is not None:
            out["human_eval"] = dict(self.human_eval)
        return out


# -- compression ---------------------------------------------------------------


def word_count(text: str) -> int:
    return len(text.split())


@dataclass
class CompressionReport:
    """Word-count ratios: summaries/source, per aspect, and post-relevance."""

    thread_ratios: dict[str, float] = field(default_factory=dict)
    aspect_ratios: dict[Aspect, list[float]] = field(default_factory=dict)
    relevance_ratios: dict[str, float] = field(default_factory=dict)

    def _stats(self, values: list[float]) -> dict:
        if not values:
            return {"mean": None, "std": None, "n": 0}
        arr = np.array(values, dtype=float)
        return {"mean": float(arr.mean()), "std": float(arr.std()), "n": len(values)}

    def to_dict(self) -> dict:
        return {
            "thread_ratio": self._stats(list(self.thread_ratios.values())),
            "relevance_filter_ratio": self._stats(
                list(self.relevance_ratios.values())
            ),
            "per_aspect_ratio": {
                aspect.value: self._stats(values)
                for aspect, values in self.aspect_ratios.items()
            },
            "per_thread": dict(sorted(self.thread_ratios.items())),
        }


def compression_stats(
    threads: list[Thread], summaries: list[SummarySet]
) -> CompressionReport:
    """Compression bookkeeping over gold-annotated threads and summaries.

    Standard deviations are population deviations over the included
    threads; threads with zero source words are excluded with a warning.
    """
    by_id = {s.thread_id: s for s in summaries}
    report = CompressionReport()
    for thread in threads:
        summary_set = by_id.get(thread.thread_id)
        if summary_set is None:
            continue
        source_words = sum(word_count(a.raw_text) for a in thread.answers)
        if source_words == 0:
            log.warning(
                "thread %r has zero source words; excluded from compression stats",
                thread.thread_id,
            )
            continue
        combined = sum(word_count(text) for text in summary_set.summaries.values())
        report.thread_ratios[thread.thread_id] = combined / source_words

        relevant_words = sum(
            word_count(s.text)
            for s in thread.sentences()
            if s.relevance_gold is Relevance.RELEVANT
        )
        if relevant_words:
            report.relevance_ratios[thread.thread_id] = relevant_words / source_words

        for aspect, text in summary_set.summaries.items():
            chunk_words = sum(
                word_count(s.text)
                for s in thread.sentences()
                if s.aspect_gold is aspect
            )
            if chunk_words:
                report.aspect_ratios.setdefault(aspect, []).append(
                    word_count(text) / chunk_words
                )
    return report
