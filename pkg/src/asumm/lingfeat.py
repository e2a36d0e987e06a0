"""Linguistic features for aspect classification.

Three feature groups per sentence: grammatical-mood probabilities
(imperative / interrogative / indicative), a personal-pronoun flag, and
three question flags (question mark, question phrase patterns, leading
helping verb).  Together they feed the feature-based aspect classifier and
the pronoun reroute of the zero-shot variant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

DO_PATTERNS = (
    "do i", "do you", "do they", "does she", "does he", "would you",
    "is there", "are there", "is it so", "is this true", "are you",
    "is he", "is she", "is that true", "are we", "am i", "question is",
    "tell me more", "can i", "can we", "tell me", "can you explain",
    "to ask",
)

# "can" appears twice in the source list; sets deduplicate.
HELPING_VERBS = ("is", "am", "can", "are", "does", "would", "could", "will")

# Standard English personal/possessive pronoun inventory.
PERSONAL_PRONOUNS = (
    "i", "me", "my", "mine", "myself", "we", "us", "our", "ours",
    "you", "your", "yours", "he", "him", "his", "she", "her", "hers",
    "they", "them", "their",
)

# Base verbs that commonly open imperative advice in health forums; used
# only by the offline mood heuristic.
IMPERATIVE_VERBS = (
    "try", "take", "go", "see", "get", "use", "drink", "eat", "avoid",
    "stop", "start", "keep", "call", "visit", "rest", "apply", "wash",
    "ask", "consult", "check", "make", "put", "give", "let", "tell",
    "talk", "remember", "consider", "be", "stay", "drop", "add",
)


@dataclass(frozen=True)
class PatternLists:
    """Lowercase, duplicate-free phrase and word inventories."""

    do_patterns: tuple[str, ...] = DO_PATTERNS
    helping_verbs: tuple[str, ...] = HELPING_VERBS
    personal_pronouns: tuple[str, ...] = PERSONAL_PRONOUNS
    imperative_verbs: tuple[str, ...] = IMPERATIVE_VERBS

    def __post_init__(self):
        for name in ("do_patterns", "helping_verbs", "personal_pronouns"):
            items = getattr(self, name)
            if not items:
                raise ValueError(f"{name} must be non-empty")
            if any(s != s.lower() for s in items):
                raise ValueError(f"{name} entries must be lowercase")
            if len(set(items)) != len(items):
                raise ValueError(f"{name} contains duplicates")


def load_pattern_file(path: str | Path) -> tuple[str, ...]:
    """Read one lowercase entry per line, ignoring blanks."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return tuple(ln.strip().lower() for ln in lines if ln.strip())


@dataclass(frozen=True)
class FeatureVector:
    """Feature bundle for one sentence; mood probabilities sum to 1."""

    p_imperative: float
    p_interrogative: float
    p_indicative: float
    has_personal_pronoun: bool
    question_mark: bool
    do_pattern: bool
    helping_verb: bool

    def as_list(self) -> list[float]:
        return [
            self.p_imperative,
            self.p_interrogative,
            self.p_indicative,
            float(self.has_personal_pronoun),
            float(self.question_mark),
            float(self.do_pattern),
            float(self.helping_verb),
        ]


FEATURE_NAMES = (
    "p_imperative",
    "p_interrogative",
    "p_indicative",
    "has_personal_pronoun",
    "question_mark",
    "do_pattern",
    "helping_verb",
)

_WORD_RE = re.compile(r"[a-z0-9']+")


def _words(sentence: str) -> list[str]:
    return _WORD_RE.findall(sentence.lower())


def question_flags(
    sentence: str, p: PatternLists = PatternLists()
) -> tuple[bool, bool, bool]:
    """(question_mark, do_pattern, helping_verb) for one sentence."""
    if not sentence:
        raise ValueError("sentence must be non-empty")
    question_mark = sentence.rstrip().endswith("?")
    lowered = sentence.lower()
    do_pattern = any(
        re.search(r"\b%s\b" % re.escape(phrase), lowered) for phrase in p.do_patterns
    )
    words = _words(sentence)
    helping_verb = bool(words) and words[0] in p.helping_verbs
    return question_mark, do_pattern, helping_verb


def has_personal_pronoun(sentence: str, p: PatternLists = PatternLists()) -> bool:
    """True iff any word of the sentence is a personal pronoun."""
    if not sentence:
        raise ValueError("sentence must be non-empty")
    pronouns = set(p.personal_pronouns)
    return any(w in pronouns for w in _words(sentence))


class RuleMoodProvider:
    """Offline mood heuristic with fixed 0.8/0.1/0.1 mass.

    Mass goes to interrogative when any question flag fires; else to
    imperative when the first base verb in the sentence is not preceded by
    a personal pronoun; else to indicative.
    """

    def __init__(self, patterns: PatternLists = PatternLists()):
        self.patterns = patterns

    def probabilities(self, sentence: str) -> tuple[float, float, float]:
        if any(question_flags(sentence, self.patterns)):
            return (0.1, 0.8, 0.1)
        words = _words(sentence)
        pronouns = set(self.patterns.personal_pronouns)
        verbs = set(self.patterns.imperative_verbs)
        for word in words:
            if word in verbs:
                return (0.8, 0.1, 0.1)
            if word in pronouns:
                break
        return (0.1, 0.1, 0.8)


class GatewayMoodProvider:
    """Mood probabilities served by the model service."""

    def __init__(self, client):
        self.client = client

    def probabilities(self, sentence: str) -> tuple[float, float, float]:
        from .gateway import GatewayError

        try:
            return self.client.moods(sentence)
        except GatewayError as exc:
            raise GatewayError(
                f"mood lookup failed for sentence {sentence[:80]!r}: {exc}"
            ) from exc


def mood_probabilities(sentence: str, provider) -> tuple[float, float, float]:
    """Simplex-valued (imperative, interrogative, indicative) triple."""
    if not sentence:
        raise ValueError("sentence must be non-empty")
    p_imp, p_int, p_ind = provider.probabilities(sentence)
    total = p_imp + p_int + p_ind
    if abs(total - 1.0) > 1e-6:
        raise ValueError(f"mood probabilities sum to {total}, expected 1")
    return (p_imp, p_int, p_ind)


def featurize(
    sentence: str,
    p: PatternLists = PatternLists(),
    provider=None,
) -> FeatureVector:
    """Assemble the full feature vector for one sentence."""
    provider = provider if provider is not None else RuleMoodProvider(p)
    p_imp, p_int, p_ind = mood_probabilities(sentence, provider)
    question_mark, do_pattern, helping_verb = question_flags(sentence, p)
    return FeatureVector(
        p_imperative=p_imp,
        p_interrogative=p_int,
        p_indicative=p_ind,
        has_personal_pronoun=has_personal_pronoun(sentence, p),
        question_mark=question_mark,
        do_pattern=do_pattern,
        helping_verb=helping_verb,
    )
