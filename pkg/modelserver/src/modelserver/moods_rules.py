"""Rule-based grammatical-mood approximation.

Serves /v1/moods when no trained checkpoint is registered; the wire
contract (a probability triple) is identical either way.
"""

from __future__ import annotations

import re

from .features import tokens

QUESTION_PHRASES = (
    "do i", "do you", "do they", "does she", "does he", "would you",
    "is there", "are there", "is it so", "is this true", "are you",
    "is he", "is she", "is that true", "are we", "am i", "question is",
    "tell me more", "can i", "can we", "tell me", "can you explain",
    "to ask",
)

LEADING_HELPERS = {"is", "am", "can", "are", "does", "would", "could", "will"}

PRONOUNS = {
    "i", "me", "my", "mine", "myself", "we", "us", "our", "ours",
    "you", "your", "yours", "he", "him", "his", "she", "her", "hers",
    "they", "them", "their",
}

BASE_VERBS = {
    "try", "take", "go", "see", "get", "use", "drink", "eat", "avoid",
    "stop", "start", "keep", "call", "visit", "rest", "apply", "wash",
    "ask", "consult", "check", "make", "put", "give", "let", "tell",
    "talk", "remember", "consider", "be", "stay", "drop", "add",
}


def mood_probabilities(sentence: str) -> tuple[float, float, float]:
    """(imperative, interrogative, indicative), mass 0.8 on the winner."""
    lowered = sentence.lower()
    words = tokens(sentence)
    question = (
        sentence.rstrip().endswith("?")
        or (words and words[0] in LEADING_HELPERS)
        or any(
            re.search(r"\b%s\b" % re.escape(p), lowered) for p in QUESTION_PHRASES
        )
    )
    if question:
        return (0.1, 0.8, 0.1)
    for word in words:
        if word in BASE_VERBS:
            return (0.8, 0.1, 0.1)
        if word in PRONOUNS:
            break
    return (0.1, 0.1, 0.8)


class RuleMoods:
    """Serving adapter matching the trained-model interface."""

    def moods(self, sentence: str) -> tuple[float, float, float]:
        return mood_probabilities(sentence)
