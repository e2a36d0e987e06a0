"""Text cleaning and rule-based sentence tokenization for answer text.

The rules, applied in order by :func:`clean`:

1. A line that lacks terminal punctuation (. ! ?) is joined with the next
   line when that line starts with a lowercase letter; otherwise a full
   stop is inserted after it.  The final line gets a full stop too.
2. URLs, emoticons, and the configured symbol set are removed; whitespace
   runs collapse to single spaces; runs of the same terminal punctuation
   ("...", "??", "!!!") collapse to one.

:func:`tokenize` then splits on terminal punctuation, never inside an
abbreviation guard (e.g. "dr.", "i.e.") or a numeral ("1.", "1.5"), drops
sentences with fewer than ``min_alnum`` alphanumeric characters, and
guarantees every emitted sentence is stripped and ends in one of . ! ?.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from pathlib import Path

from .corpus import SentenceRecord, Thread

_TERMINALS = ".!?"

# Tokens starting like a URL are removed wholesale (before symbol stripping,
# which would otherwise mangle the "://" part).
_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)

# ASCII smileys seen in forum text.  Punctuation-only smileys are also caught
# by symbol stripping; the ones carrying letters/digits must be removed as
# standalone tokens so words like "maxD" survive.
DEFAULT_EMOTICONS = (
    ":-)", ":-(", ":-D", ":-P", ":-/", ":-|",
    ":)", ":(", ":D", ":P", ":p", ":/", ":|", ":'(",
    ";-)", ";)", ";-D",
    "=)", "=(", "=D",
    ":o", ":O", "xD", "XD", "o.O", "O.o", "^_^", "<3",
)

DEFAULT_GUARDS = ("etc.", "M.D.", "dr.", "i.e.", "P.S.", "L.A.")


@dataclass(frozen=True)
class CleanerConfig:
    """Knobs for cleaning and tokenization.

    Guards containing an uppercase letter ("M.D.", "P.S.", "L.A.") are
    matched case-sensitively; all-lowercase guards ("dr.", "etc.", "i.e.")
    match case-insensitively, since lowercase shorthand dominates forum
    text.  Stripped symbols are deleted outright (so "don't" -> "dont").
    """

    abbreviation_guards: tuple[str, ...] = DEFAULT_GUARDS
    strip_symbols: frozenset = frozenset("~*()><\"':-")
    min_alnum: int = 2
    emoticons: tuple[str, ...] = DEFAULT_EMOTICONS

    def __post_init__(self):
        if not self.abbreviation_guards:
            raise ValueError("abbreviation_guards must be non-empty")
        if self.min_alnum < 1:
            raise ValueError("min_alnum must be >= 1")


def load_guards(path: str | Path) -> tuple[str, ...]:
    """Read abbreviation guards from a plain-text file, one per line."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    guards = tuple(ln.strip() for ln in lines if ln.strip())
    if not guards:
        raise ValueError(f"no guards found in {path}")
    return guards


def _emoticon_pattern(emoticons: tuple[str, ...]) -> re.Pattern:
    # Longest first so ":-)" wins over ":-"-prefix lookalikes.  A smiley may
    # sit against trailing punctuation ("soon xD.") but not inside a word.
    alts = "|".join(re.escape(e) for e in sorted(emoticons, key=len, reverse=True))
    return re.compile(r"(?:(?<=\s)|^)(?:%s)(?=[\s.!?,;]|$)" % alts)


def clean(raw: str, cfg: CleanerConfig = CleanerConfig()) -> str:
    """Apply line joining, terminal-stop insertion, and symbol removal."""
    if not raw or not raw.strip():
        return ""

    # Line-join pass: an empty next line counts as a paragraph break, so no
    # join happens across it.
    stripped = [ln.strip() for ln in raw.splitlines()]
    pieces = []
    for i, line in enumerate(stripped):
        if not line:
            continue
        nxt = stripped[i + 1] if i + 1 < len(stripped) else ""
        if line[-1] in _TERMINALS:
            pieces.append(line)
        elif nxt and nxt[0].islower():
            pieces.append(line)  # joined by the single-space assembly below
        else:
            pieces.append(line + ".")
    text = " ".join(pieces)

    text = _URL_RE.sub(" ", text)
    text = _emoticon_pattern(cfg.emoticons).sub(" ", text)
    text = text.translate({ord(c): "" for c in cfg.strip_symbols})
    text = re.sub(r"\s+", " ", text).strip()
    text = re.sub(r"\s+([.!?])", r"\1", text)  # removals leave stray " ."
    text = re.sub(r"([.!?])\1+", r"\1", text)
    if text and text[-1] not in _TERMINALS:
        text += "."
    return text


def _protected_dots(text: str, cfg: CleanerConfig) -> set:
    """Indices of '.' characters that must not act as split points."""
    protected = set()
    for guard in cfg.abbreviation_guards:
        case_sensitive = any(c.isupper() for c in guard)
        haystack = text if case_sensitive else text.lower()
        needle = guard if case_sensitive else guard.lower()
        start = 0
        while True:
            pos = haystack.find(needle, start)
            if pos < 0:
                break
            # Require a word boundary before the guard so "Sandr." is not
            # protected by "dr.".
            if pos == 0 or not text[pos - 1].isalnum():
                for off, ch in enumerate(guard):
                    if ch == ".":
                        protected.add(pos + off)
            start = pos + 1
    for i, ch in enumerate(text):
        if ch != "." or i == 0 or not text[i - 1].isdigit():
            continue
        # Numeral guard: a digit may follow directly ("1.5") or after
        # whitespace ("1. 5"); a trailing "1." at the end is kept whole.
        if i == len(text) - 1 or re.match(r"\s*\d", text[i + 1 :]):
            protected.add(i)
    return protected


def tokenize(cleaned: str, cfg: CleanerConfig = CleanerConfig()) -> list[str]:
    """Split cleaned text into sentences honoring guards and the alnum floor."""
    if not cleaned or not cleaned.strip():
        return []
    protected = _protected_dots(cleaned, cfg)
    sentences: list[str] = []

    def flush(piece: str) -> None:
        piece = piece.strip()
        if not piece:
            return
        if sum(c.isalnum() for c in piece) < cfg.min_alnum:
            return
        if piece[-1] not in _TERMINALS:
            piece += "."
        sentences.append(piece)

    start = 0
    for i, ch in enumerate(cleaned):
        if ch in _TERMINALS and not (ch == "." and i in protected):
            flush(cleaned[start : i + 1])
            start = i + 1
    flush(cleaned[start:])
    return sentences


def preprocess_thread(thread: Thread, cfg: CleanerConfig = CleanerConfig()) -> Thread:
    """Populate every answer's sentence records; raw text stays untouched.

    When an answer's existing sentence texts already match the tokenization,
    its records (including any labels) are kept, which makes the operation
    idempotent and safe on annotated threads.
    """
    answers = []
    for answer in thread.answers:
        texts = tokenize(clean(answer.raw_text, cfg), cfg)
        if [s.text for s in answer.sentences] == texts:
            answers.append(answer)
            continue
        records = tuple(
            SentenceRecord(text=t, answer_index=answer.answer_index, sentence_index=j)
            for j, t in enumerate(texts)
        )
        answers.append(replace(answer, sentences=records))
    return replace(thread, answers=tuple(answers))
