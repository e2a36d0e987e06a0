import random
import string

import pytest

from asumm.corpus import Answer, Thread
from asumm.textprep import CleanerConfig, clean, load_guards, preprocess_thread, tokenize


def test_clean_joins_lowercase_continuation():
    assert clean("I feel sick\nmaybe flu") == "I feel sick maybe flu."


def test_clean_inserts_stop_before_uppercase_line():
    assert clean("this is long\nand continues\nAnd stops") == (
        "this is long and continues. And stops."
    )


def test_clean_collapses_repeated_punctuation():
    assert clean("Really???") == "Really?"
    assert clean("bad dream!!!") == "bad dream!"
    assert clean("Wait... what now...") == "Wait. what now."


def test_clean_empty_input():
    assert clean("") == ""
    assert clean("   \n \t ") == ""


def test_clean_removes_urls_and_smileys():
    assert clean("See http://example.com/page for more") == "See for more."
    assert clean("Check www.healthsite.org now") == "Check now."
    assert clean("Thanks :) that helps") == "Thanks that helps."
    assert clean("Feel better soon xD") == "Feel better soon."


def test_clean_strips_symbols():
    assert clean("~Everyone~ hates *this* (truly)") == "Everyone hates this truly."
    assert clean('He said: "rest - now"') == "He said rest now."


def test_tokenize_respects_guards():
    assert tokenize("See your dr. soon. Rest well.") == [
        "See your dr. soon.",
        "Rest well.",
    ]
    assert tokenize("Use NSAIDs i.e. ibuprofen daily. Works fast.") == [
        "Use NSAIDs i.e. ibuprofen daily.",
        "Works fast.",
    ]
    assert tokenize("Ask John M.D. about it.") == ["Ask John M.D. about it."]
    # Uppercase guards are case-sensitive, so "m.d." splits (and "d." drops).
    assert tokenize("ask john m.d. about it.") == ["ask john m.", "about it."]


def test_tokenize_guard_needs_word_boundary():
    # "Sandr." contains "dr." but must still split after it.
    assert tokenize("I saw Sandr. Then left.") == ["I saw Sandr.", "Then left."]


def test_tokenize_numeral_guard():
    assert tokenize("Take 2.5 mg daily. Then rest.") == [
        "Take 2.5 mg daily.",
        "Then rest.",
    ]
    assert tokenize("Rate it 8. 9 is too high.") == ["Rate it 8. 9 is too high."]
    assert tokenize("I rate this 1.") == ["I rate this 1."]
    # Digit-dot followed by a letter is a normal split point.
    assert tokenize("Steps 1. rest 2. hydrate.") == [
        "Steps 1.",
        "rest 2.",
        "hydrate.",
    ]


def test_tokenize_drops_low_alnum_sentences():
    assert tokenize("I agree. E. Me too.") == ["I agree.", "Me too."]
    assert tokenize("a.") == []
    # Two alphanumerics meet the floor (the rule is "fewer than two").
    assert tokenize("ok.") == ["ok."]


def test_tokenize_appends_missing_terminal():
    assert tokenize("Try essential oils") == ["Try essential oils."]


def test_every_sentence_meets_contract():
    rng = random.Random(7)
    words = ["rest", "Dr", "flu", "1", "i.e", "sleep", "B12", "now", "etc"];
    for _ in range(200):
        raw = " ".join(
            rng.choice(words) + rng.choice(["", ".", "?", "!", "...", "\n"])
            for _ in range(rng.randint(1, 25))
        )
        for sentence in tokenize(clean(raw)):
            assert sentence[-1] in ".!?"
            assert sum(c.isalnum() for c in sentence) >= 2
            assert sentence == sentence.strip()
            assert "\n" not in sentence


def test_tokenize_idempotent_on_joined_output():
    rng = random.Random(13)
    words = ["take", "two", "dr", "pills", "daily", "etc", "see", "M.D"]
    for _ in range(200):
        raw = " ".join(
            rng.choice(words) + rng.choice(["", ".", "?", "!", "\n"])
            for _ in range(rng.randint(1, 20))
        )
        first = tokenize(clean(raw))
        assert tokenize(" ".join(first)) == first


def test_guards_never_split():
    cfg = CleanerConfig()
    for guard in cfg.abbreviation_guards:
        text = f"Ask about {guard} today. Then rest."
        joined = " ".join(tokenize(clean(text, cfg), cfg))
        assert guard in joined


def test_config_validation():
    with pytest.raises(ValueError):
        CleanerConfig(abbreviation_guards=())
    with pytest.raises(ValueError):
        CleanerConfig(min_alnum=0)


def test_load_guards(tmp_path):
    path = tmp_path / "guards.txt"
    path.write_text("etc.\n\n dr. \n")
    assert load_guards(path) == ("etc.", "dr.")


def _thread(answers):
    return Thread(
        thread_id="t1",
        category="flu",
        subject="help",
        content="",
        answers=tuple(
            Answer(answer_index=i, raw_text=a) for i, a in enumerate(answers)
        ),
    )


def test_preprocess_thread_populates_indices():
    thread = preprocess_thread(_thread(["Rest. Hydrate.", "lol"]))
    first, second = thread.answers
    assert [s.text for s in first.sentences] == ["Rest.", "Hydrate."]
    assert [(s.answer_index, s.sentence_index) for s in first.sentences] == [
        (0, 0),
        (0, 1),
    ]
    assert [s.text for s in second.sentences] == ["lol."]
    assert first.raw_text == "Rest. Hydrate."


def test_preprocess_provenance_is_gapless():
    import random as _random

    rng = _random.Random(21)
    words = ["rest", "tea", "flu", "sleep", "now", "dr", "etc"]
    for _ in range(50):
        answers = [
            " ".join(
                rng.choice(words) + rng.choice(["", ".", "?", "!"])
                for _ in range(rng.randint(0, 12))
            )
            for _ in range(rng.randint(1, 4))
        ]
        thread = preprocess_thread(_thread(answers))
        for answer in thread.answers:
            assert [s.sentence_index for s in answer.sentences] == list(
                range(len(answer.sentences))
            )
            assert all(s.answer_index == answer.answer_index for s in answer.sentences)


def test_preprocess_thread_empty_answer():
    thread = preprocess_thread(_thread(["", "Real answer here."]))
    assert thread.answers[0].sentences == ()
    assert len(thread.answers[1].sentences) == 1


def test_preprocess_thread_idempotent():
    once = preprocess_thread(_thread(["Rest well. Sleep.", "See your dr. soon"]))
    assert preprocess_thread(once) == once
