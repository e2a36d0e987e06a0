import json
import logging

import pytest

from asumm.corpus import (
    Aspect,
    DataError,
    Split,
    Thread,
    ingest,
    largest_remainder_counts,
    stratified_split,
    thread_from_record,
    thread_to_record,
    write_threads,
)


def make_record(tid="t1", category="allergies", n_answers=2, **extra):
    record = {
        "thread_id": tid,
        "category": category,
        "subject": f"question {tid}",
        "content": "some body",
        "answers": [f"answer {i} for {tid}." for i in range(n_answers)],
        "best_answer_index": None,
    }
    record.update(extra)
    return record


def write_jsonl(path, records):
    path.write_text("".join(json.dumps(r) + "\n" for r in records))


def test_ingest_preserves_answer_order(tmp_path):
    path = tmp_path / "threads.jsonl"
    write_jsonl(path, [make_record(n_answers=5)])
    threads = ingest(path)
    assert len(threads) == 1
    assert [a.answer_index for a in threads[0].answers] == [0, 1, 2, 3, 4]
    assert [a.raw_text for a in threads[0].answers] == [
        f"answer {i} for t1." for i in range(5)
    ]


def test_ingest_skips_answerless_records_with_warning(tmp_path, caplog):
    path = tmp_path / "threads.jsonl"
    write_jsonl(path, [make_record("t1"), make_record("t2", n_answers=0)])
    with caplog.at_level(logging.WARNING):
        threads = ingest(path)
    assert [t.thread_id for t in threads] == ["t1"]
    assert "skipped 1" in caplog.text


def test_ingest_rejects_duplicate_thread_id(tmp_path):
    path = tmp_path / "threads.jsonl"
    write_jsonl(path, [make_record("t1"), make_record("t1")])
    with pytest.raises(DataError, match="t1"):
        ingest(path)


def test_ingest_names_bad_line(tmp_path):
    path = tmp_path / "threads.jsonl"
    path.write_text(json.dumps(make_record()) + "\n{not json\n")
    with pytest.raises(DataError, match="line 2"):
        ingest(path)


def test_ingest_rejects_missing_fields(tmp_path):
    path = tmp_path / "threads.jsonl"
    record = make_record()
    del record["category"]
    write_jsonl(path, [record])
    with pytest.raises(DataError, match="category"):
        ingest(path)


def test_ingest_validates_best_answer_index(tmp_path):
    path = tmp_path / "threads.jsonl"
    write_jsonl(path, [make_record(best_answer_index=9)])
    with pytest.raises(DataError, match="best_answer_index"):
        ingest(path)


def test_round_trip_plain_and_annotated(tmp_path):
    record = make_record(n_answers=2)
    record["sentences"] = [["One sentence.", "Two here."], ["Third one."]]
    record["annotations"] = [
        [
            {"relevance": "relevant", "aspect": "suggestion"},
            {"relevance": "irrelevant", "aspect": None},
        ],
        [{"relevance": "relevant", "aspect": "question", "aspect_pred": "question"}],
    ]
    path = tmp_path / "in.jsonl"
    write_jsonl(path, [record, make_record("t9")])
    threads = ingest(path)

    out = tmp_path / "out.jsonl"
    write_threads(out, threads)
    assert ingest(out) == threads

    annotated = threads[0]
    first = annotated.answers[0].sentences[0]
    assert first.aspect_gold is Aspect.SUGGESTION
    assert annotated.answers[1].sentences[0].aspect_pred is Aspect.QUESTION


def test_sentence_record_invariants():
    from asumm.corpus import Relevance, SentenceRecord

    with pytest.raises(DataError, match="terminal"):
        SentenceRecord(text="no terminal", answer_index=0, sentence_index=0)
    with pytest.raises(DataError, match="alphanumerics"):
        SentenceRecord(text="a.", answer_index=0, sentence_index=0)
    with pytest.raises(DataError, match="not gold-relevant"):
        SentenceRecord(
            text="Labeled but irrelevant.",
            answer_index=0,
            sentence_index=0,
            relevance_gold=Relevance.IRRELEVANT,
            aspect_gold=Aspect.SUGGESTION,
        )


def test_query_joins_subject_and_content():
    thread = thread_from_record(make_record(content="body text"))
    assert thread.query() == "question t1 body text"
    assert thread_from_record(make_record(content="")).query() == "question t1"


def test_largest_remainder_is_ratio_faithful():
    assert largest_remainder_counts(10, (0.6, 0.2, 0.2)) == [6, 2, 2]
    assert largest_remainder_counts(5, (0.6, 0.2, 0.2)) == [3, 1, 1]
    for total in range(1, 40):
        counts = largest_remainder_counts(total, (0.6, 0.2, 0.2))
        assert sum(counts) == total
        for count, ratio in zip(counts, (0.6, 0.2, 0.2)):
            assert abs(count - ratio * total) < 1.0


def _threads(categories):
    out = []
    for i, category in enumerate(categories):
        out.append(thread_from_record(make_record(f"t{i}", category=category)))
    return out


def test_split_counts_single_category():
    threads = _threads(["diabetes"] * 10)
    assignment = stratified_split(threads, seed=7).assignment
    counts = {s: sum(1 for v in assignment.values() if v == s) for s in Split}
    assert counts == {Split.TRAIN: 6, Split.VAL: 2, Split.TEST: 2}


def test_split_totals_many_categories():
    categories = [f"cat{i}" for i in range(21) for _ in range(10)]
    assignment = stratified_split(_threads(categories), seed=3).assignment
    assert len(assignment) == 210
    counts = {s: sum(1 for v in assignment.values() if v == s) for s in Split}
    assert counts == {Split.TRAIN: 126, Split.VAL: 42, Split.TEST: 42}


def test_split_partitions_and_is_deterministic():
    threads = _threads(["a"] * 7 + ["b"] * 4 + ["c"] * 11)
    a1 = stratified_split(threads, seed=99).assignment
    a2 = stratified_split(threads, seed=99).assignment
    assert a1 == a2
    assert set(a1) == {t.thread_id for t in threads}
    different = stratified_split(threads, seed=100).assignment
    assert different != a1  # overwhelmingly likely with 22 threads


def test_split_stratification_within_one_of_exact():
    import random as _random

    rng = _random.Random(8)
    sizes = {f"cat{i}": rng.randint(3, 37) for i in range(12)}
    categories = [c for c, n in sizes.items() for _ in range(n)]
    threads = _threads(categories)
    assignment = stratified_split(threads, seed=4).assignment
    by_thread = {t.thread_id: t.category for t in threads}
    for category, n in sizes.items():
        for split, ratio in zip(Split, (0.6, 0.2, 0.2)):
            count = sum(
                1
                for tid, s in assignment.items()
                if s is split and by_thread[tid] == category
            )
            assert abs(count - ratio * n) < 1.0


def test_split_tiny_category_goes_to_train(caplog):
    threads = _threads(["big"] * 10 + ["tiny"] * 2)
    with caplog.at_level(logging.WARNING):
        assignment = stratified_split(threads, seed=1).assignment
    assert assignment["t10"] is Split.TRAIN
    assert assignment["t11"] is Split.TRAIN
    assert "tiny" in caplog.text


def test_split_requires_valid_ratios():
    with pytest.raises(ValueError):
        stratified_split(_threads(["a"] * 4), ratios=(0.5, 0.2, 0.2), seed=0)
