import random
import statistics

import pytest

from asumm.corpus import Answer, Thread
from asumm.sampler import filter_by_answer_count, subsample_per_category, tukey_fences


def hinge_oracle(values):
    """Independent quartile computation via statistics.median on halves."""
    data = sorted(values)
    n = len(data)
    half = n // 2
    lower = data[: half + 1] if n % 2 else data[:half]
    upper = data[half:]
    q1 = statistics.median(lower)
    q3 = statistics.median(upper)
    iqr = q3 - q1
    return q1, q3, q1 - 1.5 * iqr, q3 + 1.5 * iqr


def test_constant_data():
    fences = tukey_fences([5, 5, 5, 5])
    assert (fences.q1, fences.q3) == (5, 5)
    assert (fences.lower, fences.upper) == (5, 5)


def test_one_through_nine():
    fences = tukey_fences([1, 2, 3, 4, 5, 6, 7, 8, 9])
    assert (fences.q1, fences.q3) == (3, 7)
    assert (fences.lower, fences.upper) == (-3, 13)


def test_extreme_value_is_flagged():
    fences = tukey_fences([2, 4, 4, 5, 5, 6, 100])
    assert fences.q1 == 4
    assert not fences.contains(100)


def test_empty_input_rejected():
    with pytest.raises(ValueError):
        tukey_fences([])


def test_fences_match_oracle_on_random_lists():
    rng = random.Random(2024)
    for _ in range(500):
        values = [rng.randint(0, 40) for _ in range(rng.randint(1, 50))]
        fences = tukey_fences(values)
        q1, q3, lower, upper = hinge_oracle(values)
        assert (fences.q1, fences.q3, fences.lower, fences.upper) == (
            q1,
            q3,
            lower,
            upper,
        )


def _thread(tid, category, n_answers):
    return Thread(
        thread_id=tid,
        category=category,
        subject="s",
        content="",
        answers=tuple(
            Answer(answer_index=i, raw_text=f"a{i}") for i in range(n_answers)
        ),
    )


def test_filter_keeps_equal_counts():
    threads = [_thread(f"t{i}", "c", 4) for i in range(6)]
    assert filter_by_answer_count(threads) == threads


def test_filter_drops_huge_thread_preserving_order():
    counts = [4, 5, 6, 4, 5, 2235, 6, 5]
    threads = [_thread(f"t{i}", "c", c) for i, c in enumerate(counts)]
    kept = filter_by_answer_count(threads)
    assert [t.thread_id for t in kept] == ["t0", "t1", "t2", "t3", "t4", "t6", "t7"]
    fences = tukey_fences(counts)
    assert all(fences.contains(len(t.answers)) for t in kept)


def test_subsample_exhausts_small_categories():
    threads = [_thread(f"t{i}", "small", 3) for i in range(3)]
    assert subsample_per_category(threads, k=10, seed=5) == threads


def test_subsample_counts_and_determinism():
    threads = [
        _thread(f"{cat}-{i}", cat, 4)
        for cat in [f"cat{j}" for j in range(21)]
        for i in range(15)
    ]
    first = subsample_per_category(threads, k=10, seed=11)
    second = subsample_per_category(threads, k=10, seed=11)
    assert first == second
    assert len(first) == 210
    ids = [t.thread_id for t in first]
    assert len(set(ids)) == len(ids)
    per_cat = {}
    for t in first:
        per_cat[t.category] = per_cat.get(t.category, 0) + 1
    assert all(v == 10 for v in per_cat.values())


def test_subsample_is_subset_in_input_order():
    rng_threads = [_thread(f"t{i}", "c", 4) for i in range(30)]
    picked = subsample_per_category(rng_threads, k=7, seed=1)
    indices = [int(t.thread_id[1:]) for t in picked]
    assert indices == sorted(indices)
    assert set(picked) <= set(rng_threads)


def test_subsample_rejects_bad_k():
    with pytest.raises(ValueError):
        subsample_per_category([], k=0, seed=1)
