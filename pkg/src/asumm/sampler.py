"""Thread sampling: interquartile-fence outlier removal and subsampling.

Threads with unusually many (or few) answers are dropped by fences placed
1.5 interquartile ranges beyond the quartiles of the answer-count
distribution; the survivors are subsampled per category.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .corpus import Thread


@dataclass(frozen=True)
class Fences:
    """Quartiles and the outlier bounds derived from them."""

    q1: float
    q3: float
    iqr: float
    lower: float
    upper: float

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


def _median(sorted_values: list[float]) -> float:
    n = len(sorted_values)
    mid = n // 2
    if n % 2:
        return float(sorted_values[mid])
    return (sorted_values[mid - 1] + sorted_values[mid]) / 2.0


def tukey_fences(values: list[float]) -> Fences:
    """Fences at q1 - 1.5*iqr and q3 + 1.5*iqr, quartiles by Tukey's hinges.

    Hinges are medians of the lower and upper halves of the sorted data,
    both halves including the overall median position when n is odd.
    """
    if not values:
        raise ValueError("cannot compute fences of an empty list")
    data = sorted(float(v) for v in values)
    n = len(data)
    half = n // 2
    if n % 2:
        lower_half = data[: half + 1]
        upper_half = data[half:]
    else:
        lower_half = data[:half]
        upper_half = data[half:]
    q1 = _median(lower_half)
    q3 = _median(upper_half)
    iqr = q3 - q1
    return Fences(q1=q1, q3=q3, iqr=iqr, lower=q1 - 1.5 * iqr, upper=q3 + 1.5 * iqr)


def filter_by_answer_count(threads: list[Thread]) -> list[Thread]:
    """Keep threads whose answer count lies within the pooled fences."""
    if not threads:
        return []
    fences = tukey_fences([len(t.answers) for t in threads])
    return [t for t in threads if fences.contains(len(t.answers))]


def subsample_per_category(
    threads: list[Thread], k: int, seed: int
) -> list[Thread]:
    """Pick up to ``k`` threads per category uniformly without replacement.

    Selection is deterministic under ``seed``; the output preserves the
    input's relative order.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    indices_by_category: dict[str, list[int]] = {}
    for i, thread in enumerate(threads):
        indices_by_category.setdefault(thread.category, []).append(i)

    rng = random.Random(seed)
    chosen: list[int] = []
    for category in sorted(indices_by_category):
        pool = indices_by_category[category]
        take = min(k, len(pool))
        chosen.extend(rng.sample(pool, take))
    return [threads[i] for i in sorted(chosen)]
