"""Uncertainty estimates over top-k outcome vectors.

An outcome vector holds one bit per rank: 1 iff that prediction was a
true positive, so its mean is the PPV at k. Confidence intervals come
from the plain percentile bootstrap; model comparison uses a two-sided
Welch t-test on the two bit vectors.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import AbstractSet, Sequence

import numpy as np
from scipy import stats as sps

__all__ = [
    "BootstrapCI",
    "outcome_vector",
    "bootstrap_ci",
    "significance_test",
    "report_to_csv",
]


@dataclass(frozen=True)
class BootstrapCI:
    lo: float
    hi: float
    B: int
    alpha: float


def outcome_vector(ranked_ids: Sequence[int], truth: AbstractSet[int], k: int) -> np.ndarray:
    """Bit per rank 1..k: 1 iff that prediction is in the truth set."""
    if not 1 <= k <= len(ranked_ids):
        raise ValueError(f"k={k} out of range 1..{len(ranked_ids)}")
    return np.array([1 if doc_id in truth else 0 for doc_id in ranked_ids[:k]], dtype=np.int8)


def bootstrap_ci(
    outcomes: Sequence[int] | np.ndarray,
    B: int = 10_000,
    alpha: float = 0.05,
    seed: int = 0,
) -> BootstrapCI:
    """Percentile bootstrap interval for the mean of an outcome vector.

    Draws ``B`` resamples of the full vector size with replacement and
    takes the empirical alpha/2 and 1-alpha/2 quantiles of the resample
    means. Deterministic given ``seed``.
    """
    if B < 1:
        raise ValueError("B must be >= 1")
    if not 0 < alpha < 1:
        raise ValueError("alpha must be in (0, 1)")
    v = np.asarray(outcomes, dtype=np.float64)
    if v.size == 0:
        raise ValueError("outcome vector must be nonempty")
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, v.size, size=(B, v.size))
    means = v[idx].mean(axis=1)
    lo, hi = np.quantile(means, [alpha / 2.0, 1.0 - alpha / 2.0])
    return BootstrapCI(lo=float(lo), hi=float(hi), B=B, alpha=alpha)


def significance_test(a: Sequence[int] | np.ndarray, b: Sequence[int] | np.ndarray) -> float:
    """Two-sided Welch t-test p-value between two outcome vectors.

    Degenerate inputs (both variances zero) yield p = 1 for equal means
    and p = 0 otherwise.
    """
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    if x.size < 2 or y.size < 2:
        raise ValueError("outcome vectors need at least 2 entries")
    if np.var(x) == 0.0 and np.var(y) == 0.0:
        return 1.0 if x.mean() == y.mean() else 0.0
    return float(sps.ttest_ind(x, y, equal_var=False).pvalue)


def report_to_csv(
    rows: Sequence[tuple[str, int, float, BootstrapCI]], p_value: float
) -> str:
    """Comparison report: model, k, ppv, ci_lo, ci_hi, p_value per row."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["model", "k", "ppv", "ci_lo", "ci_hi", "p_value"])
    for model, k, value, ci in rows:
        writer.writerow([model, k, repr(value), repr(ci.lo), repr(ci.hi), repr(p_value)])
    return out.getvalue()
