# SPDX-License-Identifier: GPL-3.0-or-later
# Copyright (c) 2025 Santiago Bossa
#
# This file is part of directed-share.
#
# directed-share is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# directed-share is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with directed-share.  If not, see the LICENSE file in the project root.

"""
Two-sample and paired t-tests, Cohen's d and Pearson correlation.

Tail probabilities come from :mod:`scipy.stats` (regularized incomplete
beta function). Every :class:`TTestResult` carries the two-sided p-value
and both one-sided tails.

Public API
----------
- :class:`SampleSummary`, :class:`TTestResult`, :class:`CorrelationResult`
- :func:`welch_t_from_summary`, :func:`pooled_t_from_summary`, :func:`welch_t`
- :func:`paired_t`
- :func:`cohens_d`
- :func:`pearson_corr`, :func:`pearson_test`
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
from scipy import stats as sps

from ..errors import ContractError, DegenerateSampleError

__all__ = [
    "SampleSummary",
    "TTestResult",
    "CorrelationResult",
    "welch_t_from_summary",
    "pooled_t_from_summary",
    "welch_t",
    "paired_t",
    "cohens_d",
    "pearson_corr",
    "pearson_test",
]

Variant = Literal["welch", "pooled", "paired"]


# --------------------------------------------------------------------------- #
# Types
# --------------------------------------------------------------------------- #
@dataclass(frozen=True)
class SampleSummary:
    """``n``, mean and sample standard deviation (``n - 1`` denominator)."""

    n: int
    mean: float
    sd: float

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 2:
            raise ContractError(f"sample size must be an integer >= 2, got {self.n}")
        if not math.isfinite(self.mean) or not math.isfinite(self.sd) or self.sd < 0:
            raise ContractError(f"bad summary: mean={self.mean} sd={self.sd}")
        object.__setattr__(self, "n", int(self.n))

    @classmethod
    def of(cls, values: Sequence[float]) -> "SampleSummary":
        x = np.asarray(values, dtype=np.float64)
        if x.size < 2:
            raise ContractError(f"need at least 2 values, got {x.size}")
        return cls(int(x.size), float(x.mean()), float(x.std(ddof=1)))


@dataclass(frozen=True)
class TTestResult:
    """t statistic with its degrees of freedom and tail probabilities.

    Attributes
    ----------
    p :
        Two-sided p-value.
    p_greater, p_less :
        One-sided p-values for ``H1: mean difference > 0`` and ``< 0``.
    infinite :
        ``True`` when the standard error is zero but the difference is not.
    """

    t: float
    df: float
    p: float
    p_greater: float
    p_less: float
    variant: Variant
    infinite: bool = False


def _result(t: float, df: float, variant: Variant) -> TTestResult:
    if df <= 0:
        raise ContractError(f"degrees of freedom must be positive, got {df}")
    if math.isinf(t):
        greater = 0.0 if t > 0 else 1.0
        return TTestResult(t, df, 0.0, greater, 1.0 - greater, variant, infinite=True)
    p = float(min(1.0, 2.0 * sps.t.sf(abs(t), df)))
    return TTestResult(
        float(t), float(df), p, float(sps.t.sf(t, df)), float(sps.t.cdf(t, df)), variant
    )


# --------------------------------------------------------------------------- #
# Unpaired
# --------------------------------------------------------------------------- #
def welch_t_from_summary(a: SampleSummary, b: SampleSummary) -> TTestResult:
    """Welch's unequal-variance t-test of ``mean(a) - mean(b)``.

    Raises
    ------
    DegenerateSampleError
        Both standard deviations are zero.

    Examples
    --------
    >>> r = welch_t_from_summary(SampleSummary(301, 4.18, 0.95), SampleSummary(665, 3.70, 1.11))
    >>> round(r.t, 2), round(r.df)
    (6.89, 670)
    """
    va, vb = a.sd**2 / a.n, b.sd**2 / b.n
    se2 = va + vb
    if se2 == 0.0:
        raise DegenerateSampleError("both samples have zero variance")
    t = (a.mean - b.mean) / math.sqrt(se2)
    df = se2**2 / (va**2 / (a.n - 1) + vb**2 / (b.n - 1))
    return _result(t, df, "welch")


def pooled_t_from_summary(a: SampleSummary, b: SampleSummary) -> TTestResult:
    """Student's equal-variance t-test, ``df = na + nb - 2``."""
    sp = _pooled_sd(a, b)
    if sp == 0.0:
        raise DegenerateSampleError("both samples have zero variance")
    t = (a.mean - b.mean) / (sp * math.sqrt(1.0 / a.n + 1.0 / b.n))
    return _result(t, a.n + b.n - 2, "pooled")


def welch_t(xs: Sequence[float], ys: Sequence[float]) -> TTestResult:
    return welch_t_from_summary(SampleSummary.of(xs), SampleSummary.of(ys))


# --------------------------------------------------------------------------- #
# Paired
# --------------------------------------------------------------------------- #
def paired_t(differences: Sequence[float]) -> TTestResult:
    """One-sample t-test of the paired differences against 0.

    All-zero differences give ``t = 0``; constant non-zero differences give
    an infinite t (``infinite=True``, ``p = 0``).
    """
    d = np.asarray(differences, dtype=np.float64)
    if d.size < 2:
        raise ContractError(f"paired t-test needs at least 2 differences, got {d.size}")
    m, s = float(d.mean()), float(d.std(ddof=1))
    if s == 0.0:
        t = 0.0 if m == 0.0 else math.copysign(math.inf, m)
    else:
        t = m / (s / math.sqrt(d.size))
    return _result(t, d.size - 1, "paired")


# --------------------------------------------------------------------------- #
# Effect size / correlation
# --------------------------------------------------------------------------- #
def _pooled_sd(a: SampleSummary, b: SampleSummary) -> float:
    return math.sqrt(((a.n - 1) * a.sd**2 + (b.n - 1) * b.sd**2) / (a.n + b.n - 2))


def cohens_d(a: SampleSummary, b: SampleSummary) -> float:
    """``(mean(a) - mean(b)) / pooled sd``.

    Raises
    ------
    DegenerateSampleError
        The pooled standard deviation is zero.
    """
    sp = _pooled_sd(a, b)
    if sp == 0.0:
        raise DegenerateSampleError("pooled standard deviation is zero")
    return (a.mean - b.mean) / sp


def pearson_corr(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample Pearson correlation, clipped to ``[-1, 1]``.

    Raises
    ------
    ContractError
        Different lengths or fewer than two pairs.
    DegenerateSampleError
        Either variable has zero variance.
    """
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ContractError(f"length mismatch: {x.shape} vs {y.shape}")
    if x.size < 2:
        raise ContractError("correlation needs at least 2 pairs")
    xc, yc = x - x.mean(), y - y.mean()
    sxx, syy = float(xc @ xc), float(yc @ yc)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateSampleError("correlation undefined for a constant variable")
    r = float(xc @ yc) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    n: int
    p: float


def pearson_test(xs: Sequence[float], ys: Sequence[float]) -> CorrelationResult:
    """Correlation with its two-sided p-value (t with ``n - 2`` df)."""
    r = pearson_corr(xs, ys)
    n = len(xs)
    if n < 3 or abs(r) == 1.0:
        return CorrelationResult(r, n, 0.0 if abs(r) == 1.0 else 1.0)
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return CorrelationResult(r, n, float(min(1.0, 2.0 * sps.t.sf(abs(t), n - 2))))
