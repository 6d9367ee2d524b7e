"""Descriptive statistics and one-way ANOVA."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from .data import ModelFrame
from .errors import DataError
from .kernels import f_sf


@dataclass(frozen=True)
class SummaryRow:
    name: str
    mean: float
    sd: float
    median: float
    min: float
    max: float


@dataclass(frozen=True)
class AnovaResult:
    group_label: str
    k: int
    n: int
    f_stat: float
    df_between: int
    df_within: int
    p_value: float


def _summary(name: str, x: np.ndarray) -> SummaryRow:
    sd = float(np.std(x, ddof=1)) if len(x) > 1 else 0.0
    return SummaryRow(
        name=name,
        mean=float(np.mean(x)),
        sd=sd,
        median=float(np.median(x)),
        min=float(np.min(x)),
        max=float(np.max(x)),
    )


def summarize(frame: ModelFrame) -> list[SummaryRow]:
    """One SummaryRow per variable; sd uses the n-1 denominator."""
    if len(frame) == 0:
        raise DataError("cannot summarize an empty frame")
    rows = [
        _summary(name, col)
        for name, col in zip(frame.names, frame.regressor_columns())
    ]
    rows.append(_summary("Loss", frame.loss))
    return rows


def one_way_anova(
    values: Sequence[float],
    groups: Sequence[Hashable],
    label: str = "group",
) -> AnovaResult:
    """F = (SSB/(k-1)) / (SSW/(n-k)); upper-tail p via the F distribution."""
    y = np.asarray(values, dtype=float)
    if len(y) != len(groups):
        raise DataError("values and groups must have equal length")
    keys = list(dict.fromkeys(groups))  # first-appearance order
    k, n = len(keys), len(y)
    if k < 2:
        raise DataError(f"ANOVA needs at least 2 groups, got {k}")
    if n <= k:
        raise DataError(
            f"ANOVA needs more observations than groups (n={n}, k={k})"
        )
    grand = y.mean()
    ssb = 0.0
    ssw = 0.0
    garr = np.asarray(groups, dtype=object)
    for key in keys:
        sub = y[garr == key]
        ssb += len(sub) * (sub.mean() - grand) ** 2
        ssw += float(np.sum((sub - sub.mean()) ** 2))
    msb = ssb / (k - 1)
    msw = ssw / (n - k)
    if msw == 0.0:
        f = 0.0 if msb == 0.0 else math.inf
    else:
        f = msb / msw
    return AnovaResult(
        group_label=label,
        k=k,
        n=n,
        f_stat=f,
        df_between=k - 1,
        df_within=n - k,
        p_value=f_sf(f, k - 1, n - k),
    )


def anova_by_month(frame: ModelFrame) -> AnovaResult:
    """Loss grouped by calendar month-of-year (Jan/Apr/Jul/Oct for quarterly data)."""
    return one_way_anova(frame.loss, [d.month for d in frame.dates], label="month")


def anova_by_year(frame: ModelFrame) -> AnovaResult:
    return one_way_anova(frame.loss, [d.year for d in frame.dates], label="year")
