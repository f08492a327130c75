"""Column interestingness measures and top-K column selection.

Measures are registered by name so configuration can enable or disable them
(``--measures entropy,unalikeability,cv,std,correlation``).  Per-column
scores are min-max normalized across the columns sharing each measure and
averaged into a composite in [0, 1]; the K highest composites are selected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .dataset import CATEGORICAL, DATE, IDENTIFIER, NUMERICAL, Column, Dataset
from .errors import (AllNull, DegenerateTable, InsufficientRows,
                     NoEligibleColumns, ZeroMean, ZeroVariance)
from . import stats

ALL_MEASURES = ("entropy", "unalikeability", "cv", "std", "correlation")


@dataclass
class ColumnProfile:
    column_name: str
    measure_scores: dict[str, float] = field(default_factory=dict)
    composite: float = 0.0
    selected: bool = False


def _label_counts(column: Column) -> dict[str, int]:
    if column.stats.categorical is not None:
        return column.stats.categorical
    counts: dict[str, int] = {}
    for v in column.values:
        if v is None:
            continue
        counts[str(v)] = counts.get(str(v), 0) + 1
    return counts


def entropy_from_counts(counts: dict[str, int]) -> float:
    total = sum(counts.values())
    if total == 0:
        raise AllNull("no non-null values")
    h = 0.0
    for c in counts.values():
        if c:
            p = c / total
            h -= p * math.log2(p)
    return max(h, 0.0)


def unalikeability_from_counts(counts: dict[str, int]) -> float:
    total = sum(counts.values())
    if total == 0:
        raise AllNull("no non-null values")
    return 1.0 - sum((c / total) ** 2 for c in counts.values())


def entropy(column: Column) -> float:
    """Shannon entropy (bits) of a categorical column's label distribution."""
    return entropy_from_counts(_label_counts(column))


def unalikeability(column: Column) -> float:
    """Coefficient of unalikeability 1 - sum(p^2): probability two random
    rows disagree."""
    return unalikeability_from_counts(_label_counts(column))


def coefficient_of_variation(column: Column) -> float:
    """Population std over |mean|; 0 for a constant column."""
    values = column.non_null()
    if not values:
        raise AllNull(f"column {column.name!r} has no values")
    m = stats.mean(values)
    if m == 0.0:
        raise ZeroMean(f"column {column.name!r} has zero mean")
    if len(values) == 1:
        return 0.0
    return stats.stdev(values, ddof=0) / abs(m)


def pearson_correlation(a: Column, b: Column) -> float:
    """Pearson r over pairwise-complete rows."""
    pairs = [(x, y) for x, y in zip(a.values, b.values) if x is not None and y is not None]
    if len(pairs) < 2:
        raise InsufficientRows("need >= 2 pairwise-complete rows")
    xs = [p[0] for p in pairs]
    ys = [p[1] for p in pairs]
    mx, my = stats.mean(xs), stats.mean(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    if sxx == 0.0 or syy == 0.0:
        raise ZeroVariance("a column is constant on pairwise-complete rows")
    sxy = sum((x - mx) * (y - my) for x, y in pairs)
    r = sxy / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def chi_squared_association(a: Column, b: Column) -> float:
    """Pearson chi-squared statistic over the pairwise-complete contingency
    table.  Diagnostic only; it does not feed the per-column composite."""
    pairs = [(x, y) for x, y in zip(a.values, b.values) if x is not None and y is not None]
    if not pairs:
        raise DegenerateTable("no pairwise-complete rows")
    a_labels = sorted({p[0] for p in pairs})
    b_labels = sorted({p[1] for p in pairs})
    if len(a_labels) < 2 or len(b_labels) < 2:
        raise DegenerateTable("a column collapses to one category on complete rows")
    n = len(pairs)
    counts: dict[tuple, int] = {}
    row_tot: dict = {}
    col_tot: dict = {}
    for x, y in pairs:
        counts[(x, y)] = counts.get((x, y), 0) + 1
        row_tot[x] = row_tot.get(x, 0) + 1
        col_tot[y] = col_tot.get(y, 0) + 1
    chi2 = 0.0
    for x in a_labels:
        for y in b_labels:
            expected = row_tot[x] * col_tot[y] / n
            observed = counts.get((x, y), 0)
            chi2 += (observed - expected) ** 2 / expected
    return chi2


def _year_month_counts(column: Column) -> dict[str, int]:
    counts: dict[str, int] = {}
    for v in column.values:
        if v is None:
            continue
        label = f"{v.year:04d}-{v.month:02d}"
        counts[label] = counts.get(label, 0) + 1
    return counts


def _applicable_scores(column: Column, dataset: Dataset, enabled: tuple[str, ...]) -> dict[str, float]:
    scores: dict[str, float] = {}
    if column.kind == CATEGORICAL:
        if "entropy" in enabled:
            scores["entropy"] = entropy(column)
        if "unalikeability" in enabled:
            scores["unalikeability"] = unalikeability(column)
    elif column.kind == NUMERICAL:
        if "cv" in enabled:
            try:
                scores["cv"] = coefficient_of_variation(column)
            except ZeroMean:
                scores["cv"] = 0.0  # undefined CV scores 0, not a hard failure
        if "std" in enabled:
            scores["std"] = column.stats.numeric.std if column.stats.numeric else 0.0
        if "correlation" in enabled:
            best = None
            for other in dataset.columns:
                if other.name == column.name or other.kind != NUMERICAL:
                    continue
                try:
                    r = abs(pearson_correlation(column, other))
                except (InsufficientRows, ZeroVariance):
                    continue
                best = r if best is None else max(best, r)
            if best is not None:
                scores["correlation"] = best
    elif column.kind == DATE:
        if "unalikeability" in enabled:
            counts = _year_month_counts(column)
            if counts:
                scores["unalikeability"] = unalikeability_from_counts(counts)
    return scores


def select_top_k_columns(dataset: Dataset, k: int,
                         measures: tuple[str, ...] | None = None) -> list[ColumnProfile]:
    """Profile every eligible column and mark the ``k`` highest composites.

    Identifier and all-null columns are never eligible.  Ties break toward
    the earlier column in file order.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    enabled = tuple(measures) if measures else ALL_MEASURES
    eligible = [
        c for c in dataset.columns
        if c.kind != IDENTIFIER and c.non_null_count > 0
    ]
    if not eligible:
        raise NoEligibleColumns("dataset has no usable non-identifier columns")

    profiles = [ColumnProfile(column_name=c.name) for c in eligible]
    for col, prof in zip(eligible, profiles):
        prof.measure_scores = _applicable_scores(col, dataset, enabled)

    # min-max normalize each measure across the columns sharing it
    by_measure: dict[str, list[float]] = {}
    for prof in profiles:
        for m, v in prof.measure_scores.items():
            by_measure.setdefault(m, []).append(v)
    normalized: list[dict[str, float]] = []
    for prof in profiles:
        norm: dict[str, float] = {}
        for m, v in prof.measure_scores.items():
            lo, hi = min(by_measure[m]), max(by_measure[m])
            if hi > lo:
                norm[m] = (v - lo) / (hi - lo)
            else:
                norm[m] = 1.0 if hi > 0 else 0.0
        normalized.append(norm)

    for prof, norm in zip(profiles, normalized):
        prof.composite = sum(norm.values()) / len(norm) if norm else 0.0

    order = sorted(range(len(profiles)), key=lambda i: (-profiles[i].composite, i))
    for i in order[:k]:
        profiles[i].selected = True
    return profiles


def selected_column_names(profiles: list[ColumnProfile]) -> list[str]:
    return [p.column_name for p in profiles if p.selected]


def column_pair_diagnostics(dataset: Dataset) -> list[dict]:
    """Pairwise association diagnostics: Pearson r for numeric pairs and the
    chi-squared statistic for categorical pairs."""
    out: list[dict] = []
    cols = dataset.columns
    for i in range(len(cols)):
        for j in range(i + 1, len(cols)):
            a, b = cols[i], cols[j]
            if a.kind == NUMERICAL and b.kind == NUMERICAL:
                try:
                    out.append({"columns": [a.name, b.name], "measure": "pearson",
                                "value": pearson_correlation(a, b)})
                except (InsufficientRows, ZeroVariance):
                    continue
            elif a.kind == CATEGORICAL and b.kind == CATEGORICAL:
                try:
                    out.append({"columns": [a.name, b.name], "measure": "chi_squared",
                                "value": chi_squared_association(a, b)})
                except DegenerateTable:
                    continue
    return out
