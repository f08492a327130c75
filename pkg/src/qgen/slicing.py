"""Slice enumeration, significance testing and per-subset selection.

For every subset of the selected columns, one column is fixed and an
aggregate measure applied to it while the remaining columns are carved into
filter predicates; each resulting slice is compared against the rest of the
dataset and the most interesting significant slice per subset survives.

Scoring contract: tested slices score |effect size| * (1 - p value);
effect-only and descriptive slices score |effect size| * 0.5.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from datetime import date
from typing import Optional

from .dataset import CATEGORICAL, DATE, NUMERICAL, Column, Dataset, format_number
from .errors import InsufficientData, NoViableSlices
from .operators import OperatorCatalog, default_catalog
from . import stats

# test_name values that carry a real p-value; everything else scores as
# effect-only
TESTED = frozenset({"welch-t", "two-proportion-z", "one-proportion-z"})

EFFECT_ONLY_MEASURES = frozenset({"min", "max", "std", "outlier", "top_k_percent"})
WELCH_MEASURES = frozenset({"average", "median", "total"})
SHARE_MEASURES = frozenset({"fraction", "majority", "minority"})


@dataclass(frozen=True)
class SliceConfig:
    alpha: float = 0.05
    min_slice_size: int = 2
    r_max: int = 3
    effect_floor: float = 0.5
    top_k_percent_values: tuple[int, ...] = (5, 10, 25)


@dataclass(frozen=True)
class SlicePredicate:
    column_name: str
    operator: str
    operand: object  # number | label | date | (lo, hi) closed interval

    def matches(self, value) -> bool:
        if value is None:
            return False
        op = self.operator
        if op in ("among", "in", "on"):
            return value == self.operand
        if op in ("above", "more_than", "after"):
            return value > self.operand
        if op in ("below", "less_than", "before"):
            return value < self.operand
        if op == "within":
            lo, hi = self.operand
            return lo <= value <= hi
        raise ValueError(f"unknown filter operator {op!r}")

    def operand_key(self) -> str:
        return render_operand(self.operand)


def render_operand(operand) -> str:
    if isinstance(operand, tuple):
        return f"{render_operand(operand[0])}..{render_operand(operand[1])}"
    if isinstance(operand, float):
        return format_number(operand)
    if isinstance(operand, date):
        return operand.isoformat()
    return str(operand)


@dataclass(frozen=True)
class SignificanceResult:
    test_name: str
    statistic: float
    p_value: float
    effect_size: float
    significant: bool


@dataclass(frozen=True)
class Slice:
    subset_columns: tuple[str, ...]
    fixed_column: str
    measure_operator: str = ""
    predicates: tuple[SlicePredicate, ...] = ()
    member_rows: tuple[int, ...] = ()
    significance: Optional[SignificanceResult] = None
    interestingness: float = 0.0
    measure_k: Optional[int] = None  # top_k_percent variant

    @property
    def is_pseudo(self) -> bool:
        return len(self.subset_columns) == 1 and not self.predicates

    def operand_keys(self) -> tuple[str, ...]:
        return tuple(p.operand_key() for p in self.predicates)


def enumerate_column_subsets(selected: list[str], r_max: int) -> list[tuple[str, ...]]:
    """All non-empty subsets of size <= r_max, each in original column order,
    emitted by size then lexicographic on column indices."""
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    out: list[tuple[str, ...]] = []
    for r in range(1, min(r_max, len(selected)) + 1):
        out.extend(itertools.combinations(selected, r))
    return out


def predicate_menu(dataset: Dataset, column_name: str, config: SliceConfig) -> list[SlicePredicate]:
    """Per-column predicate menu: one equality predicate per frequent category,
    quartile thresholds for numbers, the median split for dates."""
    col = dataset.column(column_name)
    if col.kind == CATEGORICAL:
        assert col.stats.categorical is not None
        return [
            SlicePredicate(column_name, "among", label)
            for label, count in col.stats.categorical.items()
            if count >= config.min_slice_size
        ]
    if col.kind == NUMERICAL:
        st = col.stats.numeric
        if st is None:
            return []
        raw = [
            ("above", st.q1), ("above", st.q2), ("above", st.q3),
            ("below", st.q1), ("below", st.q2), ("below", st.q3),
            ("within", (st.q1, st.q3)),
        ]
        menu: list[SlicePredicate] = []
        seen: set[tuple] = set()
        for op, operand in raw:
            key = (op, operand)
            if key not in seen:
                seen.add(key)
                menu.append(SlicePredicate(column_name, op, operand))
        return menu
    if col.kind == DATE:
        st = col.stats.date
        if st is None:
            return []
        return [
            SlicePredicate(column_name, "before", st.median),
            SlicePredicate(column_name, "after", st.median),
        ]
    return []


def _member_rows(dataset: Dataset, predicates: tuple[SlicePredicate, ...]) -> tuple[int, ...]:
    cols = [dataset.column(p.column_name) for p in predicates]
    members = []
    for i in range(dataset.row_count):
        if all(p.matches(c.values[i]) for p, c in zip(predicates, cols)):
            members.append(i)
    return tuple(members)


def candidate_slices(dataset: Dataset, subset: tuple[str, ...], fixed_column: str,
                     config: SliceConfig = SliceConfig()) -> list[Slice]:
    """Cross product of the non-fixed columns' predicate menus, dropping
    candidates that violate the minimum size on either side.

    For r = 1 the single whole-column pseudo-slice is emitted so descriptive
    single-column questions still arise.
    """
    if fixed_column not in subset:
        raise ValueError(f"fixed column {fixed_column!r} not in subset")
    non_fixed = [c for c in subset if c != fixed_column]
    if not non_fixed:
        col = dataset.column(fixed_column)
        members = tuple(i for i, v in enumerate(col.values) if v is not None)
        if not members:
            raise NoViableSlices(f"column {fixed_column!r} is entirely null")
        return [Slice(subset_columns=subset, fixed_column=fixed_column, member_rows=members)]

    menus = [predicate_menu(dataset, c, config) for c in non_fixed]
    if any(not menu for menu in menus):
        raise NoViableSlices(f"no viable predicates for subset {subset!r}")
    out: list[Slice] = []
    for combo in itertools.product(*menus):
        members = _member_rows(dataset, combo)
        if len(members) < config.min_slice_size:
            continue
        if dataset.row_count - len(members) < config.min_slice_size:
            continue
        out.append(Slice(
            subset_columns=subset,
            fixed_column=fixed_column,
            predicates=tuple(combo),
            member_rows=members,
        ))
    if not out:
        raise NoViableSlices(f"every candidate violates size bounds for subset {subset!r}")
    return out


# --- significance ------------------------------------------------------------


def _split_values(col: Column, members: set[int]):
    inside, outside = [], []
    for i, v in enumerate(col.values):
        if v is None:
            continue
        (inside if i in members else outside).append(v)
    return inside, outside


def _majority_label(labels: list[str]) -> tuple[str, int]:
    counts: dict[str, int] = {}
    for v in labels:
        counts[v] = counts.get(v, 0) + 1
    best = min(counts.items(), key=lambda kv: (-kv[1], kv[0]))  # ties -> smallest label
    return best


def _minority_label(labels: list[str]) -> tuple[str, int]:
    counts: dict[str, int] = {}
    for v in labels:
        counts[v] = counts.get(v, 0) + 1
    best = min(counts.items(), key=lambda kv: (kv[1], kv[0]))
    return best


def _column_range(col: Column) -> float:
    st = col.stats.numeric
    if st is None:
        return 0.0
    return st.maximum - st.minimum


def _group_stat(measure: str, values: list[float], col: Column, k: Optional[int]) -> float:
    if measure == "min":
        return min(values)
    if measure == "max":
        return max(values)
    if measure == "std":
        return stats.stdev(values, ddof=0) if len(values) > 1 else 0.0
    if measure == "outlier":
        st = col.stats.numeric
        iqr = st.q3 - st.q1
        lo, hi = st.q1 - 1.5 * iqr, st.q3 + 1.5 * iqr
        return sum(1 for v in values if v < lo or v > hi) / len(values)
    if measure == "top_k_percent":
        threshold = stats.quantile(sorted(col.non_null()), 1.0 - k / 100.0)
        return sum(1 for v in values if v >= threshold) / len(values)
    raise ValueError(f"not an effect-only measure: {measure}")


def test_slice_significance(slc: Slice, dataset: Dataset,
                            alpha: float = 0.05,
                            config: SliceConfig = SliceConfig()) -> SignificanceResult:
    """Test whether the slice differs from the rest of the dataset on the
    fixed column under the slice's measure operator.

    Central measures on numbers use Welch's t-test with Cohen's d; share
    measures on categories use the pooled two-proportion z-test; missing
    uses the z-test on null rates.  min/max/std compare group statistics
    normalized by the column's full range, outlier/top-K-percent compare
    group shares; these are effect-only (p reported as 1) and gate on
    ``effect_floor``.  Pseudo-slices are descriptive: numeric measures are
    always eligible with the coefficient of variation as effect size, share
    measures run a one-proportion z-test against uniformity.
    """
    col = dataset.column(slc.fixed_column)
    measure = slc.measure_operator
    members = set(slc.member_rows)

    if slc.is_pseudo:
        return _test_pseudo(slc, col, alpha)

    if measure in WELCH_MEASURES:
        inside, outside = _split_values(col, members)
        need = max(2, config.min_slice_size)
        if len(inside) < need or len(outside) < need:
            raise InsufficientData(
                f"need >= {need} non-null values on both sides of {slc.fixed_column!r}")
        res = stats.welch_t_test(inside, outside)
        effect = stats.cohens_d(inside, outside)
        return SignificanceResult("welch-t", res.statistic, res.p_value,
                                  effect, res.p_value < alpha)

    if measure in SHARE_MEASURES:
        inside, outside = _split_values(col, members)
        if len(inside) < config.min_slice_size or len(outside) < config.min_slice_size:
            raise InsufficientData("not enough labelled rows on both sides")
        label, count = _majority_label(inside)
        x2 = sum(1 for v in outside if v == label)
        res = stats.two_proportion_z_test(count, len(inside), x2, len(outside))
        effect = abs(count / len(inside) - x2 / len(outside))
        return SignificanceResult("two-proportion-z", res.statistic, res.p_value,
                                  effect, res.p_value < alpha)

    if measure == "missing":
        n1 = len(members)
        n2 = dataset.row_count - n1
        if n1 < config.min_slice_size or n2 < config.min_slice_size:
            raise InsufficientData("groups too small for null-rate comparison")
        x1 = sum(1 for i in slc.member_rows if col.values[i] is None)
        x2 = col.stats.null_count - x1
        res = stats.two_proportion_z_test(x1, n1, x2, n2)
        effect = abs(x1 / n1 - x2 / n2)
        return SignificanceResult("two-proportion-z", res.statistic, res.p_value,
                                  effect, res.p_value < alpha)

    if measure in EFFECT_ONLY_MEASURES:
        inside, outside = _split_values(col, members)
        if len(inside) < config.min_slice_size or len(outside) < config.min_slice_size:
            raise InsufficientData("not enough values for group statistics")
        stat_in = _group_stat(measure, inside, col, slc.measure_k)
        stat_out = _group_stat(measure, outside, col, slc.measure_k)
        diff = stat_in - stat_out
        if measure in ("min", "max", "std"):
            rng = _column_range(col)
            effect = abs(diff) / rng if rng > 0 else 0.0
        else:
            effect = abs(diff)  # share difference, already in [0, 1]
        return SignificanceResult("effect-only", diff, 1.0,
                                  effect, effect >= config.effect_floor)

    raise ValueError(f"unknown measure operator {measure!r}")


def _test_pseudo(slc: Slice, col: Column, alpha: float) -> SignificanceResult:
    measure = slc.measure_operator
    if measure in SHARE_MEASURES:
        labels = col.non_null()
        distinct = col.stats.distinct_count
        if measure == "minority":
            label, count = _minority_label(labels)
        else:
            label, count = _majority_label(labels)
        p0 = 1.0 / distinct if distinct else 1.0
        res = stats.one_proportion_z_test(count, len(labels), p0)
        effect = abs(count / len(labels) - p0)
        return SignificanceResult("one-proportion-z", res.statistic, res.p_value,
                                  effect, res.p_value < alpha)
    if measure == "missing":
        rate = col.stats.null_count / max(1, len(col.values))
        return SignificanceResult("descriptive", rate, 1.0, rate, rate > 0.0)
    # numeric measures: descriptive single-column questions are always
    # eligible, ranked low via the effect-only score
    values = col.non_null()
    m = stats.mean(values)
    cv = 0.0
    if m != 0.0 and len(values) > 1:
        cv = stats.stdev(values, ddof=0) / abs(m)
    return SignificanceResult("descriptive", cv, 1.0, cv, True)


def interestingness_score(sig: SignificanceResult) -> float:
    if sig.test_name in TESTED:
        return abs(sig.effect_size) * (1.0 - sig.p_value)
    return abs(sig.effect_size) * 0.5


def best_slice_per_subset(dataset: Dataset, subset: tuple[str, ...],
                          config: SliceConfig = SliceConfig(),
                          catalog: Optional[OperatorCatalog] = None) -> Optional[Slice]:
    """Argmax over (fixed column, measure, slice) whose significance gate
    passes; None when nothing qualifies.

    Ties break toward the earlier fixed column, then catalog order, then
    ascending lexicographic predicate operands.
    """
    catalog = catalog or default_catalog()
    best: Optional[Slice] = None
    best_key: Optional[tuple] = None
    for fixed_idx, fixed in enumerate(subset):
        kind = dataset.column(fixed).kind
        measure_specs = catalog.measures_for(kind)
        if not measure_specs:
            continue
        try:
            candidates = candidate_slices(dataset, subset, fixed, config)
        except NoViableSlices:
            continue
        for m_idx, spec in enumerate(measure_specs):
            k_variants = (
                list(enumerate(config.top_k_percent_values))
                if spec.name == "top_k_percent" else [(0, None)]
            )
            for k_idx, k in k_variants:
                for cand in candidates:
                    slc = replace(cand, measure_operator=spec.name, measure_k=k)
                    try:
                        sig = test_slice_significance(slc, dataset, config.alpha, config)
                    except InsufficientData:
                        continue
                    if not sig.significant:
                        continue
                    score = interestingness_score(sig)
                    key = (-score, fixed_idx, m_idx, k_idx, slc.operand_keys())
                    if best_key is None or key < best_key:
                        best_key = key
                        best = replace(slc, significance=sig, interestingness=score)
    return best
