"""Template-based question generation, slot filling and validity checks.

The generator is a deterministic grammar over the operator catalog: it takes
the same inputs a learned text-to-text generator would (dataset title and
description, plus the column-to-operator dictionary) and emits a question
whose blanks are later filled from the slice.  Title and description are
accepted and kept with the dataset but do not alter the surface text.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, replace
from datetime import date
from typing import Callable, Optional

from .dataset import Column, Dataset, format_number
from .errors import ArityMismatch, EmptySlice, IncompatibleOperator, MissingMeasure
from .operators import BLANK, INTERROGATIVES, OperatorCatalog, default_catalog
from .slicing import Slice, SlicePredicate

# column-name tokens that read better with "in" than "among" ("in New York")
LOCATION_TOKENS = frozenset({
    "city", "state", "country", "location", "region", "zip", "zipcode",
    "suburb", "county", "town", "place",
})

_TOKEN_RE = re.compile(r"[a-z0-9]+")

MAX_QUESTION_LENGTH = 200


@dataclass(frozen=True)
class QuestionCandidate:
    id: str
    columns: tuple[str, ...]
    operator_map: dict[str, str]
    template_text: str
    slot_values: tuple[str, ...]
    surface_text: str
    score: float
    valid: bool
    slice_ref: Optional[Slice] = None

    @property
    def fixed_column(self) -> Optional[str]:
        return self.slice_ref.fixed_column if self.slice_ref else None


ValidityFilter = Callable[[QuestionCandidate], bool]


def pretty_column(name: str) -> str:
    return re.sub(r"\s+", " ", name.replace("_", " ")).strip().lower()


def _is_location(name: str) -> bool:
    return bool(LOCATION_TOKENS & set(_TOKEN_RE.findall(name.lower())))


def _filter_fragment(spec, column_name: str) -> str:
    fragment = spec.fragment
    if spec.name == "among" and _is_location(column_name):
        fragment = "in ____"
    return fragment.replace("{col}", pretty_column(column_name))


def generate_question(title: Optional[str], description: Optional[str],
                      operator_map: dict[str, str], fixed_column: str, *,
                      entity: str = "records",
                      catalog: Optional[OperatorCatalog] = None,
                      kinds: Optional[dict[str, str]] = None) -> str:
    """Compose the blanked question template for one column-operator map.

    ``operator_map`` is ordered: filters render in its iteration order.  The
    fixed column must map to a measure-role operator and every other column
    to a filter-role operator; when ``kinds`` is given, kind compatibility is
    enforced.
    """
    del title, description  # accepted for interface parity; see module docstring
    catalog = catalog or default_catalog()
    if fixed_column not in operator_map:
        raise MissingMeasure(f"no operator assigned to fixed column {fixed_column!r}")
    measure_name = operator_map[fixed_column]
    if measure_name not in catalog:
        raise IncompatibleOperator(f"unknown operator {measure_name!r}")
    measure = catalog.get(measure_name)
    if measure.role != "measure":
        raise MissingMeasure(f"{measure_name!r} is not a measure operator")
    if kinds is not None and not measure.applies_to(kinds[fixed_column]):
        raise IncompatibleOperator(
            f"measure {measure_name!r} does not apply to {kinds[fixed_column]} column "
            f"{fixed_column!r}")

    filter_fragments: list[str] = []
    for column, op_name in operator_map.items():
        if column == fixed_column:
            continue
        if op_name not in catalog:
            raise IncompatibleOperator(f"unknown operator {op_name!r}")
        spec = catalog.get(op_name)
        if spec.role != "filter":
            raise IncompatibleOperator(f"{op_name!r} is not a filter operator")
        if kinds is not None and not spec.applies_to(kinds[column]):
            raise IncompatibleOperator(
                f"filter {op_name!r} does not apply to {kinds[column]} column {column!r}")
        filter_fragments.append(_filter_fragment(spec, column))

    head = INTERROGATIVES[measure.interrogative]
    body = measure.fragment.replace("{col}", pretty_column(fixed_column))
    body = body.replace("{entity}", entity)
    if "{entity}" not in measure.fragment and not filter_fragments:
        body += f" of {entity}"
    parts = [head, body] + filter_fragments
    return " ".join(parts) + "?"


# --- slot filling -------------------------------------------------------------


def _render_value(value, col: Column) -> str:
    if isinstance(value, float):
        text = format_number(value)
        return f"{col.currency}{text}" if col.currency else text
    if isinstance(value, date):
        return value.isoformat()
    return str(value)


def _slice_column_values(dataset: Dataset, slc: Slice, column_name: str) -> list:
    col = dataset.column(column_name)
    return [col.values[i] for i in slc.member_rows if col.values[i] is not None]


def _boundary_below(col: Column, slice_min: float) -> float:
    """Largest dataset value strictly below the slice minimum, else the
    minimum itself ("above 45" excludes exactly the complement)."""
    below = [v for v in col.values if v is not None and v < slice_min]
    return max(below) if below else slice_min


def _boundary_above(col: Column, slice_max: float) -> float:
    above = [v for v in col.values if v is not None and v > slice_max]
    return min(above) if above else slice_max


def _majority_class(values: list[str]) -> str:
    counts: dict[str, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return min(counts.items(), key=lambda kv: (-kv[1], kv[0]))[0]


def _measure_slot_values(slc: Slice, dataset: Dataset, measure_name: str) -> list[str]:
    if measure_name == "top_k_percent":
        if slc.measure_k is None:
            raise ArityMismatch("top_k_percent requires a configured K")
        return [str(slc.measure_k)]
    if measure_name == "fraction":
        values = _slice_column_values(dataset, slc, slc.fixed_column)
        if not values:
            raise EmptySlice("no values to pick a class label from")
        return [_majority_class([str(v) for v in values])]
    return []


def _predicate_slot_values(pred: SlicePredicate, slc: Slice, dataset: Dataset) -> list[str]:
    col = dataset.column(pred.column_name)
    op = pred.operator
    if op in ("among", "in", "on"):
        return [_render_value(pred.operand, col)]
    if op in ("before", "after"):
        return [_render_value(pred.operand, col)]
    values = _slice_column_values(dataset, slc, pred.column_name)
    if not values:
        raise EmptySlice(f"slice has no values in column {pred.column_name!r}")
    if op in ("above", "more_than"):
        return [_render_value(_boundary_below(col, min(values)), col)]
    if op in ("below", "less_than"):
        return [_render_value(_boundary_above(col, max(values)), col)]
    if op == "within":
        return [_render_value(min(values), col), _render_value(max(values), col)]
    raise ValueError(f"unknown filter operator {op!r}")


def slot_fill(template_text: str, slc: Slice, operator_map: dict[str, str],
              dataset: Dataset, *,
              catalog: Optional[OperatorCatalog] = None) -> tuple[str, tuple[str, ...]]:
    """Fill the template's blanks from the slice, in template order: measure
    blanks first, then one group per filter predicate in subset order."""
    catalog = catalog or default_catalog()
    expected = sum(catalog.get(op).arity for op in operator_map.values() if op in catalog)
    found = template_text.count(BLANK)
    if expected != found:
        raise ArityMismatch(f"template has {found} blanks, operators supply {expected}")
    if not slc.member_rows:
        raise EmptySlice("slice has no member rows")

    values = _measure_slot_values(slc, dataset, operator_map[slc.fixed_column])
    by_column = {p.column_name: p for p in slc.predicates}
    for column in operator_map:
        if column == slc.fixed_column:
            continue
        values.extend(_predicate_slot_values(by_column[column], slc, dataset))

    surface = template_text
    for v in values:
        surface = surface.replace(BLANK, v, 1)
    return surface, tuple(values)


# --- validation ---------------------------------------------------------------


def validate_question(candidate: QuestionCandidate,
                      catalog: Optional[OperatorCatalog] = None) -> bool:
    """Rule-based language-validity verdict for a slot-filled question."""
    catalog = catalog or default_catalog()
    text = candidate.surface_text
    if BLANK in text:
        return False
    if not text.endswith("?"):
        return False
    if not any(text.startswith(head) for head in INTERROGATIVES.values()):
        return False
    if len(text) > MAX_QUESTION_LENGTH:
        return False
    if any(not v for v in candidate.slot_values):
        return False
    lowered = text.lower()
    for column in candidate.columns:
        shown = pretty_column(column)
        if len(re.findall(rf"\b{re.escape(shown)}\b", lowered)) > 1:
            return False
    fragments = []
    for column, op_name in candidate.operator_map.items():
        if op_name in catalog and catalog.get(op_name).role == "filter":
            fragments.append(_filter_fragment(catalog.get(op_name), column))
    filled = _fill_fragments(fragments, candidate.slot_values, candidate, catalog)
    if len(filled) != len(set(filled)):
        return False
    return True


def _fill_fragments(fragments: list[str], slot_values: tuple[str, ...],
                    candidate: QuestionCandidate, catalog: OperatorCatalog) -> list[str]:
    # skip measure-level slot values; they precede filter values
    fixed = candidate.fixed_column
    offset = 0
    if fixed is not None and candidate.operator_map.get(fixed) in catalog:
        offset = catalog.get(candidate.operator_map[fixed]).arity
    values = list(slot_values[offset:])
    filled = []
    for frag in fragments:
        out = frag
        while BLANK in out and values:
            out = out.replace(BLANK, values.pop(0), 1)
        filled.append(out)
    return filled


class RuleBasedValidityFilter:
    """Default pluggable validity filter; replace with a learned scorer by
    passing any callable with the same signature."""

    def __init__(self, catalog: Optional[OperatorCatalog] = None):
        self.catalog = catalog or default_catalog()

    def __call__(self, candidate: QuestionCandidate) -> bool:
        return validate_question(candidate, self.catalog)


# --- slice -> candidate -------------------------------------------------------


def question_id(subset: tuple[str, ...], fixed_column: str, measure: str,
                measure_k: Optional[int],
                predicates: tuple[SlicePredicate, ...]) -> str:
    parts = [
        "|".join(subset), fixed_column, measure, str(measure_k or ""),
        ";".join(f"{p.column_name}:{p.operator}:{p.operand_key()}" for p in predicates),
    ]
    return hashlib.sha1("\x1f".join(parts).encode("utf-8")).hexdigest()[:16]


def candidate_from_slice(dataset: Dataset, slc: Slice, *,
                         entity: str = "records",
                         catalog: Optional[OperatorCatalog] = None,
                         validity: Optional[ValidityFilter] = None) -> QuestionCandidate:
    """Run the generation pipeline (template, slot fill, validate) on a scored
    slice."""
    catalog = catalog or default_catalog()
    operator_map: dict[str, str] = {}
    by_column = {p.column_name: p for p in slc.predicates}
    for column in slc.subset_columns:
        if column == slc.fixed_column:
            operator_map[column] = slc.measure_operator
        else:
            operator_map[column] = by_column[column].operator
    kinds = {c: dataset.column(c).kind for c in slc.subset_columns}
    template = generate_question(dataset.title, dataset.description, operator_map,
                                 slc.fixed_column, entity=entity, catalog=catalog,
                                 kinds=kinds)
    surface, slot_values = slot_fill(template, slc, operator_map, dataset, catalog=catalog)
    candidate = QuestionCandidate(
        id=question_id(slc.subset_columns, slc.fixed_column, slc.measure_operator,
                       slc.measure_k, slc.predicates),
        columns=slc.subset_columns,
        operator_map=operator_map,
        template_text=template,
        slot_values=slot_values,
        surface_text=surface,
        score=slc.interestingness,
        valid=False,
        slice_ref=slc,
    )
    check = validity or RuleBasedValidityFilter(catalog)
    return replace(candidate, valid=bool(check(candidate)))


# --- round-trip ----------------------------------------------------------------


def _parse_rendered(value: str, kind: str):
    from .dataset import parse_number
    if kind == "numerical":
        return parse_number(value)[0]
    if kind == "date":
        return date.fromisoformat(value)
    return value


def reparse_member_rows(dataset: Dataset, candidate: QuestionCandidate) -> tuple[int, ...]:
    """Rebuild the slice membership from the question's rendered slot values
    and predicates; used to check faithfulness by construction."""
    catalog = default_catalog()
    fixed = candidate.fixed_column
    offset = catalog.get(candidate.operator_map[fixed]).arity if fixed else 0
    values = list(candidate.slot_values[offset:])
    predicates: list[SlicePredicate] = []
    for column, op_name in candidate.operator_map.items():
        if column == fixed:
            continue
        spec = catalog.get(op_name)
        kind = dataset.column(column).kind
        taken = [values.pop(0) for _ in range(spec.arity)]
        if op_name == "within":
            operand = (_parse_rendered(taken[0], kind), _parse_rendered(taken[1], kind))
        else:
            operand = _parse_rendered(taken[0], kind)
        predicates.append(SlicePredicate(column, op_name, operand))
    if not predicates:
        col = dataset.column(fixed)
        return tuple(i for i, v in enumerate(col.values) if v is not None)
    cols = [dataset.column(p.column_name) for p in predicates]
    return tuple(
        i for i in range(dataset.row_count)
        if all(p.matches(c.values[i]) for p, c in zip(predicates, cols))
    )
