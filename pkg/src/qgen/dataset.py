"""Delimited-file ingestion, column type inference and profiling.

A loaded :class:`Dataset` is immutable; every downstream computation is a
pure function of it.
"""

from __future__ import annotations

import csv
import hashlib
import io
import re
from dataclasses import dataclass, field
from datetime import date, datetime
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .errors import DuplicateColumnName, EmptyInput, RaggedRows
from . import stats

NUMERICAL = "numerical"
CATEGORICAL = "categorical"
DATE = "date"
IDENTIFIER = "identifier"

KINDS = (NUMERICAL, CATEGORICAL, DATE, IDENTIFIER)

CURRENCY_SYMBOLS = ("$", "€", "£")  # $, euro, pound

DEFAULT_NULL_MARKERS = frozenset({"", "na", "n/a", "null"})
DEFAULT_DATE_FORMATS = ("%Y-%m-%d", "%m/%d/%Y", "%d/%m/%Y")

_ID_TOKEN_RE = re.compile(r"[a-z0-9]+")


@dataclass(frozen=True)
class IngestOptions:
    delimiter: str = ","
    date_formats: Sequence[str] = DEFAULT_DATE_FORMATS
    numeric_threshold: float = 0.9  # parse-vote threshold for numeric and date kinds
    id_threshold: float = 0.95      # distinct/non-null ratio for identifier reclassification
    null_markers: frozenset[str] = DEFAULT_NULL_MARKERS
    name: Optional[str] = None
    title: Optional[str] = None
    description: Optional[str] = None


@dataclass(frozen=True)
class NumericStats:
    minimum: float
    maximum: float
    mean: float
    std: float  # population
    q1: float
    q2: float
    q3: float


@dataclass(frozen=True)
class DateStats:
    minimum: date
    maximum: date
    median: date


@dataclass(frozen=True)
class ColumnStats:
    null_count: int
    distinct_count: int
    numeric: Optional[NumericStats] = None
    categorical: Optional[dict[str, int]] = None  # label -> count, first-appearance order
    date: Optional[DateStats] = None


@dataclass(frozen=True)
class Column:
    name: str
    kind: str
    values: tuple  # None marks a null; floats / str labels / datetime.date
    stats: ColumnStats
    currency: Optional[str] = None  # symbol stripped from numeric cells, if any

    def non_null(self) -> list:
        return [v for v in self.values if v is not None]

    @property
    def non_null_count(self) -> int:
        return len(self.values) - self.stats.null_count


@dataclass(frozen=True)
class Dataset:
    id: str
    name: str
    columns: tuple[Column, ...]
    row_count: int
    title: Optional[str] = None
    description: Optional[str] = None
    _by_name: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_name", {c.name: c for c in self.columns})

    def column(self, name: str) -> Column:
        return self._by_name[name]

    @property
    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]

    def column_index(self, name: str) -> int:
        return self.column_names.index(name)

    @property
    def content_hash(self) -> str:
        return hashlib.sha256(self.to_canonical_csv().encode("utf-8")).hexdigest()

    def to_canonical_csv(self) -> str:
        """Canonical column-value form: header plus one row per record."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.column_names)
        for i in range(self.row_count):
            writer.writerow([_render_cell(c.values[i]) for c in self.columns])
        return buf.getvalue()


def _render_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format_number(value)
    if isinstance(value, date):
        return value.isoformat()
    return str(value)


def format_number(value: float) -> str:
    """Render a float without exponent noise; integral values drop the '.0'."""
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def parse_number(cell: str) -> tuple[float, Optional[str]]:
    """Parse a numeric cell, stripping a leading currency symbol and thousands
    separators.  Returns (value, currency symbol or None); raises ValueError."""
    text = cell.strip()
    currency = None
    for sym in CURRENCY_SYMBOLS:
        if text.startswith(sym):
            currency = sym
            text = text[len(sym):].strip()
            break
    text = text.replace(",", "")
    value = float(text)
    if value != value or value in (float("inf"), float("-inf")):
        raise ValueError(f"non-finite number: {cell!r}")
    return value, currency


def _parse_date(cell: str, fmt: str) -> date:
    return datetime.strptime(cell.strip(), fmt).date()


def _is_null(cell: str, markers: frozenset[str]) -> bool:
    return cell.strip().lower() in markers


def _name_has_id_token(name: str) -> bool:
    return "id" in _ID_TOKEN_RE.findall(name.lower())


def build_column(name: str, cells: Sequence[Optional[str]], options: IngestOptions) -> Column:
    """Infer a column's kind from raw text cells and profile it.

    ``cells`` may contain None for pre-marked nulls (frame ingestion); string
    cells matching the null markers are treated as nulls too.
    """
    raw: list[Optional[str]] = [
        None if c is None or _is_null(c, options.null_markers) else c.strip()
        for c in cells
    ]
    non_null = [c for c in raw if c is not None]

    if non_null:
        parsed_num: list[Optional[tuple[float, Optional[str]]]] = []
        ok = 0
        for c in non_null:
            try:
                parsed_num.append(parse_number(c))
                ok += 1
            except ValueError:
                parsed_num.append(None)
        if ok / len(non_null) >= options.numeric_threshold:
            return _finish_numeric(name, raw, options)

        for fmt in options.date_formats:
            ok = 0
            for c in non_null:
                try:
                    _parse_date(c, fmt)
                    ok += 1
                except ValueError:
                    pass
            if ok / len(non_null) >= options.numeric_threshold:
                return _finish_date(name, raw, fmt, options)

    return _finish_categorical(name, raw, options)


def _finish_numeric(name: str, raw: list[Optional[str]], options: IngestOptions) -> Column:
    values: list[Optional[float]] = []
    currency: Optional[str] = None
    for c in raw:
        if c is None:
            values.append(None)
            continue
        try:
            v, sym = parse_number(c)
        except ValueError:
            values.append(None)  # minority unparseable cells become nulls
            continue
        values.append(v)
        if sym and currency is None:
            currency = sym
    present = [v for v in values if v is not None]
    numeric = None
    if present:
        q1, q2, q3 = stats.quartiles(present)
        numeric = NumericStats(
            minimum=min(present),
            maximum=max(present),
            mean=stats.mean(present),
            std=stats.stdev(present, ddof=0),
            q1=q1, q2=q2, q3=q3,
        )
    col_stats = ColumnStats(
        null_count=len(values) - len(present),
        distinct_count=len(set(present)),
        numeric=numeric,
    )
    kind = NUMERICAL
    if present and col_stats.distinct_count / len(present) >= options.id_threshold \
            and _name_has_id_token(name):
        kind = IDENTIFIER
    return Column(name=name, kind=kind, values=tuple(values), stats=col_stats, currency=currency)


def _finish_date(name: str, raw: list[Optional[str]], fmt: str, options: IngestOptions) -> Column:
    values: list[Optional[date]] = []
    for c in raw:
        if c is None:
            values.append(None)
            continue
        try:
            values.append(_parse_date(c, fmt))
        except ValueError:
            values.append(None)
    present = sorted(v for v in values if v is not None)
    date_stats = None
    if present:
        # median date: earlier of the two middles for even counts
        date_stats = DateStats(
            minimum=present[0],
            maximum=present[-1],
            median=present[(len(present) - 1) // 2],
        )
    col_stats = ColumnStats(
        null_count=len(values) - len(present),
        distinct_count=len(set(present)),
        date=date_stats,
    )
    kind = DATE
    if present and col_stats.distinct_count / len(present) >= options.id_threshold \
            and _name_has_id_token(name):
        kind = IDENTIFIER
    return Column(name=name, kind=kind, values=tuple(values), stats=col_stats)


def _finish_categorical(name: str, raw: list[Optional[str]], options: IngestOptions) -> Column:
    present = [c for c in raw if c is not None]
    histogram: dict[str, int] = {}
    for c in present:
        histogram[c] = histogram.get(c, 0) + 1
    col_stats = ColumnStats(
        null_count=len(raw) - len(present),
        distinct_count=len(histogram),
        categorical=histogram,
    )
    kind = CATEGORICAL
    if present and col_stats.distinct_count / len(present) >= options.id_threshold:
        kind = IDENTIFIER
    return Column(name=name, kind=kind, values=tuple(raw), stats=col_stats)


def load_dataset(source, options: IngestOptions = IngestOptions()) -> Dataset:
    """Load a delimited text table (header row required) into a Dataset.

    ``source`` may be a filesystem path, bytes, or a text/binary stream.
    """
    name, text = _read_source(source, options)
    reader = csv.reader(io.StringIO(text), delimiter=options.delimiter)
    # blank lines come back as empty lists; a single empty cell is a null row
    rows = [row for row in reader if row]
    if not rows:
        raise EmptyInput("no header row found")
    header = [h.strip() for h in rows[0]]
    if not any(header):
        raise EmptyInput("header row is empty")
    if len(set(header)) != len(header):
        dupes = sorted({h for h in header if header.count(h) > 1})
        raise DuplicateColumnName(f"duplicate column name(s): {', '.join(dupes)}")
    body = rows[1:]
    if not body:
        raise EmptyInput("no data rows")
    for i, row in enumerate(body):
        if len(row) != len(header):
            raise RaggedRows(
                f"row {i + 2} has {len(row)} cells, expected {len(header)}"
            )
    columns = tuple(
        build_column(header[j], [row[j] for row in body], options)
        for j in range(len(header))
    )
    dataset_name = options.name or name
    ds = Dataset(
        id="",  # placeholder until content hash is known
        name=dataset_name,
        columns=columns,
        row_count=len(body),
        title=options.title,
        description=options.description,
    )
    return Dataset(
        id=ds.content_hash[:12],
        name=dataset_name,
        columns=columns,
        row_count=len(body),
        title=options.title,
        description=options.description,
    )


def _read_source(source, options: IngestOptions) -> tuple[str, str]:
    if isinstance(source, str) and not source.strip():
        raise EmptyInput("source is empty")
    if isinstance(source, (str, Path)) and "\n" not in str(source):
        path = Path(source)
        text = path.read_text(encoding="utf-8-sig")
        return path.stem, text
    if isinstance(source, bytes):
        return "dataset", source.decode("utf-8-sig")
    if isinstance(source, str):
        return "dataset", source
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8-sig")
    return getattr(source, "name", "dataset"), data


def dataset_from_columns(name: str, columns: Iterable[Column], *,
                         title: Optional[str] = None,
                         description: Optional[str] = None) -> Dataset:
    columns = tuple(columns)
    if not columns:
        raise EmptyInput("no columns")
    row_count = len(columns[0].values)
    for c in columns:
        if len(c.values) != row_count:
            raise RaggedRows(f"column {c.name!r} has {len(c.values)} values, expected {row_count}")
    tmp = Dataset(id="", name=name, columns=columns, row_count=row_count,
                  title=title, description=description)
    return Dataset(id=tmp.content_hash[:12], name=name, columns=columns,
                   row_count=row_count, title=title, description=description)
