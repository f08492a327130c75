"""Operator catalog: aggregate measures and filter predicates.

The catalog ships as a plain-text table (``operators.tsv``) so wording can be
edited without code changes; a custom catalog path may be supplied anywhere a
catalog is accepted.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

MEASURE = "measure"
FILTER = "filter"

INTERROGATIVES = {
    "what_is": "What is",
    "what_fraction": "What fraction of",
    "which": "Which",
    "how_many": "How many",
}

BLANK = "____"


@dataclass(frozen=True)
class OperatorSpec:
    name: str
    role: str  # measure | filter
    kinds: frozenset[str]
    arity: int
    interrogative: Optional[str]  # measure role only
    fragment: str

    def applies_to(self, kind: str) -> bool:
        return kind in self.kinds


class OperatorCatalog:
    def __init__(self, specs: list[OperatorSpec]):
        self.specs = tuple(specs)
        self.by_name = {s.name: s for s in self.specs}
        if len(self.by_name) != len(self.specs):
            raise ValueError("duplicate operator names in catalog")
        self._index = {s.name: i for i, s in enumerate(self.specs)}

    def get(self, name: str) -> OperatorSpec:
        return self.by_name[name]

    def __contains__(self, name: str) -> bool:
        return name in self.by_name

    def index(self, name: str) -> int:
        return self._index[name]

    def measures_for(self, kind: str) -> list[OperatorSpec]:
        return [s for s in self.specs if s.role == MEASURE and s.applies_to(kind)]

    def filters_for(self, kind: str) -> list[OperatorSpec]:
        return [s for s in self.specs if s.role == FILTER and s.applies_to(kind)]

    def restricted(self, names) -> "OperatorCatalog":
        wanted = set(names)
        return OperatorCatalog([s for s in self.specs if s.name in wanted])


def parse_catalog(text: str) -> OperatorCatalog:
    specs: list[OperatorSpec] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 6:
            raise ValueError(f"catalog line {lineno}: expected 6 tab-separated fields")
        name, role, kinds, arity, interrogative, fragment = parts
        if role not in (MEASURE, FILTER):
            raise ValueError(f"catalog line {lineno}: bad role {role!r}")
        if role == MEASURE and interrogative not in INTERROGATIVES:
            raise ValueError(f"catalog line {lineno}: bad interrogative {interrogative!r}")
        specs.append(OperatorSpec(
            name=name.strip(),
            role=role,
            kinds=frozenset(k.strip() for k in kinds.split(",")),
            arity=int(arity),
            interrogative=interrogative if role == MEASURE else None,
            fragment=fragment,
        ))
    return OperatorCatalog(specs)


def load_catalog(path) -> OperatorCatalog:
    return parse_catalog(Path(path).read_text(encoding="utf-8"))


_default: Optional[OperatorCatalog] = None


def default_catalog() -> OperatorCatalog:
    global _default
    if _default is None:
        text = resources.files(__package__).joinpath("operators.tsv").read_text(encoding="utf-8")
        _default = parse_catalog(text)
    return _default
