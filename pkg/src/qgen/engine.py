"""Pipeline orchestration: dataset -> column selection -> slices -> questions,
plus the interactive session object the service and CLI build on."""

from __future__ import annotations

import uuid
from dataclasses import dataclass
from typing import Optional

from .dataset import Dataset
from .measures import ColumnProfile, select_top_k_columns, selected_column_names
from .operators import OperatorCatalog, default_catalog
from .questions import QuestionCandidate, candidate_from_slice
from .ranking import (SessionState, rank_initial, record_column_interest,
                      record_selection, search_questions)
from .session import load_session, save_session, snapshot_document
from .slicing import SliceConfig, best_slice_per_subset, enumerate_column_subsets


@dataclass(frozen=True)
class EngineConfig:
    k: int = 10
    r_max: int = 3
    alpha: float = 0.05
    min_slice_size: int = 2
    effect_floor: float = 0.5
    top_k_percent_values: tuple[int, ...] = (5, 10, 25)
    entity: str = "records"
    measures: Optional[tuple[str, ...]] = None  # None enables every measure

    def slice_config(self) -> SliceConfig:
        return SliceConfig(
            alpha=self.alpha,
            min_slice_size=self.min_slice_size,
            r_max=self.r_max,
            effect_floor=self.effect_floor,
            top_k_percent_values=self.top_k_percent_values,
        )

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "r_max": self.r_max,
            "alpha": self.alpha,
            "min_slice_size": self.min_slice_size,
            "effect_floor": self.effect_floor,
            "top_k_percent_values": list(self.top_k_percent_values),
            "entity": self.entity,
            "measures": list(self.measures) if self.measures else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EngineConfig":
        kwargs = {}
        for name in ("k", "r_max", "min_slice_size"):
            if data.get(name) is not None:
                kwargs[name] = int(data[name])
        for name in ("alpha", "effect_floor"):
            if data.get(name) is not None:
                kwargs[name] = float(data[name])
        if data.get("top_k_percent_values") is not None:
            kwargs["top_k_percent_values"] = tuple(int(v) for v in data["top_k_percent_values"])
        if data.get("entity") is not None:
            kwargs["entity"] = str(data["entity"])
        if data.get("measures"):
            kwargs["measures"] = tuple(data["measures"])
        return cls(**kwargs)


def run_pipeline(dataset: Dataset, config: EngineConfig = EngineConfig(),
                 catalog: Optional[OperatorCatalog] = None,
                 limit: Optional[int] = None
                 ) -> tuple[list[ColumnProfile], list[QuestionCandidate]]:
    """Column selection -> subsets -> best slices -> generate -> slot-fill ->
    validate -> rank; returns the column profiles and the ranked questions,
    truncated to ``limit`` when given."""
    catalog = catalog or default_catalog()
    profiles = select_top_k_columns(dataset, config.k, config.measures)
    selected = selected_column_names(profiles)
    slice_config = config.slice_config()
    questions: list[QuestionCandidate] = []
    for subset in enumerate_column_subsets(selected, config.r_max):
        best = best_slice_per_subset(dataset, subset, slice_config, catalog)
        if best is None:
            continue
        candidate = candidate_from_slice(dataset, best, entity=config.entity,
                                         catalog=catalog)
        if candidate.valid:
            questions.append(candidate)
    ranked = rank_initial(questions)
    if limit is not None:
        ranked = ranked[:limit]
    return profiles, ranked


def generate_questions(dataset: Dataset, config: EngineConfig = EngineConfig(),
                       catalog: Optional[OperatorCatalog] = None,
                       limit: Optional[int] = None) -> list[QuestionCandidate]:
    """Run the full pipeline and return validated questions in initial
    ranking order."""
    return run_pipeline(dataset, config, catalog, limit)[1]


class ExplorationSession:
    """One user's interactive exploration of a dataset.

    Wraps the ranking state machine: ``top`` reads the current ranking,
    ``select`` applies feedback, ``search`` autofills from keywords, and
    ``save``/``resume`` round-trip the whole session through a snapshot.
    """

    def __init__(self, dataset: Dataset, state: SessionState,
                 config: EngineConfig = EngineConfig()):
        self.dataset = dataset
        self.state = state
        self.config = config

    @classmethod
    def create(cls, dataset: Dataset, config: EngineConfig = EngineConfig(),
               question_limit: Optional[int] = 500,
               session_id: Optional[str] = None,
               catalog: Optional[OperatorCatalog] = None) -> "ExplorationSession":
        profiles, questions = run_pipeline(dataset, config, catalog, limit=question_limit)
        state = SessionState(
            session_id=session_id or uuid.uuid4().hex,
            dataset_id=dataset.id,
            dataset_hash=dataset.content_hash,
            dataset_name=dataset.name,
            selected_columns=selected_column_names(profiles),
            questions=questions,
            config=config.to_dict(),
        )
        return cls(dataset, state, config)

    @property
    def iteration(self) -> int:
        return self.state.iteration

    @property
    def question_count(self) -> int:
        return len(self.state.questions)

    def top(self, n: Optional[int] = 10) -> list[QuestionCandidate]:
        ranking = self.state.current_ranking()
        return ranking if n is None else ranking[:n]

    def select(self, question_id: str) -> None:
        record_selection(self.state, question_id)

    def pin_column(self, column: str) -> None:
        record_column_interest(self.state, column)

    def search(self, query: str, limit: Optional[int] = None) -> list[QuestionCandidate]:
        return search_questions(self.state, query, limit)

    def probabilities(self) -> dict[str, float]:
        return self.state.probabilities()

    def to_snapshot(self) -> str:
        return snapshot_document(self.state)

    def save(self, path) -> str:
        return save_session(self.state, path)

    @classmethod
    def resume(cls, source, dataset: Dataset) -> "ExplorationSession":
        state = load_session(source, dataset)
        config = EngineConfig.from_dict(state.config) if state.config else EngineConfig()
        return cls(dataset, state, config)
