"""Scikit-learn style front door for the question mining pipeline.

``QuestionMiner`` follows the estimator conventions (constructor params
stored verbatim, ``get_params``/``set_params``, fitted attributes with a
trailing underscore) so it drops into sklearn tooling; ``fit`` accepts a
pandas DataFrame, a delimited file path, raw CSV text, or an already loaded
:class:`~qgen.dataset.Dataset`.
"""

from __future__ import annotations

import uuid
from pathlib import Path
from typing import Optional

import pandas as pd
from sklearn.base import BaseEstimator

from .dataset import (DATE, IDENTIFIER, NUMERICAL, Column, ColumnStats, Dataset,
                      DateStats, IngestOptions, NumericStats, _name_has_id_token,
                      build_column, dataset_from_columns, load_dataset)
from .engine import EngineConfig, ExplorationSession, run_pipeline
from .measures import selected_column_names
from .questions import QuestionCandidate
from .ranking import SessionState
from . import stats


def as_dataset(X, options: IngestOptions = IngestOptions(), name: str = "dataset") -> Dataset:
    """Coerce estimator input into a Dataset."""
    if isinstance(X, Dataset):
        return X
    if isinstance(X, pd.DataFrame):
        return dataset_from_frame(X, options=options, name=name)
    if isinstance(X, (str, Path, bytes)):
        return load_dataset(X, options)
    if hasattr(X, "read"):
        return load_dataset(X, options)
    raise TypeError(
        "X must be a DataFrame, Dataset, path, CSV text/bytes or stream; "
        f"got {type(X).__name__}")


def dataset_from_frame(frame: pd.DataFrame, *,
                       options: IngestOptions = IngestOptions(),
                       name: str = "dataset") -> Dataset:
    """Build a Dataset from a DataFrame, using dtypes where they are
    unambiguous and falling back to cell-level inference for object columns."""
    if frame.shape[1] == 0:
        raise ValueError("frame has no columns")
    if frame.shape[0] == 0:
        raise ValueError("frame has no rows")
    columns: list[Column] = []
    for raw_name in frame.columns:
        series = frame[raw_name]
        col_name = str(raw_name).strip()
        if pd.api.types.is_numeric_dtype(series) and not pd.api.types.is_bool_dtype(series):
            columns.append(_numeric_column(col_name, series, options))
        elif pd.api.types.is_datetime64_any_dtype(series):
            columns.append(_date_column(col_name, series, options))
        else:
            cells = [None if pd.isna(v) else str(v) for v in series]
            columns.append(build_column(col_name, cells, options))
    return dataset_from_columns(name, columns)


def _numeric_column(name: str, series: pd.Series, options: IngestOptions) -> Column:
    values = tuple(None if pd.isna(v) else float(v) for v in series)
    present = [v for v in values if v is not None]
    numeric = None
    if present:
        q1, q2, q3 = stats.quartiles(present)
        numeric = NumericStats(min(present), max(present), stats.mean(present),
                               stats.stdev(present, ddof=0), q1, q2, q3)
    col_stats = ColumnStats(null_count=len(values) - len(present),
                            distinct_count=len(set(present)), numeric=numeric)
    kind = NUMERICAL
    if present and col_stats.distinct_count / len(present) >= options.id_threshold \
            and _name_has_id_token(name):
        kind = IDENTIFIER
    return Column(name=name, kind=kind, values=values, stats=col_stats)


def _date_column(name: str, series: pd.Series, options: IngestOptions) -> Column:
    values = tuple(None if pd.isna(v) else v.date() for v in series)
    present = sorted(v for v in values if v is not None)
    date_stats = None
    if present:
        date_stats = DateStats(present[0], present[-1], present[(len(present) - 1) // 2])
    col_stats = ColumnStats(null_count=len(values) - len(present),
                            distinct_count=len(set(present)), date=date_stats)
    return Column(name=name, kind=DATE, values=values, stats=col_stats)


class QuestionMiner(BaseEstimator):
    """Mine a tabular dataset for statistically interesting natural-language
    questions.

    Parameters mirror the engine configuration; after ``fit`` the ranked
    questions are available as ``questions_`` and through ``recommend``.

    >>> miner = QuestionMiner(k=5, alpha=0.1).fit("data.csv")   # doctest: +SKIP
    >>> miner.recommend(3)                                      # doctest: +SKIP
    """

    def __init__(self, k: int = 10, max_subset_size: int = 3, alpha: float = 0.05,
                 min_slice_size: int = 2, effect_floor: float = 0.5,
                 entity: str = "records", question_limit: Optional[int] = 500,
                 measures: Optional[tuple[str, ...]] = None,
                 top_k_percent_values: tuple[int, ...] = (5, 10, 25)):
        self.k = k
        self.max_subset_size = max_subset_size
        self.alpha = alpha
        self.min_slice_size = min_slice_size
        self.effect_floor = effect_floor
        self.entity = entity
        self.question_limit = question_limit
        self.measures = measures
        self.top_k_percent_values = top_k_percent_values

    def _config(self) -> EngineConfig:
        return EngineConfig(
            k=self.k,
            r_max=self.max_subset_size,
            alpha=self.alpha,
            min_slice_size=self.min_slice_size,
            effect_floor=self.effect_floor,
            top_k_percent_values=tuple(self.top_k_percent_values),
            entity=self.entity,
            measures=tuple(self.measures) if self.measures else None,
        )

    def fit(self, X, y=None):
        """Run the mining pipeline on a table; y is ignored."""
        dataset = as_dataset(X)
        profiles, questions = run_pipeline(dataset, self._config(),
                                           limit=self.question_limit)
        self.dataset_ = dataset
        self.profiles_ = profiles
        self.questions_ = questions
        self.n_questions_ = len(questions)
        return self

    def _check_fitted(self):
        if not hasattr(self, "questions_"):
            raise RuntimeError("QuestionMiner is not fitted; call fit(X) first")

    def recommend(self, n: int = 10) -> list[QuestionCandidate]:
        self._check_fitted()
        return self.questions_[:n]

    def to_frame(self) -> pd.DataFrame:
        """Ranked questions as a DataFrame (rank, question, score, columns)."""
        self._check_fitted()
        return pd.DataFrame([
            {
                "rank": i + 1,
                "question": q.surface_text,
                "score": q.score,
                "columns": list(q.columns),
                "operators": dict(q.operator_map),
            }
            for i, q in enumerate(self.questions_)
        ])

    def start_session(self, session_id: Optional[str] = None) -> ExplorationSession:
        """Interactive feedback loop over the already mined questions."""
        self._check_fitted()
        config = self._config()
        state = SessionState(
            session_id=session_id or uuid.uuid4().hex,
            dataset_id=self.dataset_.id,
            dataset_hash=self.dataset_.content_hash,
            dataset_name=self.dataset_.name,
            selected_columns=selected_column_names(self.profiles_),
            questions=list(self.questions_),
            config=config.to_dict(),
        )
        return ExplorationSession(self.dataset_, state, config)
