"""Question ranking: interestingness order first, then feedback-driven
re-ranking from per-column selection counters.

Each selected column keeps a counter T, initialized at 1; choosing a question
bumps T for every distinct column it uses.  Column probabilities are
p = T / sum(T) and a question's weight is the product of its columns'
probabilities; from iteration 1 on, questions rank by weight, then score,
then id.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import UnknownQuestion
from .questions import QuestionCandidate


@dataclass
class SessionState:
    session_id: str
    dataset_id: str
    dataset_hash: str
    dataset_name: str
    selected_columns: list[str]
    questions: list[QuestionCandidate]
    config: dict = field(default_factory=dict)
    counters: dict[str, int] = field(init=False)
    history: list[str] = field(default_factory=list)
    pinned_columns: list[str] = field(default_factory=list)
    iteration: int = 0

    def __post_init__(self):
        self.counters = {c: 1 for c in self.selected_columns}
        self._by_id = {q.id: q for q in self.questions}

    def question(self, question_id: str) -> QuestionCandidate:
        try:
            return self._by_id[question_id]
        except KeyError:
            raise UnknownQuestion(f"unknown question id {question_id!r}") from None

    def probabilities(self) -> dict[str, float]:
        total = sum(self.counters.values())
        return {c: t / total for c, t in self.counters.items()}

    def current_ranking(self) -> list[QuestionCandidate]:
        if self.iteration == 0:
            return rank_initial(self.questions)
        return rank_feedback(self)


def rank_initial(questions: list[QuestionCandidate]) -> list[QuestionCandidate]:
    """Descending interestingness score; ties by ascending question id."""
    return sorted(questions, key=lambda q: (-q.score, q.id))


def record_selection(state: SessionState, question_id: str) -> SessionState:
    """Bump the counter of every distinct column in the chosen question."""
    question = state.question(question_id)
    for column in dict.fromkeys(question.columns):
        if column in state.counters:
            state.counters[column] += 1
    state.history.append(question_id)
    state.iteration += 1
    return state


def record_column_interest(state: SessionState, column: str) -> SessionState:
    """Apply the selection-counter rule to a directly provided column header."""
    if column not in state.counters:
        raise UnknownQuestion(f"column {column!r} is not a selected column")
    state.counters[column] += 1
    state.pinned_columns.append(column)
    state.iteration += 1
    return state


def question_weight(state: SessionState, question: QuestionCandidate) -> float:
    probs = state.probabilities()
    weight = 1.0
    for column in dict.fromkeys(question.columns):
        weight *= probs.get(column, 1.0)
    return weight


def rank_feedback(state: SessionState) -> list[QuestionCandidate]:
    """Descending column-probability product, then score, then id.  Does not
    mutate the state."""
    probs = state.probabilities()

    def weight(question: QuestionCandidate) -> float:
        w = 1.0
        for column in dict.fromkeys(question.columns):
            w *= probs.get(column, 1.0)
        return w

    return sorted(state.questions, key=lambda q: (-weight(q), -q.score, q.id))


def search_questions(state: SessionState, query: str, limit: int | None = None
                     ) -> list[QuestionCandidate]:
    """Keyword autofill: every whitespace-separated token must occur
    (case-insensitively) in the surface text; matches keep the current
    ranking order."""
    tokens = [t.lower() for t in query.split()]
    ranked = state.current_ranking()
    matches = [
        q for q in ranked
        if all(t in q.surface_text.lower() for t in tokens)
    ]
    if limit is not None:
        matches = matches[:limit]
    return matches
