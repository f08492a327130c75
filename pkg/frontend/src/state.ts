/** UiSessionView: a pure projection of the last service response.
 *
 * Nothing here sorts, scores or re-ranks; question order and probabilities
 * are copied verbatim from the server payloads. */

import type { QuestionPayload, QuestionsResponse, SelectResponse } from "./types.js";

export interface QuestionRow {
  rank: number;
  id: string;
  text: string;
  score: number;
  weight?: number;
}

export interface ProbabilityBar {
  column: string;
  p: number;
}

export interface UiSessionView {
  sessionId: string;
  datasetName: string;
  iteration: number;
  questionCount: number;
  questions: QuestionRow[];
  probabilities: ProbabilityBar[];
  history: string[];
}

function rows(questions: QuestionPayload[]): QuestionRow[] {
  return questions.map((q) => ({
    rank: q.rank,
    id: q.id,
    text: q.text,
    score: q.score,
    ...(q.weight !== undefined ? { weight: q.weight } : {}),
  }));
}

export function viewFromQuestions(
  datasetName: string,
  response: QuestionsResponse,
): UiSessionView {
  return {
    sessionId: response.session_id,
    datasetName,
    iteration: response.iteration,
    questionCount: response.question_count,
    questions: rows(response.questions),
    probabilities: [],
    history: [],
  };
}

export function applyQuestions(
  view: UiSessionView,
  response: QuestionsResponse,
): UiSessionView {
  return {
    ...view,
    iteration: response.iteration,
    questionCount: response.question_count,
    questions: rows(response.questions),
  };
}

export function applySelect(
  view: UiSessionView,
  questionId: string,
  response: SelectResponse,
): UiSessionView {
  return {
    ...view,
    iteration: response.iteration,
    questions: rows(response.questions),
    probabilities: Object.entries(response.probabilities).map(([column, p]) => ({
      column,
      p,
    })),
    history: [...view.history, questionId],
  };
}
