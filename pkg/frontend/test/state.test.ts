import { describe, expect, it } from "vitest";

import { applyQuestions, applySelect, viewFromQuestions } from "../src/state.js";
import type { QuestionsResponse, SelectResponse } from "../src/types.js";

// deliberately NOT sorted by score: the view must copy service order verbatim
const QUESTIONS: QuestionsResponse = {
  session_id: "s1",
  iteration: 0,
  question_count: 3,
  questions: [
    { rank: 1, id: "a", text: "first?", score: 0.2, columns: ["x"], operators: {}, slot_values: [] },
    { rank: 2, id: "b", text: "second?", score: 0.9, columns: ["y"], operators: {}, slot_values: [] },
    { rank: 3, id: "c", text: "third?", score: 0.5, columns: ["x", "y"], operators: {}, slot_values: [] },
  ],
};

const SELECT: SelectResponse = {
  session_id: "s1",
  iteration: 1,
  probabilities: { x: 0.5, y: 0.25, z: 0.25 },
  questions: [
    { rank: 1, id: "c", text: "third?", score: 0.5, columns: ["x", "y"], operators: {}, slot_values: [], weight: 0.125 },
    { rank: 2, id: "a", text: "first?", score: 0.2, columns: ["x"], operators: {}, slot_values: [], weight: 0.5 },
  ],
};

describe("UiSessionView projection", () => {
  it("copies the service question order without re-sorting", () => {
    const view = viewFromQuestions("employees", QUESTIONS);
    expect(view.questions.map((q) => q.id)).toEqual(["a", "b", "c"]);
    expect(view.iteration).toBe(0);
    expect(view.questionCount).toBe(3);
    expect(view.history).toEqual([]);
  });

  it("applySelect records history, iteration and probabilities verbatim", () => {
    const view = viewFromQuestions("employees", QUESTIONS);
    const after = applySelect(view, "c", SELECT);
    expect(after.iteration).toBe(1);
    expect(after.history).toEqual(["c"]);
    // order and weights exactly as served, even though weights are not sorted
    expect(after.questions.map((q) => q.id)).toEqual(["c", "a"]);
    expect(after.questions.map((q) => q.weight)).toEqual([0.125, 0.5]);
    expect(after.probabilities).toEqual([
      { column: "x", p: 0.5 },
      { column: "y", p: 0.25 },
      { column: "z", p: 0.25 },
    ]);
  });

  it("applyQuestions refreshes the list but keeps history", () => {
    const view = applySelect(viewFromQuestions("employees", QUESTIONS), "c", SELECT);
    const refreshed = applyQuestions(view, QUESTIONS);
    expect(refreshed.history).toEqual(["c"]);
    expect(refreshed.questions.map((q) => q.id)).toEqual(["a", "b", "c"]);
    expect(refreshed.probabilities.length).toBe(3);
  });

  it("does not mutate the previous view", () => {
    const view = viewFromQuestions("employees", QUESTIONS);
    applySelect(view, "c", SELECT);
    expect(view.history).toEqual([]);
    expect(view.iteration).toBe(0);
  });
});
