/** The recorded UI flow: upload with a 500-question limit, read the list,
 * select, observe the served reorder, search, save and resume. Every
 * assertion compares the view against the recorded service responses. */

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { SessionController } from "../src/controller.js";
import {
  FixtureServer,
  loadFlow,
  sequentialRequestIds,
  step,
} from "./fixtures.js";
import type { QuestionsResponse, SearchResponse, SelectResponse } from "../src/types.js";

const flow = loadFlow();

function questionIds(body: unknown): string[] {
  return (body as QuestionsResponse).questions.map((q) => q.id);
}

function controllerFor(stepNames: string[]): {
  controller: SessionController;
  server: FixtureServer;
} {
  const server = new FixtureServer(stepNames.map((name) => step(flow, name)));
  const api = new ApiClient("http://fixture", server.fetch, sequentialRequestIds());
  return { controller: new SessionController(api), server };
}

const UPLOAD_STEPS = ["upload", "create_session", "questions_initial"];
const SELECTED_ID = (step(flow, "select").request_body as { question_id: string })
  .question_id;

describe("recorded exploration flow", () => {
  it("upload with limit 500 renders the served initial ranking", async () => {
    const { controller, server } = controllerFor(UPLOAD_STEPS);
    const view = await controller.upload(flow.employees_csv, "employees", 500, {
      alpha: 1.0,
      entity: "employees",
    });
    expect(controller.error).toBeNull();
    expect(view).not.toBeNull();
    const created = JSON.parse(server.callsTo("POST", "/sessions")[0]!.body!);
    expect(created.question_limit).toBe(500);
    expect(view!.questions.map((q) => q.id)).toEqual(
      questionIds(step(flow, "questions_initial").body),
    );
    expect(view!.iteration).toBe(0);
  });

  it("selecting a question issues one call and reorders per the response", async () => {
    const { controller, server } = controllerFor([...UPLOAD_STEPS, "select"]);
    await controller.upload(flow.employees_csv, "employees", 500);
    const view = await controller.select(SELECTED_ID);
    expect(view).not.toBeNull();
    const served = step(flow, "select").body as SelectResponse;
    expect(view!.questions.map((q) => q.id)).toEqual(
      served.questions.map((q) => q.id),
    );
    expect(view!.iteration).toBe(1);
    expect(view!.history).toEqual([SELECTED_ID]);
    expect(view!.probabilities.map((b) => b.column)).toEqual(
      Object.keys(served.probabilities),
    );
    expect(server.callsTo("POST", "/select").length).toBe(1);
  });

  it("a double click de-duplicates into a single select call", async () => {
    const { controller, server } = controllerFor([...UPLOAD_STEPS, "select"]);
    await controller.upload(flow.employees_csv, "employees", 500);
    const [first, second] = await Promise.all([
      controller.select(SELECTED_ID),
      controller.select(SELECTED_ID),
    ]);
    expect(server.callsTo("POST", "/select").length).toBe(1);
    expect([first, second].filter((v) => v !== null).length).toBe(1);
  });

  it("a retried selection reuses the idempotency request id", async () => {
    const failing = new FixtureServer([
      ...UPLOAD_STEPS.map((name) => step(flow, name)),
      { ...step(flow, "select"), status: 503, body: { error: "Unavailable" } },
      step(flow, "select"),
    ]);
    const api = new ApiClient("http://fixture", failing.fetch, sequentialRequestIds());
    const controller = new SessionController(api);
    await controller.upload(flow.employees_csv, "employees", 500);
    expect(await controller.select(SELECTED_ID)).toBeNull();
    expect(controller.error).toContain("Unavailable");
    expect(await controller.select(SELECTED_ID)).not.toBeNull();
    const selects = failing.callsTo("POST", "/select");
    expect(selects.length).toBe(2);
    expect(selects[0]!.headers["x-request-id"]).toBe(
      selects[1]!.headers["x-request-id"],
    );
  });

  it("search suggestions equal the served search results", async () => {
    const { controller } = controllerFor([...UPLOAD_STEPS, "search"]);
    await controller.upload(flow.employees_csv, "employees", 500);
    const matches = await controller.search("average salary", 10);
    expect(matches).toEqual((step(flow, "search").body as SearchResponse).matches);
  });

  it("save then resume restores the identical list order", async () => {
    const { controller } = controllerFor([
      ...UPLOAD_STEPS,
      "select",
      "save",
      "resume",
      "questions_after_resume",
    ]);
    await controller.upload(flow.employees_csv, "employees", 500);
    await controller.select(SELECTED_ID);
    const beforeResume = controller.view!.questions.map((q) => q.id);

    const snapshot = await controller.save();
    expect(snapshot).toBe(step(flow, "save").body);

    const view = await controller.resume(snapshot!, "employees");
    expect(view).not.toBeNull();
    expect(view!.iteration).toBe(1);
    expect(view!.questions.map((q) => q.id)).toEqual(
      questionIds(step(flow, "questions_after_resume").body),
    );
    expect(view!.questions.map((q) => q.id)).toEqual(beforeResume);
  });

  it("an ingest failure surfaces the service error inline", async () => {
    const { controller } = controllerFor(["upload_error"]);
    const view = await controller.upload("a,b\n1\n", "bad", 500);
    expect(view).toBeNull();
    expect(controller.error).toContain("RaggedRows");
    expect(controller.view).toBeNull();
  });

  it("the select-then-refresh list matches the recorded follow-up read", async () => {
    const { controller } = controllerFor([
      ...UPLOAD_STEPS,
      "select",
      "questions_after_select",
    ]);
    await controller.upload(flow.employees_csv, "employees", 500);
    await controller.select(SELECTED_ID);
    const refreshed = await controller.refresh();
    expect(refreshed!.questions.map((q) => q.id)).toEqual(
      questionIds(step(flow, "questions_after_select").body),
    );
  });
});
