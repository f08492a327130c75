import { describe, expect, it } from "vitest";

import { ApiClient, ServiceError } from "../src/api.js";
import { FixtureServer, loadFlow, step } from "./fixtures.js";

const flow = loadFlow();

function clientFor(server: FixtureServer): ApiClient {
  return new ApiClient("http://fixture", server.fetch, () => "req-1");
}

describe("ApiClient", () => {
  it("uploads the raw file body with the dataset name", async () => {
    const server = new FixtureServer([step(flow, "upload")]);
    const body = await clientFor(server).uploadDataset(flow.employees_csv, "employees");
    expect(body.dataset_id).toBeTruthy();
    const call = server.calls[0]!;
    expect(call.method).toBe("POST");
    expect(call.body).toBe(flow.employees_csv);
  });

  it("sends the question limit when creating a session", async () => {
    const upload = step(flow, "upload").body as { dataset_id: string };
    const server = new FixtureServer([step(flow, "create_session")]);
    await clientFor(server).createSession(upload.dataset_id, 500, {
      alpha: 1.0,
      entity: "employees",
    });
    const sent = JSON.parse(server.calls[0]!.body!);
    expect(sent.question_limit).toBe(500);
    expect(sent.config.alpha).toBe(1.0);
  });

  it("passes the idempotency request id on select", async () => {
    const server = new FixtureServer([step(flow, "select")]);
    const created = step(flow, "create_session").body as { session_id: string };
    const selectStep = step(flow, "select");
    const questionId = (selectStep.request_body as { question_id: string }).question_id;
    await clientFor(server).select(created.session_id, questionId, "req-42");
    expect(server.calls[0]!.headers["x-request-id"]).toBe("req-42");
  });

  it("surfaces service errors with their error names", async () => {
    const server = new FixtureServer([step(flow, "upload_error")]);
    await expect(
      clientFor(server).uploadDataset("a,b\n1\n", "bad"),
    ).rejects.toMatchObject({ status: 400, errorName: "RaggedRows" });
  });

  it("returns the snapshot document as text", async () => {
    const server = new FixtureServer([step(flow, "save")]);
    const created = step(flow, "create_session").body as { session_id: string };
    const snapshot = await clientFor(server).saveSession(created.session_id);
    expect(snapshot.startsWith("{\n  \"format_version\": 1")).toBe(true);
  });

  it("throws ServiceError for non-JSON failures", async () => {
    const failing = async () => new Response("boom", { status: 502 });
    const client = new ApiClient("http://fixture", failing, () => "x");
    await expect(client.catalog()).rejects.toBeInstanceOf(ServiceError);
  });
});
