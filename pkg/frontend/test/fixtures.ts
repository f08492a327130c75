/** Fixture-backed fetch: serves recorded service responses in order. */

import { readFileSync } from "node:fs";
import type { FetchLike } from "../src/api.js";

export interface FixtureStep {
  step: string;
  method: string;
  path: string;
  status: number;
  request_body: unknown;
  body: unknown;
}

export interface FlowFixture {
  employees_csv: string;
  steps: FixtureStep[];
}

export function loadFlow(): FlowFixture {
  const url = new URL("../fixtures/flow.json", import.meta.url);
  return JSON.parse(readFileSync(url, "utf-8")) as FlowFixture;
}

export function step(flow: FlowFixture, name: string): FixtureStep {
  const found = flow.steps.find((s) => s.step === name);
  if (!found) {
    throw new Error(`fixture step not recorded: ${name}`);
  }
  return found;
}

export interface RecordedCall {
  method: string;
  pathname: string;
  headers: Record<string, string>;
  body: string | null;
}

export class FixtureServer {
  readonly calls: RecordedCall[] = [];
  private remaining: FixtureStep[];

  constructor(steps: FixtureStep[]) {
    this.remaining = [...steps];
  }

  get fetch(): FetchLike {
    return async (input, init = {}) => {
      const url = new URL(input, "http://fixture");
      const method = (init.method ?? "GET").toUpperCase();
      const headers: Record<string, string> = {};
      for (const [key, value] of Object.entries(init.headers ?? {})) {
        headers[key.toLowerCase()] = String(value);
      }
      this.calls.push({
        method,
        pathname: url.pathname,
        headers,
        body: typeof init.body === "string" ? init.body : null,
      });
      const index = this.remaining.findIndex((s) => {
        const stepPath = new URL(s.path, "http://fixture").pathname;
        return s.method === method && stepPath === url.pathname;
      });
      if (index < 0) {
        throw new Error(`no fixture for ${method} ${url.pathname}`);
      }
      const [served] = this.remaining.splice(index, 1);
      const body =
        typeof served!.body === "string"
          ? served!.body
          : JSON.stringify(served!.body);
      return new Response(body, {
        status: served!.status,
        headers: { "content-type": "application/json" },
      });
    };
  }

  callsTo(method: string, pathnameSuffix: string): RecordedCall[] {
    return this.calls.filter(
      (c) => c.method === method && c.pathname.endsWith(pathnameSuffix),
    );
  }
}

let requestCounter = 0;

export function sequentialRequestIds(): () => string {
  return () => `test-request-${++requestCounter}`;
}
