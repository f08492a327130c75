/** Session controller: the interaction flows behind the screens.
 *
 * Invariants enforced here:
 *  - every user selection issues exactly one select call; while one is in
 *    flight further selections are ignored (the UI renders them disabled);
 *  - a retried selection reuses its idempotency request id, so the server
 *    never double-counts;
 *  - the view is only ever replaced by a projection of a service response.
 */

import { ApiClient, ServiceError } from "./api.js";
import type { EngineConfig } from "./api.js";
import type { QuestionPayload } from "./types.js";
import {
  applyQuestions,
  applySelect,
  UiSessionView,
  viewFromQuestions,
} from "./state.js";

export const DEFAULT_QUESTION_LIMIT = 500;

interface PendingSelect {
  questionId: string;
  requestId: string;
}

export class SessionController {
  view: UiSessionView | null = null;
  error: string | null = null;
  busy = false;
  snapshot: string | null = null;
  private pendingSelect: PendingSelect | null = null;
  private failedSelect: PendingSelect | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly top = 10,
  ) {}

  get selectionDisabled(): boolean {
    return this.pendingSelect !== null;
  }

  /** Upload a delimited file and start a session with a question limit. */
  async upload(
    content: string | Blob,
    name: string,
    questionLimit: number = DEFAULT_QUESTION_LIMIT,
    config?: EngineConfig,
  ): Promise<UiSessionView | null> {
    this.error = null;
    this.busy = true;
    try {
      const uploaded = await this.api.uploadDataset(content, name);
      return await this.openDataset(uploaded.dataset_id, name, questionLimit, config);
    } catch (err) {
      this.fail(err);
      return null;
    } finally {
      this.busy = false;
    }
  }

  /** Start a session for a dataset already in the catalog. */
  async openDataset(
    datasetId: string,
    name: string,
    questionLimit: number = DEFAULT_QUESTION_LIMIT,
    config?: EngineConfig,
  ): Promise<UiSessionView | null> {
    this.error = null;
    this.busy = true;
    try {
      const created = await this.api.createSession(datasetId, questionLimit, config);
      let status = created.status;
      while (status === "pending") {
        status = (await this.api.sessionStatus(created.session_id)).status;
      }
      const questions = await this.api.questions(created.session_id, this.top);
      this.view = viewFromQuestions(name, questions);
      return this.view;
    } catch (err) {
      this.fail(err);
      return null;
    } finally {
      this.busy = false;
    }
  }

  /** Select a question; the refreshed ranking comes back with the response. */
  async select(questionId: string): Promise<UiSessionView | null> {
    if (!this.view || this.pendingSelect) {
      return null;
    }
    // a retry of the question that just failed reuses its request id
    const requestId =
      this.failedSelect?.questionId === questionId
        ? this.failedSelect.requestId
        : this.api.newRequestId();
    this.pendingSelect = { questionId, requestId };
    this.error = null;
    try {
      const response = await this.api.select(
        this.view.sessionId,
        questionId,
        requestId,
        this.top,
      );
      this.view = applySelect(this.view, questionId, response);
      this.failedSelect = null;
      return this.view;
    } catch (err) {
      this.failedSelect = { questionId, requestId };
      this.fail(err);
      return null;
    } finally {
      this.pendingSelect = null;
    }
  }

  /** Keyword autofill; suggestions are served, never computed locally. */
  async search(query: string, limit = 10): Promise<QuestionPayload[]> {
    if (!this.view) {
      return [];
    }
    const response = await this.api.search(this.view.sessionId, query, limit);
    return response.matches;
  }

  async save(): Promise<string | null> {
    if (!this.view) {
      return null;
    }
    try {
      this.snapshot = await this.api.saveSession(this.view.sessionId);
      return this.snapshot;
    } catch (err) {
      this.fail(err);
      return null;
    }
  }

  async resume(document: string, datasetName = "saved session"):
      Promise<UiSessionView | null> {
    this.error = null;
    this.busy = true;
    try {
      const resumed = await this.api.resumeSession(document);
      const questions = await this.api.questions(resumed.session_id, this.top);
      this.view = viewFromQuestions(datasetName, questions);
      return this.view;
    } catch (err) {
      this.fail(err);
      return null;
    } finally {
      this.busy = false;
    }
  }

  private fail(err: unknown): void {
    if (err instanceof ServiceError) {
      this.error = err.detail ? `${err.errorName}: ${err.detail}` : err.errorName;
    } else {
      this.error = String(err);
    }
  }

  /** Refresh the list without feedback (used after resume navigation). */
  async refresh(): Promise<UiSessionView | null> {
    if (!this.view) {
      return null;
    }
    const response = await this.api.questions(this.view.sessionId, this.top);
    this.view = applyQuestions(this.view, response);
    return this.view;
  }
}
