/** Bootstrap: wires the controller to the page. */

import { ApiClient } from "./api.js";
import { DEFAULT_QUESTION_LIMIT, SessionController } from "./controller.js";
import { debounce } from "./debounce.js";
import {
  downloadText,
  renderCatalog,
  renderProbabilities,
  renderQuestions,
  renderStatus,
  renderSuggestions,
} from "./ui.js";

declare global {
  interface Window {
    QGEN_SERVICE_URL?: string;
  }
}

const baseUrl = window.QGEN_SERVICE_URL ?? "http://127.0.0.1:8080";
const api = new ApiClient(baseUrl);
const controller = new SessionController(api);

const nodes = {
  catalog: document.getElementById("catalog")!,
  status: document.getElementById("status")!,
  questions: document.getElementById("questions")!,
  probabilities: document.getElementById("probabilities")!,
  suggestions: document.getElementById("suggestions")!,
  uploadInput: document.getElementById("upload-input") as HTMLInputElement,
  limitInput: document.getElementById("limit-input") as HTMLInputElement,
  uploadButton: document.getElementById("upload-button") as HTMLButtonElement,
  searchInput: document.getElementById("search-input") as HTMLInputElement,
  saveButton: document.getElementById("save-button") as HTMLButtonElement,
  resumeInput: document.getElementById("resume-input") as HTMLInputElement,
};

nodes.limitInput.value = String(DEFAULT_QUESTION_LIMIT);

function redraw(): void {
  renderStatus(nodes.status, controller.view, controller.busy, controller.error);
  if (controller.view) {
    renderQuestions(nodes.questions, controller.view, controller.selectionDisabled, select);
    renderProbabilities(nodes.probabilities, controller.view);
  }
}

async function select(questionId: string): Promise<void> {
  redraw();
  await controller.select(questionId);
  nodes.suggestions.replaceChildren();
  redraw();
}

async function refreshCatalog(): Promise<void> {
  const body = await api.catalog();
  renderCatalog(nodes.catalog, body.datasets, (entry) => {
    if (entry.dataset_id) {
      nodes.limitInput.value = String(DEFAULT_QUESTION_LIMIT);
      void controller
        .openDataset(entry.dataset_id, entry.name, questionLimit())
        .then(redraw);
    }
  });
}

function questionLimit(): number {
  const parsed = Number.parseInt(nodes.limitInput.value, 10);
  return Number.isFinite(parsed) && parsed > 0 ? parsed : DEFAULT_QUESTION_LIMIT;
}

nodes.uploadButton.addEventListener("click", async () => {
  const file = nodes.uploadInput.files?.[0];
  if (!file) {
    return;
  }
  redraw();
  await controller.upload(file, file.name.replace(/\.[^.]*$/, ""), questionLimit());
  redraw();
  await refreshCatalog();
});

nodes.searchInput.addEventListener(
  "input",
  debounce(() => {
    const query = nodes.searchInput.value;
    if (!query.trim()) {
      nodes.suggestions.replaceChildren();
      return;
    }
    void controller.search(query).then((matches) => {
      renderSuggestions(nodes.suggestions, matches, select);
    });
  }, 250),
);

nodes.saveButton.addEventListener("click", async () => {
  const snapshot = await controller.save();
  if (snapshot && controller.view) {
    downloadText(`${controller.view.datasetName}.qsession`, snapshot);
  }
  redraw();
});

nodes.resumeInput.addEventListener("change", async () => {
  const file = nodes.resumeInput.files?.[0];
  if (!file) {
    return;
  }
  const document_ = await file.text();
  await controller.resume(document_, file.name.replace(/\.qsession$/, ""));
  redraw();
});

void refreshCatalog();
redraw();
