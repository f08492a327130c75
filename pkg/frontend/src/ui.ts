/** DOM rendering. Screens are re-rendered from the controller's view after
 * every response; no state lives in the DOM. */

import type { CatalogEntry, QuestionPayload } from "./types.js";
import type { UiSessionView } from "./state.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export function renderCatalog(
  container: HTMLElement,
  entries: CatalogEntry[],
  onOpen: (entry: CatalogEntry) => void,
): void {
  container.replaceChildren();
  if (entries.length === 0) {
    container.append(el("p", "empty-state", "No datasets in the catalog yet — upload one to begin."));
    return;
  }
  const list = el("ul", "catalog-list");
  for (const entry of entries) {
    const item = el("li", "catalog-entry");
    if (entry.warning) {
      item.classList.add("catalog-warning");
      item.append(el("span", "name", entry.name), el("span", "warning", entry.warning));
    } else {
      const button = el("button", "catalog-open", entry.name);
      button.addEventListener("click", () => onOpen(entry));
      item.append(button, el("span", "rows", `${entry.row_count ?? "?"} rows`));
    }
    list.append(item);
  }
  container.append(list);
}

export function renderQuestions(
  container: HTMLElement,
  view: UiSessionView,
  disabled: boolean,
  onSelect: (questionId: string) => void,
): void {
  container.replaceChildren();
  if (view.questions.length === 0) {
    container.append(el("p", "empty-state", "No questions were generated for this dataset."));
    return;
  }
  const list = el("ol", "question-list");
  for (const question of view.questions) {
    const item = el("li", "question");
    const button = el("button", "question-text", question.text);
    button.disabled = disabled;
    if (view.history.includes(question.id)) {
      item.classList.add("question-selected");
    }
    button.addEventListener("click", () => onSelect(question.id));
    item.append(button, el("span", "score", question.score.toFixed(3)));
    list.append(item);
  }
  container.append(list);
}

export function renderProbabilities(container: HTMLElement, view: UiSessionView): void {
  container.replaceChildren();
  for (const bar of view.probabilities) {
    const row = el("div", "prob-row");
    const fill = el("div", "prob-fill");
    fill.style.width = `${Math.round(bar.p * 100)}%`;
    row.append(el("span", "prob-label", `${bar.column} ${(bar.p * 100).toFixed(0)}%`), fill);
    container.append(row);
  }
}

export function renderSuggestions(
  container: HTMLElement,
  matches: QuestionPayload[],
  onSelect: (questionId: string) => void,
): void {
  container.replaceChildren();
  for (const match of matches) {
    const button = el("button", "suggestion", match.text);
    button.addEventListener("click", () => onSelect(match.id));
    container.append(button);
  }
}

export function renderStatus(
  container: HTMLElement,
  view: UiSessionView | null,
  busy: boolean,
  error: string | null,
): void {
  container.replaceChildren();
  if (error) {
    container.append(el("div", "error-banner", error));
  }
  if (busy) {
    container.append(el("div", "spinner", "Wait while questions are being generated…"));
  }
  if (view) {
    container.append(
      el("div", "session-meta",
         `${view.datasetName} — iteration ${view.iteration} — ${view.questionCount} questions`),
    );
  }
}

export function downloadText(filename: string, text: string): void {
  const blob = new Blob([text], { type: "application/json" });
  const url = URL.createObjectURL(blob);
  const anchor = el("a");
  anchor.href = url;
  anchor.download = filename;
  anchor.click();
  URL.revokeObjectURL(url);
}
