/**
 * Single-page reader: a story list, then per story a Q&A view (carousel of
 * representative answers per question) and a grid view (questions by
 * sources). Hash routes #/story/{id}/qa and #/story/{id}/grid deep-link
 * both views; switching views reuses the cached analysis.
 */

import { ApiClient, ApiError } from "./api";
import type { StorySummary } from "./types";
import { buildGridModel, buildQaModel } from "./viewmodels";

function apiBase(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  if (fromQuery) {
    return fromQuery.replace(/\/$/, "");
  }
  const injected = (globalThis as { NEWSDISCORD_API?: string }).NEWSDISCORD_API;
  return injected ?? "http://127.0.0.1:8050";
}

const api = new ApiClient(apiBase());
const root = document.getElementById("app") as HTMLElement;

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

function sourceAnchor(name: string, url: string | null): HTMLElement {
  if (url === null) {
    return el("span", "source-link", name);
  }
  const anchor = el("a", "source-link", name);
  anchor.setAttribute("href", url);
  anchor.setAttribute("target", "_blank");
  anchor.setAttribute("rel", "noopener");
  return anchor;
}

async function renderStoryList(): Promise<void> {
  root.replaceChildren(el("p", "status", "Loading stories…"));
  let stories: StorySummary[];
  try {
    stories = await api.listStories();
  } catch (error) {
    renderError(error);
    return;
  }
  const container = el("div", "story-list");
  container.appendChild(el("h1", "page-title", "Stories"));
  const list = el("ul", "stories");
  for (const story of stories) {
    const item = el("li", "story-item");
    const link = el("a", "story-title", story.title);
    link.setAttribute("href", `#/story/${encodeURIComponent(story.id)}/qa`);
    item.appendChild(link);
    item.appendChild(
      el("span", "story-meta", `${story.n_sources} sources${story.analyzed ? "" : " (not analyzed yet)"}`),
    );
    list.appendChild(item);
  }
  container.appendChild(list);
  root.replaceChildren(container);
}

function viewTabs(storyId: string, active: "qa" | "grid"): HTMLElement {
  const tabs = el("nav", "tabs");
  for (const view of ["qa", "grid"] as const) {
    const tab = el("a", view === active ? "tab active" : "tab", view === "qa" ? "Q&A" : "Grid");
    tab.setAttribute("href", `#/story/${encodeURIComponent(storyId)}/${view}`);
    tabs.appendChild(tab);
  }
  return tabs;
}

async function renderStory(storyId: string, view: "qa" | "grid"): Promise<void> {
  root.replaceChildren(el("p", "status", "Loading analysis…"));
  try {
    const analysis = await api.analysis(storyId);
    const page = el("div", "story-page");
    const back = el("a", "back-link", "← all stories");
    back.setAttribute("href", "#/");
    page.appendChild(back);
    page.appendChild(el("h1", "page-title", analysis.title));
    page.appendChild(viewTabs(storyId, view));
    page.appendChild(view === "qa" ? qaView(analysis) : gridView(analysis));
    root.replaceChildren(page);
  } catch (error) {
    if (error instanceof ApiError && error.status === 404) {
      renderNotAnalyzed(storyId);
      return;
    }
    renderError(error);
  }
}

function qaView(analysis: Parameters<typeof buildQaModel>[0]): HTMLElement {
  const model = buildQaModel(analysis);
  const container = el("div", "qa-view");
  if (model.questions.length === 0) {
    container.appendChild(el("p", "status", "No discord questions for this story."));
    return container;
  }
  for (const question of model.questions) {
    const section = el("section", "question");
    section.appendChild(el("h2", "question-text", question.text));
    section.appendChild(
      el(
        "p",
        "question-meta",
        `answered by ${question.answeringSources} of ${question.totalSources} sources`,
      ),
    );
    const carousel = el("div", "carousel");
    for (const group of question.groups) {
      const card = el("article", "answer-card");
      card.style.borderTopColor = group.color;
      const quote = el("blockquote", "answer-text", group.representativeExcerpt);
      quote.setAttribute("title", group.representativeText);
      card.appendChild(quote);
      const attribution = el("footer", "answer-sources");
      attribution.appendChild(
        sourceAnchor(group.representativeSource.sourceName, group.representativeSource.url),
      );
      if (group.memberCount > 1) {
        const others = el("details", "other-sources");
        others.appendChild(el("summary", "", `${group.memberCount} sources in this group`));
        for (const member of group.members) {
          const line = el("div", "member-source");
          line.appendChild(sourceAnchor(member.sourceName, member.url));
          others.appendChild(line);
        }
        attribution.appendChild(others);
      }
      card.appendChild(attribution);
      carousel.appendChild(card);
    }
    section.appendChild(carousel);
    container.appendChild(section);
  }
  return container;
}

function gridView(analysis: Parameters<typeof buildGridModel>[0]): HTMLElement {
  const model = buildGridModel(analysis);
  const container = el("div", "grid-view");
  if (model.rows.length === 0) {
    container.appendChild(el("p", "status", "No discord questions for this story."));
    return container;
  }
  const table = el("table", "grid");
  const head = el("tr");
  head.appendChild(el("th", "corner"));
  for (const col of model.cols) {
    head.appendChild(el("th", "source-col", col.displayName));
  }
  table.appendChild(head);
  model.rows.forEach((row, rowIndex) => {
    const tableRow = el("tr");
    tableRow.appendChild(el("th", "question-row", row.text));
    const rowCells = model.cells[rowIndex] ?? [];
    for (const cell of rowCells) {
      const td = el("td", "cell");
      if (cell.answered) {
        const dot = el("span", "dot");
        dot.style.backgroundColor = cell.color;
        dot.setAttribute("title", cell.answerExcerpt);
        if (cell.url !== null) {
          const wrap = el("a");
          wrap.setAttribute("href", cell.url);
          wrap.setAttribute("target", "_blank");
          wrap.setAttribute("rel", "noopener");
          wrap.appendChild(dot);
          td.appendChild(wrap);
        } else {
          td.appendChild(dot);
        }
      }
      tableRow.appendChild(td);
    }
    table.appendChild(tableRow);
  });
  container.appendChild(table);
  return container;
}

function renderNotAnalyzed(storyId: string): void {
  const page = el("div", "story-page");
  page.appendChild(el("p", "status", "This story has not been analyzed yet."));
  const button = el("button", "analyze-button", "Analyze now");
  button.addEventListener("click", () => {
    void api.requestAnalysis(storyId).then(() => route());
  });
  page.appendChild(button);
  root.replaceChildren(page);
}

function renderError(error: unknown): void {
  const message = error instanceof Error ? error.message : String(error);
  root.replaceChildren(el("p", "status error", `Something went wrong: ${message}`));
}

function route(): void {
  const match = /^#\/story\/([^/]+)\/(qa|grid)$/.exec(window.location.hash);
  if (match && match[1] && match[2]) {
    void renderStory(decodeURIComponent(match[1]), match[2] as "qa" | "grid");
    return;
  }
  void renderStoryList();
}

window.addEventListener("hashchange", route);
route();
