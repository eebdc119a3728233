/** DOM wiring. Everything testable lives in the sibling modules; this
 * file only moves data between them and the page. */

import { ApiClient } from "./api.js";
import { renderAnnotatedHtml, SpanMismatchError } from "./annotate.js";
import { cardHtml } from "./cards.js";
import { JobPoller } from "./poll.js";
import { rowsFor, overallProgress } from "./scores.js";
import { applyJobUpdate, Store } from "./state.js";
import type { EntityType, Job } from "./types.js";

const api = new ApiClient("");
const store = new Store();
const poller = new JobPoller((jobId) => api.job(jobId));

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) {
    throw new Error(`missing element #${id}`);
  }
  return found as T;
}

const linkInput = element<HTMLInputElement>("link-input");
const parseButton = element<HTMLButtonElement>("parse-button");
const textArea = element<HTMLTextAreaElement>("text-input");
const imageInput = element<HTMLInputElement>("image-url-input");
const articleView = element<HTMLDivElement>("article-view");
const articleImage = element<HTMLImageElement>("article-image");
const cardView = element<HTMLDivElement>("card-view");
const scoresView = element<HTMLDivElement>("scores-view");
const statusView = element<HTMLDivElement>("status-view");
const errorView = element<HTMLDivElement>("error-view");

parseButton.addEventListener("click", async () => {
  errorView.textContent = "";
  try {
    const article = await api.parse(linkInput.value.trim());
    // extracted article is editable before any analysis is triggered
    textArea.value = article.text;
    imageInput.value = article.main_image_url ?? "";
    store.update((state) => ({
      ...state,
      articleText: article.text,
      articleImageUrl: article.main_image_url,
      language: article.language,
      entities: [],
      scores: {},
    }));
  } catch (error) {
    errorView.textContent = String(error);
  }
});

// edits invalidate previous entity offsets; re-linking happens on the
// next compute click
textArea.addEventListener("input", () => {
  store.update((state) => ({ ...state, articleText: textArea.value, entities: [], scores: {} }));
});
imageInput.addEventListener("input", () => {
  store.update((state) => ({ ...state, articleImageUrl: imageInput.value || null }));
});

for (const type of ["person", "location", "event"] as EntityType[]) {
  element<HTMLButtonElement>(`compute-${type}`).addEventListener("click", () => {
    void compute(type);
  });
}

async function compute(type: EntityType): Promise<void> {
  errorView.textContent = "";
  const state = store.state;
  try {
    const accepted = await api.analyze({
      text: state.articleText,
      image_url: state.articleImageUrl ?? undefined,
      types: [type],
      language: state.language,
    });
    store.update((s) => ({
      ...s,
      compute: { ...s.compute, [type]: { status: "running", jobId: accepted.job_id } },
    }));
    poller.watch(accepted.job_id, (job: Job) => {
      store.update((s) => applyJobUpdate(s, type, job));
      statusView.textContent =
        job.state === "done"
          ? ""
          : `${type}: ${job.state} (${Math.round(overallProgress(job) * 100)}%)`;
    });
  } catch (error) {
    errorView.textContent = String(error);
  }
}

async function showCard(kbId: string): Promise<void> {
  store.update((s) => ({ ...s, hoverKbId: kbId }));
  try {
    const [card, references] = await Promise.all([api.card(kbId), api.references(kbId)]);
    if (store.state.hoverKbId === kbId) {
      cardView.innerHTML = cardHtml(card, references);
      cardView.classList.add("visible");
    }
  } catch (error) {
    cardView.textContent = String(error);
  }
}

articleView.addEventListener("mouseover", (event) => {
  const target = (event.target as HTMLElement).closest<HTMLElement>(".entity");
  if (target?.dataset.kbId) {
    void showCard(target.dataset.kbId);
  }
});
articleView.addEventListener("mouseout", () => {
  store.update((s) => ({ ...s, hoverKbId: null }));
  cardView.classList.remove("visible");
});

store.subscribe((state) => {
  try {
    articleView.innerHTML = renderAnnotatedHtml(state.articleText, state.entities);
  } catch (error) {
    if (error instanceof SpanMismatchError) {
      // stale offsets after an edit: render plain text until re-linked
      articleView.textContent = state.articleText;
    } else {
      throw error;
    }
  }
  articleImage.src = state.articleImageUrl ?? "";
  articleImage.style.display = state.articleImageUrl ? "block" : "none";

  const enabled = (Object.keys(state.compute) as EntityType[]).filter(
    (type) => state.compute[type].status === "done",
  );
  const rows = rowsFor(state.entities, state.scores, enabled);
  scoresView.innerHTML = rows
    .map(
      (row) =>
        `<div class="score-row"><span class="score-kind">${row.kind}</span>` +
        `<span class="score-label">${row.label}</span>` +
        `<span class="score-value" style="background:${row.color}" title="evidence: ${row.evidenceCount}">` +
        `${row.display}</span></div>`,
    )
    .join("");

  if (state.error) {
    errorView.textContent = state.error;
  }
});
