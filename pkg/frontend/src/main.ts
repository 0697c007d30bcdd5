import { ApiError, ReviewApi } from "./api.js";
import {
  averageText,
  badgeText,
  hasNextPage,
  hasPrevPage,
  latestAssessment,
  nextUnreviewed,
  pageLabel,
  profileRows,
  RATING_NAMES,
  ratingForKey,
  withAssessment,
} from "./model.js";
import type { Rating, ReviewItemPayload, SummaryPayload } from "./types.js";

const PAGE_SIZE = 50;
const SUMMARY_POLL_MS = 5000;

const api = new ReviewApi();

interface AppState {
  offset: number;
  total: number;
  items: ReviewItemPayload[];
  selected: number;
  reviewer: string;
  summary: SummaryPayload | null;
  bannerError: string | null;
  inlineError: string | null;
  submitting: boolean;
}

const state: AppState = {
  offset: 0,
  total: 0,
  items: [],
  selected: 0,
  reviewer: localStorage.getItem("taxoscope.reviewer") ?? "",
  summary: null,
  bannerError: null,
  inlineError: null,
  submitting: false,
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

const banner = el<HTMLDivElement>("banner");
const bannerMessage = el<HTMLSpanElement>("banner-message");
const queueList = el<HTMLUListElement>("queue");
const pageInfo = el<HTMLSpanElement>("page-info");
const prevBtn = el<HTMLButtonElement>("prev-page");
const nextBtn = el<HTMLButtonElement>("next-page");
const detail = el<HTMLElement>("detail");
const summaryPanel = el<HTMLElement>("summary-panel");
const reviewerInput = el<HTMLInputElement>("reviewer");

function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

function renderBanner(): void {
  if (state.bannerError === null) {
    banner.hidden = true;
  } else {
    banner.hidden = false;
    bannerMessage.textContent = state.bannerError;
  }
}

function renderQueue(): void {
  pageInfo.textContent = pageLabel(state.total, state.offset, state.items.length);
  prevBtn.disabled = !hasPrevPage(state.offset);
  nextBtn.disabled = !hasNextPage(state.total, state.offset, PAGE_SIZE);

  if (state.items.length === 0) {
    queueList.innerHTML = '<li class="empty">No items to review.</li>';
    return;
  }
  queueList.innerHTML = state.items
    .map((item, i) => {
      const badge = badgeText(item, state.reviewer);
      const reviewed = badge === "unreviewed" ? "" : " reviewed";
      const current = i === state.selected ? " current" : "";
      return (
        `<li class="queue-item${current}" data-index="${i}">` +
        `<span class="unit-id">${escapeHtml(item.unit_id)}</span>` +
        `<span class="badge${reviewed}">${escapeHtml(badge)}</span></li>`
      );
    })
    .join("");
  for (const node of queueList.querySelectorAll<HTMLLIElement>(".queue-item")) {
    node.addEventListener("click", () => {
      selectItem(Number(node.dataset.index));
    });
  }
}

function renderDetail(): void {
  const item = state.items[state.selected];
  if (item === undefined) {
    detail.innerHTML = '<p class="empty">Nothing selected.</p>';
    return;
  }
  const mine = latestAssessment(item, state.reviewer);
  const profileTable =
    item.profile === null
      ? `<p class="parse-failed">No profile (parse status: ${escapeHtml(item.parse_status)})</p>`
      : "<table class=\"profile\"><thead><tr><th>Dimension</th>" +
        "<th>Within activities</th><th>Between activities</th></tr></thead><tbody>" +
        profileRows(item.profile)
          .map(
            (r) =>
              `<tr><td>${r.dimension}</td><td>${r.within}</td><td>${r.between}</td></tr>`,
          )
          .join("") +
        `</tbody></table><p class="irrelevant">Irrelevant: ${item.profile.irrelevant}</p>`;

  const buttons = ([3, 2, 1, 0] as Rating[])
    .map((r) => {
      const active = mine !== null && mine.rating === r ? " active" : "";
      return (
        `<button class="rate${active}" data-rating="${r}">` +
        `<kbd>${r}</kbd> ${RATING_NAMES[r]}</button>`
      );
    })
    .join("");

  detail.innerHTML = `
    <header>
      <h2>${escapeHtml(item.practice_name)} <small>(${escapeHtml(item.sector)})</small></h2>
      <p class="meta">${escapeHtml(item.unit_id)} · ${escapeHtml(item.criteria_kind)}
        · parse: ${escapeHtml(item.parse_status)}</p>
    </header>
    <div class="columns">
      <section class="criteria">
        <h3>Criteria text</h3>
        <pre>${escapeHtml(item.criteria_text)}</pre>
      </section>
      <section class="characterization">
        <h3>Characterization</h3>
        ${profileTable}
        <h3>Explanation</h3>
        <pre>${escapeHtml(item.explanation)}</pre>
      </section>
    </div>
    <footer class="rating-bar">
      ${buttons}
      <span id="inline-error" class="inline-error"${state.inlineError ? "" : " hidden"}>
        ${escapeHtml(state.inlineError ?? "")}
      </span>
    </footer>`;

  for (const btn of detail.querySelectorAll<HTMLButtonElement>("button.rate")) {
    btn.addEventListener("click", () => {
      void submitRating(Number(btn.dataset.rating) as Rating);
    });
  }
}

function renderSummary(): void {
  const s = state.summary;
  if (s === null) {
    summaryPanel.innerHTML = '<p class="empty">Summary unavailable.</p>';
    return;
  }
  summaryPanel.innerHTML = `
    <h3>Plausibility summary</h3>
    <table>
      <tr><td>Entirely plausible</td><td id="n-entirely">${s.counts.entirely_plausible}</td></tr>
      <tr><td>Largely plausible</td><td id="n-largely">${s.counts.largely_plausible}</td></tr>
      <tr><td>Somewhat plausible</td><td id="n-somewhat">${s.counts.somewhat_plausible}</td></tr>
      <tr><td>Implausible</td><td id="n-implausible">${s.counts.implausible}</td></tr>
      <tr class="total"><td>Total</td><td id="n-total">${s.total}</td></tr>
      <tr class="total"><td>Average</td><td id="n-average">${averageText(s)}</td></tr>
    </table>`;
}

function render(): void {
  renderBanner();
  renderQueue();
  renderDetail();
  renderSummary();
}

function selectItem(index: number): void {
  if (index < 0 || index >= state.items.length) return;
  state.selected = index;
  state.inlineError = null;
  render();
  const node = queueList.querySelector(`[data-index="${index}"]`);
  node?.scrollIntoView({ block: "nearest" });
}

async function loadQueue(): Promise<void> {
  try {
    const page = await api.getQueue(state.offset, PAGE_SIZE);
    state.items = page.items;
    state.total = page.total;
    state.selected = Math.min(state.selected, Math.max(page.items.length - 1, 0));
    state.bannerError = null;
  } catch (err) {
    state.bannerError = err instanceof ApiError ? err.message : String(err);
  }
  render();
}

async function refreshSummary(): Promise<void> {
  try {
    state.summary = await api.getSummary();
    renderSummary();
  } catch {
    // keep the stale panel; the queue fetch surfaces connectivity problems
  }
}

async function submitRating(rating: Rating): Promise<void> {
  const item = state.items[state.selected];
  if (item === undefined || state.submitting) return;
  if (state.reviewer.trim() === "") {
    state.inlineError = "Set a reviewer name first.";
    renderDetail();
    reviewerInput.focus();
    return;
  }

  // Optimistic: show the new badge immediately, roll back if the PUT fails.
  const index = state.selected;
  const previous = item;
  state.items[index] = withAssessment(item, {
    unit_id: item.unit_id,
    rating,
    notes: "",
    reviewer: state.reviewer,
    assessed_at: new Date().toISOString(),
  });
  state.inlineError = null;
  state.submitting = true;
  render();

  try {
    const result = await api.putAssessment(item.unit_id, rating, state.reviewer);
    state.items[index] = withAssessment(previous, result.assessment);
    const next = nextUnreviewed(state.items, index, state.reviewer);
    if (next !== null) state.selected = next;
  } catch (err) {
    state.items[index] = previous;
    state.inlineError =
      (err instanceof ApiError ? err.message : String(err)) + " (press the rating to retry)";
  } finally {
    state.submitting = false;
  }
  render();
  void refreshSummary();
}

function onKeyDown(event: KeyboardEvent): void {
  if (event.target instanceof HTMLInputElement) return;
  const rating = ratingForKey(event.key);
  if (rating !== null) {
    event.preventDefault();
    void submitRating(rating);
    return;
  }
  switch (event.key) {
    case "j":
    case "ArrowDown":
      event.preventDefault();
      selectItem(state.selected + 1);
      break;
    case "k":
    case "ArrowUp":
      event.preventDefault();
      selectItem(state.selected - 1);
      break;
    case "]":
      if (hasNextPage(state.total, state.offset, PAGE_SIZE)) {
        state.offset += PAGE_SIZE;
        state.selected = 0;
        void loadQueue();
      }
      break;
    case "[":
      if (hasPrevPage(state.offset)) {
        state.offset = Math.max(0, state.offset - PAGE_SIZE);
        state.selected = 0;
        void loadQueue();
      }
      break;
  }
}

function init(): void {
  reviewerInput.value = state.reviewer;
  reviewerInput.addEventListener("change", () => {
    state.reviewer = reviewerInput.value.trim();
    localStorage.setItem("taxoscope.reviewer", state.reviewer);
    render();
  });
  prevBtn.addEventListener("click", () => {
    state.offset = Math.max(0, state.offset - PAGE_SIZE);
    state.selected = 0;
    void loadQueue();
  });
  nextBtn.addEventListener("click", () => {
    state.offset += PAGE_SIZE;
    state.selected = 0;
    void loadQueue();
  });
  el<HTMLButtonElement>("banner-retry").addEventListener("click", () => {
    void loadQueue();
    void refreshSummary();
  });
  document.addEventListener("keydown", onKeyDown);

  void loadQueue();
  void refreshSummary();
  setInterval(() => void refreshSummary(), SUMMARY_POLL_MS);
}

init();
