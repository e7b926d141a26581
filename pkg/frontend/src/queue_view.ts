/**
 * Queue rendering: one interactive row per merge candidate, with the score
 * breakdown, both ISR strings, context, and confirm/deny actions.
 */

import { clear, el } from "./dom";
import {
  DecidedMark,
  QueueState,
  ScoreBand,
  SortOrder,
  distinctValues,
  visibleItems,
} from "./queue";
import { QueueItem } from "./schemas";

export interface QueueHandlers {
  onDecide(candidateId: number, confirm: boolean): void;
  onBandChange(band: ScoreBand | null): void;
  onScriptChange(script: string | null): void;
  onLanguageChange(language: string | null): void;
  onSortChange(sort: SortOrder): void;
  onSelect(candidateId: number): void;
  onRetry(): void;
  personHref(personId: number): string;
}

export const BAND_CHOICES: ReadonlyArray<{ label: string; band: ScoreBand }> = [
  { label: "0.80 – 0.85", band: [0.8, 0.85] },
  { label: "0.85 – 0.90", band: [0.85, 0.9] },
  { label: "0.90 – 0.95", band: [0.9, 0.95] },
  { label: "0.95 and up", band: [0.95, 1.01] },
];

function fmt(score: number): string {
  return score.toFixed(3);
}

function scoreBar(label: string, value: number): HTMLElement {
  const fill = el("div", { class: "bar-fill" });
  fill.style.width = `${Math.round(Math.max(0, Math.min(1, value)) * 100)}%`;
  return el(
    "div",
    { class: "bar-row" },
    el("span", { class: "bar-label" }, label),
    el("div", { class: "bar" }, fill),
    el("span", { class: "bar-value" }, fmt(value)),
  );
}

function bandSelect(state: QueueState, handlers: QueueHandlers): HTMLElement {
  const select = el("select", {
    class: "filter-band",
    "aria-label": "score band",
    onchange: (event) => {
      const value = (event.target as HTMLSelectElement).value;
      handlers.onBandChange(value === "" ? null : BAND_CHOICES[Number(value)]!.band);
    },
  });
  select.append(el("option", { value: "" }, "all scores"));
  BAND_CHOICES.forEach((choice, index) => {
    const option = el("option", { value: String(index) }, choice.label);
    if (state.filter.band !== null && state.filter.band[0] === choice.band[0]) {
      option.selected = true;
    }
    select.append(option);
  });
  return select;
}

function valueSelect(
  label: string,
  className: string,
  values: string[],
  current: string | null,
  onChange: (value: string | null) => void,
): HTMLElement {
  const select = el("select", {
    class: className,
    "aria-label": label,
    onchange: (event) => {
      const value = (event.target as HTMLSelectElement).value;
      onChange(value === "" ? null : value);
    },
  });
  select.append(el("option", { value: "" }, `all ${label}s`));
  for (const value of values) {
    const option = el("option", { value }, value);
    if (value === current) {
      option.selected = true;
    }
    select.append(option);
  }
  return select;
}

function sortSelect(state: QueueState, handlers: QueueHandlers): HTMLElement {
  const orders: Array<[SortOrder, string]> = [
    ["api", "server order"],
    ["combined-desc", "score, high first"],
    ["combined-asc", "score, low first"],
    ["surface", "surface A–Z"],
  ];
  const select = el("select", {
    class: "sort-order",
    "aria-label": "sort order",
    onchange: (event) => {
      handlers.onSortChange((event.target as HTMLSelectElement).value as SortOrder);
    },
  });
  for (const [value, label] of orders) {
    const option = el("option", { value }, label);
    if (value === state.sort) {
      option.selected = true;
    }
    select.append(option);
  }
  return select;
}

function toolbar(state: QueueState, handlers: QueueHandlers, shown: number): HTMLElement {
  return el(
    "div",
    { class: "queue-toolbar" },
    bandSelect(state, handlers),
    valueSelect(
      "script",
      "filter-script",
      distinctValues(state.items, "script"),
      state.filter.script,
      handlers.onScriptChange,
    ),
    valueSelect(
      "language",
      "filter-language",
      distinctValues(state.items, "language"),
      state.filter.language,
      handlers.onLanguageChange,
    ),
    sortSelect(state, handlers),
    el("span", { class: "queue-count" }, `${shown} of ${state.items.length} shown`),
  );
}

function outcomeBanner(state: QueueState, handlers: QueueHandlers): HTMLElement | null {
  const outcome = state.outcome;
  if (outcome === null) {
    return null;
  }
  const { receipt, surface, targetPersonId, targetCanonical } = outcome;
  const banner = el("div", { class: "outcome-banner", role: "status" });
  if (receipt.disposition === "confirmed") {
    banner.append(
      el("span", {}, `Merged "${surface}" into `),
      el(
        "a",
        { class: "person-link", href: handlers.personHref(receipt.person_id) },
        `person #${receipt.person_id}`,
      ),
    );
  } else {
    banner.append(el("span", {}, `Kept separate: `));
    banner.append(
      el(
        "a",
        { class: "person-link", href: handlers.personHref(receipt.person_id) },
        `person #${receipt.person_id} ("${surface}")`,
      ),
    );
    if (targetPersonId !== null) {
      banner.append(
        el("span", {}, " and "),
        el(
          "a",
          { class: "person-link", href: handlers.personHref(targetPersonId) },
          `person #${targetPersonId}${targetCanonical ? ` ("${targetCanonical}")` : ""}`,
        ),
      );
    }
  }
  return banner;
}

function newSide(item: QueueItem): HTMLElement {
  return el(
    "div",
    { class: "side side-new" },
    el("div", { class: "side-role" }, "new name"),
    el("div", { class: "surface" }, item.new_surface),
    el("code", { class: "isr isr-new" }, item.new_isr),
    el(
      "div",
      { class: "side-meta" },
      `${item.language || "?"} · ${item.script} · seen ${item.pending_count}×`,
    ),
  );
}

function targetSide(item: QueueItem, handlers: QueueHandlers): HTMLElement {
  const side = el("div", { class: "side side-target" }, el("div", { class: "side-role" }, "existing person"));
  const target = item.target;
  if (target === null) {
    side.append(el("div", { class: "surface surface-missing" }, "no matched person"));
    return side;
  }
  side.append(
    el(
      "a",
      {
        class: "surface person-link",
        href: handlers.personHref(target.person_id),
        onclick: (event) => event.stopPropagation(),
      },
      target.canonical,
    ),
    el("code", { class: "isr isr-target" }, target.isr),
  );
  const others = target.variants.filter((surface) => surface !== target.canonical);
  if (others.length > 0) {
    side.append(el("div", { class: "side-meta" }, `also: ${others.join(", ")}`));
  }
  return side;
}

function scorePanel(item: QueueItem): HTMLElement {
  return el(
    "div",
    { class: "score-panel" },
    el(
      "div",
      { class: "score-headline" },
      el("span", { class: "combined" }, `combined ${fmt(item.score.combined)}`),
      el("span", { class: "mode" }, `mode ${item.score.mode}`),
      el(
        "span",
        { class: `same-cluster ${item.same_cluster ? "yes" : "no"}` },
        item.same_cluster ? "same cluster" : "different cluster",
      ),
    ),
    scoreBar("bigram", item.score.bigram),
    scoreBar("trigram", item.score.trigram),
    scoreBar("consonant", item.score.consonant_bigram),
  );
}

function contextPanel(item: QueueItem): HTMLElement | null {
  const parts: string[] = [];
  if (item.context.doc_title) {
    parts.push(`“${item.context.doc_title}”`);
  } else if (item.context.doc_ids.length > 0) {
    parts.push(`doc ${item.context.doc_ids[0]}`);
  }
  const triggers = Object.keys(item.context.triggers);
  if (triggers.length > 0) {
    parts.push(`triggers: ${triggers.join(", ")}`);
  }
  if (parts.length === 0) {
    return null;
  }
  return el("div", { class: "context" }, parts.join(" · "));
}

function actions(item: QueueItem, state: QueueState, handlers: QueueHandlers): HTMLElement {
  const id = item.candidate_id;
  const busy = state.inFlight.has(id);
  const confirmButton = el(
    "button",
    {
      class: "decide confirm",
      onclick: (event) => {
        event.stopPropagation();
        handlers.onDecide(id, true);
      },
    },
    "confirm merge",
  );
  const denyButton = el(
    "button",
    {
      class: "decide deny",
      onclick: (event) => {
        event.stopPropagation();
        handlers.onDecide(id, false);
      },
    },
    "keep separate",
  );
  confirmButton.disabled = busy;
  denyButton.disabled = busy;
  return el("div", { class: "actions" }, confirmButton, denyButton);
}

function decidedNote(mark: DecidedMark): HTMLElement {
  return el(
    "div",
    { class: "decided-note", role: "status" },
    el("span", { class: "decided-disposition" }, mark.disposition),
    el("span", { class: "decided-detail" }, ` — ${mark.note}`),
  );
}

function queueRow(item: QueueItem, state: QueueState, handlers: QueueHandlers): HTMLElement {
  const id = item.candidate_id;
  const mark = state.decided.get(id);
  const classes = ["queue-row"];
  if (state.selection === id) {
    classes.push("selected");
  }
  if (mark !== undefined) {
    classes.push("decided");
  }
  const row = el(
    "li",
    {
      class: classes.join(" "),
      "data-candidate-id": String(id),
      "aria-selected": state.selection === id ? "true" : "false",
      onclick: () => handlers.onSelect(id),
    },
    el("div", { class: "pair" }, newSide(item), targetSide(item, handlers)),
    scorePanel(item),
    contextPanel(item),
    mark !== undefined ? decidedNote(mark) : actions(item, state, handlers),
  );
  return row;
}

export function renderQueue(
  root: HTMLElement,
  state: QueueState,
  handlers: QueueHandlers,
): void {
  clear(root);
  const shown = visibleItems(state);
  root.append(el("h1", {}, "Merge review queue"));
  root.append(toolbar(state, handlers, shown.length));
  const banner = outcomeBanner(state, handlers);
  if (banner !== null) {
    root.append(banner);
  }
  if (state.error !== null) {
    root.append(
      el(
        "div",
        { class: "error-banner", role: "alert" },
        el("span", {}, `queue unavailable: ${state.error}`),
        el("button", { class: "retry", onclick: () => handlers.onRetry() }, "retry"),
      ),
    );
    return;
  }
  if (state.loading) {
    root.append(el("div", { class: "loading" }, "loading queue…"));
    return;
  }
  if (state.items.length === 0) {
    root.append(el("div", { class: "empty-state" }, "Queue empty — nothing awaiting review."));
    return;
  }
  if (shown.length === 0) {
    root.append(el("div", { class: "empty-filter" }, "No queued items match the filter."));
    return;
  }
  const list = el("ul", { class: "queue-list", role: "list" });
  for (const item of shown) {
    list.append(queueRow(item, state, handlers));
  }
  root.append(list);
}
