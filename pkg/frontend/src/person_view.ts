/**
 * Person page rendering: script-grouped variant tables, trigger phrases,
 * related persons, and the split picker.
 */

import { clear, el } from "./dom";
import {
  PersonState,
  canSplit,
  splitSubmittable,
  triggerRows,
  variantsByScript,
} from "./person";
import { PersonPage, PersonVariant } from "./schemas";

export interface PersonHandlers {
  onTogglePicker(): void;
  onToggleVariant(surface: string): void;
  onSubmitSplit(): void;
  onRetry(): void;
  personHref(personId: number): string;
}

function variantRow(variant: PersonVariant): HTMLElement {
  return el(
    "tr",
    { class: "variant-row" },
    el("td", { class: "variant-surface" }, variant.surface),
    el("td", {}, el("code", { class: "isr" }, variant.isr)),
    el("td", {}, variant.language || "?"),
    el("td", { class: "variant-count" }, String(variant.count)),
    el("td", {}, variant.first_seen),
    el("td", {}, variant.last_seen),
  );
}

function variantTables(page: PersonPage): HTMLElement {
  const host = el("section", { class: "variants" }, el("h2", {}, "Name variants"));
  for (const [script, variants] of variantsByScript(page)) {
    const head = el(
      "tr",
      {},
      el("th", {}, "surface"),
      el("th", {}, "ISR"),
      el("th", {}, "language"),
      el("th", {}, "count"),
      el("th", {}, "first seen"),
      el("th", {}, "last seen"),
    );
    const body = el("tbody", {});
    for (const variant of variants) {
      body.append(variantRow(variant));
    }
    host.append(
      el(
        "section",
        { class: "script-group", "data-script": script },
        el("h3", { class: "script-name" }, script),
        el("table", { class: "variant-table" }, el("thead", {}, head), body),
      ),
    );
  }
  return host;
}

function triggerList(page: PersonPage): HTMLElement {
  const rows = triggerRows(page);
  const host = el("section", { class: "triggers" }, el("h2", {}, "Trigger phrases"));
  if (rows.length === 0) {
    host.append(el("p", { class: "none" }, "none recorded"));
    return host;
  }
  const list = el("ul", { class: "trigger-list" });
  for (const [phrase, count] of rows) {
    list.append(el("li", {}, `${phrase} ×${count}`));
  }
  host.append(list);
  return host;
}

function relatedList(page: PersonPage, handlers: PersonHandlers): HTMLElement {
  const host = el("section", { class: "related" }, el("h2", {}, "Related persons"));
  if (page.related.length === 0) {
    host.append(el("p", { class: "none" }, "none recorded"));
    return host;
  }
  const list = el("ul", { class: "related-list" });
  for (const other of page.related) {
    list.append(
      el(
        "li",
        {},
        el(
          "a",
          { class: "person-link", href: handlers.personHref(other.person_id) },
          other.canonical,
        ),
        ` — ${other.count} shared document${other.count === 1 ? "" : "s"}`,
      ),
    );
  }
  host.append(list);
  return host;
}

function splitPicker(state: PersonState, handlers: PersonHandlers): HTMLElement {
  const page = state.page!;
  const host = el("section", { class: "split" }, el("h2", {}, "Split"));
  const toggle = el(
    "button",
    { class: "split-toggle", onclick: () => handlers.onTogglePicker() },
    state.pickerOpen ? "close picker" : "split person…",
  );
  if (!canSplit(page)) {
    toggle.disabled = true;
    toggle.title = "a person with a single variant cannot be split";
  }
  host.append(toggle);
  if (!state.pickerOpen || !canSplit(page)) {
    return host;
  }
  const form = el("div", { class: "split-picker" });
  form.append(
    el(
      "p",
      { class: "split-hint" },
      "Tick the variants that belong to a different person. At least one must stay.",
    ),
  );
  for (const variant of page.person.variants) {
    const box = el("input", {
      type: "checkbox",
      value: variant.surface,
      onchange: () => handlers.onToggleVariant(variant.surface),
    });
    box.checked = state.chosen.has(variant.surface);
    form.append(
      el("label", { class: "split-choice" }, box, ` ${variant.surface} (${variant.script})`),
    );
  }
  const submit = el(
    "button",
    { class: "split-submit", onclick: () => handlers.onSubmitSplit() },
    state.splitting ? "splitting…" : `move ${state.chosen.size} to a new person`,
  );
  submit.disabled = !splitSubmittable(state);
  form.append(submit);
  host.append(form);
  return host;
}

/** One person rendered as a card; shared by the person and split-result pages. */
export function personCard(page: PersonPage, handlers: PersonHandlers): HTMLElement {
  return el(
    "article",
    { class: "person-card", "data-person-id": String(page.person.id) },
    el(
      "header",
      {},
      el("h1", { class: "canonical" }, page.person.canonical),
      el("span", { class: "person-id" }, `person #${page.person.id}`),
    ),
    variantTables(page),
    triggerList(page),
    relatedList(page, handlers),
  );
}

export function renderPerson(
  root: HTMLElement,
  state: PersonState,
  handlers: PersonHandlers,
): void {
  clear(root);
  if (state.loading) {
    root.append(el("div", { class: "loading" }, "loading person…"));
    return;
  }
  if (state.notFound) {
    root.append(
      el(
        "div",
        { class: "not-found" },
        el("h1", {}, "Person not found"),
        el("p", {}, `No person #${state.personId} exists.`),
      ),
    );
    return;
  }
  if (state.error !== null) {
    root.append(
      el(
        "div",
        { class: "error-banner", role: "alert" },
        el("span", {}, `person unavailable: ${state.error}`),
        el("button", { class: "retry", onclick: () => handlers.onRetry() }, "retry"),
      ),
    );
    return;
  }
  if (state.page === null) {
    return;
  }
  root.append(personCard(state.page, handlers));
  root.append(splitPicker(state, handlers));
}

/** Split outcome: both resulting persons side by side. */
export function renderSplitResult(
  root: HTMLElement,
  left: PersonPage,
  right: PersonPage,
  handlers: PersonHandlers,
): void {
  clear(root);
  root.append(el("h1", {}, "Split result"));
  root.append(
    el(
      "div",
      { class: "split-result" },
      personCard(left, handlers),
      personCard(right, handlers),
    ),
  );
}
