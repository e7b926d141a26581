/**
 * Queue view-model: the reviewable items, the active filter, and the decide
 * workflow.  Pure state transitions live here so they can be tested without
 * a DOM; rendering is in queue_view.ts.
 */

import { ApiClient, ApiError } from "./api";
import { DecisionReceipt, QueueItem } from "./schemas";

/** Half-open combined-score interval: lo inclusive, hi exclusive. */
export type ScoreBand = readonly [number, number];

export interface QueueFilter {
  band: ScoreBand | null;
  script: string | null;
  language: string | null;
}

export type SortOrder = "api" | "combined-asc" | "combined-desc" | "surface";

/** A row that came back from a replayed decision: already settled elsewhere. */
export interface DecidedMark {
  disposition: string;
  note: string;
}

/** Outcome banner after a successful decision, with links to the persons. */
export interface DecisionOutcome {
  receipt: DecisionReceipt;
  surface: string;
  targetPersonId: number | null;
  targetCanonical: string | null;
}

export interface QueueState {
  items: QueueItem[];
  filter: QueueFilter;
  selection: number | null;
  sort: SortOrder;
  inFlight: Set<number>;
  decided: Map<number, DecidedMark>;
  outcome: DecisionOutcome | null;
  error: string | null;
  loading: boolean;
}

export function initialQueueState(): QueueState {
  return {
    items: [],
    filter: { band: null, script: null, language: null },
    selection: null,
    sort: "api",
    inFlight: new Set(),
    decided: new Map(),
    outcome: null,
    error: null,
    loading: false,
  };
}

export function bandMatches(band: ScoreBand, combined: number): boolean {
  return combined >= band[0] && combined < band[1];
}

export function matchesFilter(filter: QueueFilter, item: QueueItem): boolean {
  if (filter.band !== null && !bandMatches(filter.band, item.score.combined)) {
    return false;
  }
  if (filter.script !== null && item.script !== filter.script) {
    return false;
  }
  if (filter.language !== null && item.language !== filter.language) {
    return false;
  }
  return true;
}

/** Items to render: filtered, in API order unless the analyst re-sorted. */
export function visibleItems(state: QueueState): QueueItem[] {
  const kept = state.items.filter((item) => matchesFilter(state.filter, item));
  switch (state.sort) {
    case "api":
      return kept;
    case "combined-asc":
      return kept.slice().sort((a, b) => a.score.combined - b.score.combined);
    case "combined-desc":
      return kept.slice().sort((a, b) => b.score.combined - a.score.combined);
    case "surface":
      return kept.slice().sort((a, b) => a.new_surface.localeCompare(b.new_surface));
  }
}

/** Distinct values of an item field, for filter dropdowns, in first-seen order. */
export function distinctValues(items: QueueItem[], field: "script" | "language"): string[] {
  const seen: string[] = [];
  for (const item of items) {
    const value = item[field];
    if (!seen.includes(value)) {
      seen.push(value);
    }
  }
  return seen;
}

export async function loadQueue(
  state: QueueState,
  api: ApiClient,
  rerender: () => void,
): Promise<void> {
  state.loading = true;
  state.error = null;
  rerender();
  try {
    state.items = await api.queue();
  } catch (err) {
    state.items = [];
    state.error = err instanceof Error ? err.message : String(err);
  } finally {
    state.loading = false;
    rerender();
  }
}

export type DecideResult = "decided" | "conflict" | "failed" | "ignored";

function markFromDetail(detail: string): DecidedMark {
  const match = /already decided:\s*(\S+)/.exec(detail);
  return { disposition: match?.[1] ?? "decided", note: detail };
}

/**
 * Decide one queued candidate with an optimistic update.
 *
 * The row disappears immediately.  On success it stays gone and an outcome
 * banner links to the resulting person(s); on 409 it comes back flagged with
 * the disposition the server already recorded; on any other failure it comes
 * back unchanged and the caller's notifier shows a toast.  Calls for a row
 * that is in flight, already settled, or absent are no-ops, which makes a
 * double click harmless.
 */
export async function decideCandidate(
  state: QueueState,
  api: ApiClient,
  candidateId: number,
  confirm: boolean,
  notify: (message: string) => void,
  rerender: () => void,
): Promise<DecideResult> {
  if (state.inFlight.has(candidateId) || state.decided.has(candidateId)) {
    return "ignored";
  }
  const index = state.items.findIndex((item) => item.candidate_id === candidateId);
  if (index < 0) {
    return "ignored";
  }
  const item = state.items[index]!;
  state.inFlight.add(candidateId);
  state.items.splice(index, 1);
  rerender();
  try {
    const receipt = await api.decide(candidateId, confirm);
    state.outcome = {
      receipt,
      surface: item.new_surface,
      targetPersonId: item.target?.person_id ?? null,
      targetCanonical: item.target?.canonical ?? null,
    };
    return "decided";
  } catch (err) {
    state.items.splice(index, 0, item);
    if (err instanceof ApiError && err.status === 409) {
      state.decided.set(candidateId, markFromDetail(err.detail));
      return "conflict";
    }
    const reason = err instanceof Error ? err.message : String(err);
    notify(`decision for "${item.new_surface}" not saved: ${reason}`);
    return "failed";
  } finally {
    state.inFlight.delete(candidateId);
    rerender();
  }
}
