/**
 * Person page view-model: the exported person record, the split picker
 * selection, and the split submission flow.
 */

import { ApiClient, ApiError } from "./api";
import { PersonPage, PersonVariant, SplitResult } from "./schemas";

export interface PersonState {
  personId: number;
  page: PersonPage | null;
  notFound: boolean;
  error: string | null;
  loading: boolean;
  pickerOpen: boolean;
  chosen: Set<string>;
  splitting: boolean;
}

export function initialPersonState(personId: number): PersonState {
  return {
    personId,
    page: null,
    notFound: false,
    error: null,
    loading: false,
    pickerOpen: false,
    chosen: new Set(),
    splitting: false,
  };
}

export async function loadPerson(
  state: PersonState,
  api: ApiClient,
  rerender: () => void,
): Promise<void> {
  state.loading = true;
  state.error = null;
  state.notFound = false;
  rerender();
  try {
    state.page = await api.person(state.personId);
  } catch (err) {
    state.page = null;
    if (err instanceof ApiError && err.status === 404) {
      state.notFound = true;
    } else {
      state.error = err instanceof Error ? err.message : String(err);
    }
  } finally {
    state.loading = false;
    rerender();
  }
}

/** Variants grouped by script, preserving server order within and across groups. */
export function variantsByScript(page: PersonPage): Map<string, PersonVariant[]> {
  const groups = new Map<string, PersonVariant[]>();
  for (const variant of page.person.variants) {
    const group = groups.get(variant.script);
    if (group === undefined) {
      groups.set(variant.script, [variant]);
    } else {
      group.push(variant);
    }
  }
  return groups;
}

/** Trigger phrases as (phrase, count) rows, most frequent first. */
export function triggerRows(page: PersonPage): Array<[string, number]> {
  return Object.entries(page.person.trigger_phrases).sort(
    (a, b) => b[1] - a[1] || a[0].localeCompare(b[0]),
  );
}

export function canSplit(page: PersonPage): boolean {
  return page.person.variants.length > 1;
}

/** A split must move at least one variant and leave at least one behind. */
export function splitSubmittable(state: PersonState): boolean {
  const total = state.page?.person.variants.length ?? 0;
  return !state.splitting && state.chosen.size >= 1 && state.chosen.size < total;
}

export function toggleVariant(state: PersonState, surface: string): void {
  if (state.chosen.has(surface)) {
    state.chosen.delete(surface);
  } else {
    state.chosen.add(surface);
  }
}

export async function submitSplit(
  state: PersonState,
  api: ApiClient,
  onDone: (result: SplitResult) => void,
  notify: (message: string) => void,
  rerender: () => void,
): Promise<void> {
  if (!splitSubmittable(state)) {
    return;
  }
  state.splitting = true;
  rerender();
  try {
    const result = await api.split(state.personId, [...state.chosen]);
    onDone(result);
  } catch (err) {
    const reason = err instanceof Error ? err.message : String(err);
    notify(`split not applied: ${reason}`);
  } finally {
    state.splitting = false;
    rerender();
  }
}
