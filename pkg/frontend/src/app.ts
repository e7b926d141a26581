/**
 * Application controller: owns the per-view state, dispatches routes, and
 * binds view handlers to the API client.
 */

import { ApiClient, ApiError } from "./api";
import { el, clear } from "./dom";
import { PersonState, initialPersonState, loadPerson, submitSplit, toggleVariant } from "./person";
import { PersonHandlers, renderPerson, renderSplitResult } from "./person_view";
import { QueueState, decideCandidate, initialQueueState, loadQueue } from "./queue";
import { QueueHandlers, renderQueue } from "./queue_view";
import { Route, parseRoute, personHash, routeKey, splitHash } from "./router";
import { PersonPage } from "./schemas";
import { Toaster } from "./toast";

interface SplitViewState {
  left: PersonPage | null;
  right: PersonPage | null;
  error: string | null;
  loading: boolean;
}

export class App {
  readonly queueState: QueueState = initialQueueState();
  personState: PersonState | null = null;
  splitState: SplitViewState | null = null;
  private route: Route = { view: "queue" };

  constructor(
    private readonly root: HTMLElement,
    readonly api: ApiClient,
    private readonly toaster: Toaster,
  ) {}

  start(): Promise<void> {
    window.addEventListener("hashchange", () => {
      const next = parseRoute(location.hash);
      if (routeKey(next) !== routeKey(this.route)) {
        void this.navigate(next);
      }
    });
    return this.navigate(parseRoute(location.hash));
  }

  async navigate(route: Route): Promise<void> {
    this.route = route;
    if (route.view === "queue") {
      await loadQueue(this.queueState, this.api, () => this.render());
      return;
    }
    if (route.view === "person") {
      this.personState = initialPersonState(route.id);
      await loadPerson(this.personState, this.api, () => this.render());
      return;
    }
    await this.loadSplit(route.keptId, route.newId);
  }

  /** Jump to a route programmatically and keep the address bar in sync. */
  private goTo(hash: string): void {
    location.hash = hash;
    const next = parseRoute(hash);
    if (routeKey(next) !== routeKey(this.route)) {
      void this.navigate(next);
    }
  }

  private async loadSplit(keptId: number, newId: number): Promise<void> {
    this.splitState = { left: null, right: null, error: null, loading: true };
    this.render();
    try {
      const [left, right] = await Promise.all([
        this.api.person(keptId),
        this.api.person(newId),
      ]);
      this.splitState = { left, right, error: null, loading: false };
    } catch (err) {
      const reason = err instanceof Error ? err.message : String(err);
      this.splitState = { left: null, right: null, error: reason, loading: false };
    }
    this.render();
  }

  private queueHandlers(): QueueHandlers {
    return {
      onDecide: (candidateId, confirm) => {
        void decideCandidate(
          this.queueState,
          this.api,
          candidateId,
          confirm,
          (message) => this.toaster.show(message),
          () => this.render(),
        );
      },
      onBandChange: (band) => {
        this.queueState.filter.band = band;
        this.render();
      },
      onScriptChange: (script) => {
        this.queueState.filter.script = script;
        this.render();
      },
      onLanguageChange: (language) => {
        this.queueState.filter.language = language;
        this.render();
      },
      onSortChange: (sort) => {
        this.queueState.sort = sort;
        this.render();
      },
      onSelect: (candidateId) => {
        this.queueState.selection =
          this.queueState.selection === candidateId ? null : candidateId;
        this.render();
      },
      onRetry: () => {
        void loadQueue(this.queueState, this.api, () => this.render());
      },
      personHref: personHash,
    };
  }

  private personHandlers(state: PersonState): PersonHandlers {
    return {
      onTogglePicker: () => {
        state.pickerOpen = !state.pickerOpen;
        if (!state.pickerOpen) {
          state.chosen.clear();
        }
        this.render();
      },
      onToggleVariant: (surface) => {
        toggleVariant(state, surface);
        this.render();
      },
      onSubmitSplit: () => {
        void submitSplit(
          state,
          this.api,
          (result) => this.goTo(splitHash(result.person_id, result.new_person_id)),
          (message) => this.toaster.show(message),
          () => this.render(),
        );
      },
      onRetry: () => {
        void loadPerson(state, this.api, () => this.render());
      },
      personHref: personHash,
    };
  }

  render(): void {
    if (this.route.view === "queue") {
      renderQueue(this.root, this.queueState, this.queueHandlers());
      return;
    }
    if (this.route.view === "person") {
      const state = this.personState;
      if (state !== null) {
        renderPerson(this.root, state, this.personHandlers(state));
      }
      return;
    }
    this.renderSplit();
  }

  private renderSplit(): void {
    const state = this.splitState;
    if (state === null) {
      return;
    }
    if (state.loading) {
      clear(this.root);
      this.root.append(el("div", { class: "loading" }, "loading split result…"));
      return;
    }
    if (state.error !== null || state.left === null || state.right === null) {
      clear(this.root);
      this.root.append(
        el(
          "div",
          { class: "error-banner", role: "alert" },
          el("span", {}, `split result unavailable: ${state.error ?? "missing person"}`),
          el(
            "button",
            {
              class: "retry",
              onclick: () => {
                if (this.route.view === "split") {
                  void this.loadSplit(this.route.keptId, this.route.newId);
                }
              },
            },
            "retry",
          ),
        ),
      );
      return;
    }
    const handlers: PersonHandlers = {
      onTogglePicker: () => {},
      onToggleVariant: () => {},
      onSubmitSplit: () => {},
      onRetry: () => {},
      personHref: personHash,
    };
    renderSplitResult(this.root, state.left, state.right, handlers);
  }
}

export { ApiError };
