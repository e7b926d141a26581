/** Transient notification strip, one message at a time. */

import { el } from "./dom";

const TOAST_MS = 6000;

export class Toaster {
  private host: HTMLElement;

  constructor(parent: HTMLElement) {
    this.host = el("div", { class: "toast-host", "aria-live": "polite" });
    parent.append(this.host);
  }

  show(message: string): void {
    const toast = el(
      "div",
      { class: "toast", role: "alert" },
      el("span", { class: "toast-message" }, message),
      el("button", { class: "toast-dismiss", onclick: () => toast.remove() }, "dismiss"),
    );
    this.host.append(toast);
    setTimeout(() => toast.remove(), TOAST_MS);
  }
}
