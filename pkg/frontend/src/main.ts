import { ApiClient } from "./api";
import { App } from "./app";
import { Toaster } from "./toast";

function boot(): void {
  const root = document.getElementById("app");
  if (root === null) {
    throw new Error("missing #app mount point");
  }
  const app = new App(root, new ApiClient(""), new Toaster(document.body));
  void app.start();
}

if (document.readyState === "loading") {
  document.addEventListener("DOMContentLoaded", boot);
} else {
  boot();
}
