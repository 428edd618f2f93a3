import { ApiClient } from "./api.js";
import { App } from "./app.js";

declare global {
  interface Window {
    GRATIS_API_URL?: string;
  }
}

function baseUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  return fromQuery ?? window.GRATIS_API_URL ?? "";
}

const root = document.getElementById("app");
if (root) {
  void new App(root, new ApiClient(baseUrl())).start();
}
