import { ApiClient } from "./api.js";
import { App } from "./app.js";

// ?api=http://host:port points the client at a service on another
// origin (needs a proxy or permissive CORS); default is same-origin
const params = new URLSearchParams(window.location.search);
const base = params.get("api") ?? "";

const root = document.querySelector<HTMLDivElement>("#app");
if (!root) {
  throw new Error("missing #app mount point");
}

const app = new App(root, new ApiClient(base));
void app.init();
