import { ApiClient } from "./api.js";
import { SessionStore } from "./state.js";
import { render } from "./ui.js";

const api = new ApiClient("");
const store = new SessionStore(api);

const root = document.getElementById("app");
if (root === null) {
  throw new Error("missing #app mount point");
}

store.subscribe(() => render(store, root));
store.startPolling();
render(store, root);
