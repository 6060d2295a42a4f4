import { ApiClient } from "./api.js";
import { AppStore } from "./state.js";
import { Handlers, render } from "./view.js";

function apiBase(): string {
  const meta = document.querySelector('meta[name="api-base"]');
  const fromMeta = meta?.getAttribute("content") ?? "";
  const fromQuery = new URLSearchParams(window.location.search).get("api") ?? "";
  return fromQuery || fromMeta;
}

export function bootstrap(root: HTMLElement): AppStore {
  const store = new AppStore(new ApiClient(apiBase()), window.localStorage);
  const handlers: Handlers = {
    onAnswer: (value, answer) => store.setAnswer(value, answer),
    onSubmit: () => void store.submit(),
    onOpenEntity: (entityId) => void store.openEntity(entityId),
    onCloseDetail: () => store.closeDetail(),
    onRetry: () => void store.retry(),
    onReset: () => void store.reset(),
  };
  store.subscribe((state) => render(root, state, handlers));
  render(root, store.getState(), handlers);
  void store.init();
  return store;
}

const root = document.getElementById("app");
if (root) {
  bootstrap(root);
}
