/**
 * DOM rendering. The whole tree re-renders on every state change; the app
 * is small enough that diffing would be ceremony. The feed is rendered in
 * the exact order the service returned it: no client-side sorting,
 * filtering, or rescoring, so the displayed rank is the service rank.
 */

import { EntityDetail, FeedItem, QuestionnaireItem } from "./api.js";
import { UIState } from "./state.js";

export interface Handlers {
  onAnswer(value: string, answer: number): void;
  onSubmit(): void;
  onOpenEntity(entityId: string): void;
  onCloseDetail(): void;
  onRetry(): void;
  onReset(): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [name, value] of Object.entries(attrs)) {
    node.setAttribute(name, value);
  }
  node.append(...children);
  return node;
}

function banner(state: UIState, handlers: Handlers): HTMLElement | null {
  if (!state.banner) {
    return null;
  }
  const retry = el("button", { id: "retry", type: "button" }, "Retry");
  retry.addEventListener("click", handlers.onRetry);
  return el("div", { id: "banner", role: "alert" }, state.banner, retry);
}

function questionnaireRow(
  item: QuestionnaireItem,
  state: UIState,
  handlers: Handlers,
): HTMLElement {
  const legend = el("legend", {}, `${item.id}. ${item.statement}`);
  const fieldset = el("fieldset", { class: "item-row", "data-value": item.value }, legend);
  for (let answer = item.scale.min; answer <= item.scale.max; answer += 1) {
    const input = el("input", {
      type: "radio",
      name: item.value,
      value: String(answer),
      id: `${item.value}-${answer}`,
    }) as HTMLInputElement;
    if (state.answers[item.value] === answer) {
      input.checked = true;
    }
    input.addEventListener("change", () => handlers.onAnswer(item.value, answer));
    const labelText = item.scale.labels[answer - item.scale.min] ?? String(answer);
    fieldset.append(
      el("label", { class: "scale-option", for: `${item.value}-${answer}` }, input, labelText),
    );
  }
  const fieldError = state.fieldErrors[item.value];
  if (fieldError) {
    fieldset.append(el("p", { class: "field-error" }, fieldError));
  }
  return fieldset;
}

function questionnaireView(state: UIState, handlers: Handlers): HTMLElement {
  const form = el("form", { id: "questionnaire" });
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    handlers.onSubmit();
  });
  form.append(
    el("p", { class: "intro" },
       "Ten quick statements. Say how much each sounds like you, and we'll " +
       "rank climate concepts by what they mean for the things you care about."),
  );
  if (!state.items) {
    form.append(el("p", { class: "loading" }, "Loading the questionnaire..."));
    return form;
  }
  for (const item of state.items) {
    form.append(questionnaireRow(item, state, handlers));
  }
  const answered = state.items.filter((i) => state.answers[i.value] !== undefined).length;
  const complete = answered === state.items.length;
  const submit = el("button", { id: "submit", type: "submit" }, "See my feed") as HTMLButtonElement;
  submit.disabled = !complete || state.loading;
  form.append(
    el("p", { class: "progress" }, `${answered} of ${state.items.length} answered`),
    submit,
  );
  return form;
}

function feedRow(item: FeedItem, handlers: Handlers): HTMLElement {
  const row = el(
    "li",
    { class: "feed-item", "data-entity-id": item.entity_id },
    el("span", { class: "feed-rank" }, `#${item.rank}`),
    el("span", { class: "feed-label" }, item.label),
    el("span", { class: "feed-relevance" }, item.relevance.toFixed(2)),
  );
  if (item.evidence_snippet) {
    row.append(el("blockquote", { class: "feed-evidence" }, item.evidence_snippet));
  }
  row.addEventListener("click", () => handlers.onOpenEntity(item.entity_id));
  return row;
}

function associationList(detail: EntityDetail): HTMLElement {
  const list = el("ul", { class: "associations" });
  for (const [value, score] of Object.entries(detail.associations)) {
    if (score !== 0) {
      list.append(el("li", {}, `${value}: ${score > 0 ? "+1" : "-1"}`));
    }
  }
  if (!list.children.length) {
    list.append(el("li", {}, "no curated value associations yet"));
  }
  return list;
}

function detailView(detail: EntityDetail, handlers: Handlers): HTMLElement {
  const close = el("button", { id: "close-detail", type: "button" }, "Back to feed");
  close.addEventListener("click", handlers.onCloseDetail);
  const tupleText = `state: ${detail.state ?? "-"} | base: ${detail.base} | unit: ${detail.unit ?? "-"}`;
  const panel = el(
    "section",
    { id: "detail" },
    close,
    el("h2", {}, detail.label),
    el("p", { class: "tuple" }, tupleText),
    el("h3", {}, "Value associations"),
    associationList(detail),
  );
  const edges = [
    ["Causes", detail.outgoing] as const,
    ["Caused by", detail.incoming] as const,
  ];
  for (const [heading, list] of edges) {
    panel.append(el("h3", {}, heading));
    if (!list.length) {
      panel.append(el("p", { class: "no-edges" }, "nothing recorded"));
      continue;
    }
    const ul = el("ul", { class: "edge-list" });
    for (const edge of list) {
      const other = heading === "Causes" ? edge.effect_id : edge.cause_id;
      const first = edge.evidence[0];
      ul.append(el("li", {}, `${other} (seen ${edge.count}x) — "${first ? first.text : ""}"`));
    }
    panel.append(ul);
  }
  return panel;
}

function feedView(state: UIState, handlers: Handlers): HTMLElement {
  const section = el("section", { id: "feed-view" });
  if (state.detail) {
    section.append(detailView(state.detail, handlers));
    return section;
  }
  section.append(el("h2", {}, "Your climate feed"));
  if (state.feed === null) {
    section.append(el("p", { class: "loading" }, "Ranking concepts for you..."));
    return section;
  }
  if (state.feed.length === 0) {
    section.append(el("p", { id: "empty-state" },
                      "The knowledge base is empty right now. Come back once articles have been loaded."));
  } else {
    const list = el("ol", { id: "feed" });
    for (const item of state.feed) {
      list.append(feedRow(item, handlers));
    }
    section.append(list);
  }
  const reset = el("button", { id: "reset", type: "button" }, "Retake the questionnaire");
  reset.addEventListener("click", handlers.onReset);
  section.append(reset);
  return section;
}

export function render(root: HTMLElement, state: UIState, handlers: Handlers): void {
  root.replaceChildren();
  const alert = banner(state, handlers);
  if (alert) {
    root.append(alert);
  }
  root.append(state.phase === "QUESTIONNAIRE"
    ? questionnaireView(state, handlers)
    : feedView(state, handlers));
}
