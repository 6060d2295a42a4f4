import { FeedItem, FeedResponse, QuestionnaireItem } from "../src/api.js";
import { KeyValueStorage } from "../src/state.js";

export const VALUES = [
  "conformity", "tradition", "benevolence", "universalism", "self_direction",
  "stimulation", "hedonism", "achievement", "power", "security",
] as const;

export const SCALE = {
  min: 1,
  max: 6,
  labels: [
    "strongly disagree", "disagree", "slightly disagree",
    "slightly agree", "agree", "strongly agree",
  ],
};

export function questionnaireItems(): QuestionnaireItem[] {
  return VALUES.map((value, index) => ({
    id: index + 1,
    value,
    statement: `Statement about ${value}.`,
    scale: SCALE,
  }));
}

/** Three entities, deliberately not sorted by relevance: the UI must
 *  render them exactly as given. */
export function threeEntityFeed(): FeedResponse {
  const items: FeedItem[] = [
    { entity_id: "e0002", label: "drier soil", relevance: 0.4, rank: 1,
      evidence_snippet: "Warmer temperatures lead to drier soil." },
    { entity_id: "e0010", label: "decrease in population of moose available to hunt",
      relevance: 2.0, rank: 2, evidence_snippet: "" },
    { entity_id: "e0004", label: "warmer oceans", relevance: -1.0, rank: 3,
      evidence_snippet: "Rising CO2 levels result in warmer oceans." },
  ];
  return { limit: 20, count: items.length, items };
}

export function allAnswers(level: number): Record<string, number> {
  return Object.fromEntries(VALUES.map((v) => [v, level]));
}

export class FakeStorage implements KeyValueStorage {
  private map = new Map<string, string>();

  getItem(key: string): string | null {
    return this.map.has(key) ? this.map.get(key)! : null;
  }

  setItem(key: string, value: string): void {
    this.map.set(key, value);
  }

  removeItem(key: string): void {
    this.map.delete(key);
  }
}

export function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}
