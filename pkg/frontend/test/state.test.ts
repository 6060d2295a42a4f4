import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { AppStore, FEED_LIMIT, PROFILE_STORAGE_KEY } from "../src/state.js";
import {
  FakeStorage,
  allAnswers,
  jsonResponse,
  questionnaireItems,
  threeEntityFeed,
} from "./helpers.js";

interface MockRoute {
  match: (path: string, init?: RequestInit) => boolean;
  respond: (path: string, init?: RequestInit) => Response;
}

function mockApi(routes: MockRoute[], log: string[] = []): ApiClient {
  return new ApiClient("", async (path, init) => {
    log.push(`${init?.method ?? "GET"} ${path}`);
    const route = routes.find((r) => r.match(path, init));
    if (!route) {
      throw new TypeError(`network failure for ${path}`);
    }
    return route.respond(path, init);
  });
}

const questionnaireRoute: MockRoute = {
  match: (path) => path === "/questionnaire",
  respond: () => jsonResponse(200, questionnaireItems()),
};

const profileRoute: MockRoute = {
  match: (path, init) => path === "/profiles" && init?.method === "POST",
  respond: () => jsonResponse(201, { profile_id: "a".repeat(32), u: {} }),
};

const feedRoute: MockRoute = {
  match: (path) => path.startsWith("/recommendations"),
  respond: () => jsonResponse(200, threeEntityFeed()),
};

describe("questionnaire completion gate", () => {
  it("blocks submission until all ten items are answered", async () => {
    const log: string[] = [];
    const store = new AppStore(mockApi([questionnaireRoute, profileRoute, feedRoute], log),
                               new FakeStorage());
    await store.init();
    expect(store.canSubmit()).toBe(false);

    const answers = allAnswers(6);
    const values = Object.keys(answers);
    for (const value of values.slice(0, 9)) {
      store.setAnswer(value, 6);
    }
    expect(store.canSubmit()).toBe(false);
    await store.submit(); // must be a no-op
    expect(store.getState().phase).toBe("QUESTIONNAIRE");
    expect(log.filter((l) => l.startsWith("POST"))).toHaveLength(0);

    store.setAnswer(values[9]!, 6);
    expect(store.canSubmit()).toBe(true);
  });

  it("reaches FEED with the service feed after an all-6 submission", async () => {
    const storage = new FakeStorage();
    const store = new AppStore(mockApi([questionnaireRoute, profileRoute, feedRoute]), storage);
    await store.init();
    for (const [value, answer] of Object.entries(allAnswers(6))) {
      store.setAnswer(value, answer);
    }
    await store.submit();
    const state = store.getState();
    expect(state.phase).toBe("FEED");
    expect(state.profileId).toBe("a".repeat(32));
    expect(storage.getItem(PROFILE_STORAGE_KEY)).toBe("a".repeat(32));
    expect(state.feed?.map((i) => i.entity_id)).toEqual(["e0002", "e0010", "e0004"]);
  });
});

describe("stored profiles", () => {
  it("reproduces the feed on init from a stored profile id", async () => {
    const storage = new FakeStorage();
    storage.setItem(PROFILE_STORAGE_KEY, "b".repeat(32));
    const log: string[] = [];
    const store = new AppStore(mockApi([questionnaireRoute, feedRoute], log), storage);
    await store.init();
    expect(store.getState().phase).toBe("FEED");
    expect(store.getState().feed).toHaveLength(3);
    expect(log).toContain(`GET /recommendations?profile_id=${"b".repeat(32)}&limit=${FEED_LIMIT}`);
  });

  it("returns to the questionnaire when the stored profile is stale", async () => {
    const storage = new FakeStorage();
    storage.setItem(PROFILE_STORAGE_KEY, "c".repeat(32));
    const staleFeed: MockRoute = {
      match: (path) => path.startsWith("/recommendations"),
      respond: () => jsonResponse(404, { error: "unknown profile_id" }),
    };
    const store = new AppStore(mockApi([questionnaireRoute, staleFeed]), storage);
    await store.init();
    expect(store.getState().phase).toBe("QUESTIONNAIRE");
    expect(store.getState().profileId).toBeNull();
    expect(storage.getItem(PROFILE_STORAGE_KEY)).toBeNull();
    expect(store.getState().items).toHaveLength(10);
  });
});

describe("error handling", () => {
  it("maps a 400 submission onto inline field errors", async () => {
    const badProfile: MockRoute = {
      match: (path, init) => path === "/profiles" && init?.method === "POST",
      respond: () => jsonResponse(400, { error: "invalid answers",
                                         fields: { power: "answer for power out of range" } }),
    };
    const store = new AppStore(mockApi([questionnaireRoute, badProfile]), new FakeStorage());
    await store.init();
    for (const [value, answer] of Object.entries(allAnswers(5))) {
      store.setAnswer(value, answer);
    }
    await store.submit();
    const state = store.getState();
    expect(state.phase).toBe("QUESTIONNAIRE");
    expect(state.fieldErrors.power).toMatch(/out of range/);
    store.setAnswer("power", 4);
    expect(store.getState().fieldErrors.power).toBeUndefined();
  });

  it("shows a retryable banner when the service is down, and retries", async () => {
    let online = false;
    const flaky: MockRoute = {
      match: (path) => path === "/questionnaire" && online,
      respond: () => jsonResponse(200, questionnaireItems()),
    };
    const store = new AppStore(mockApi([flaky]), new FakeStorage());
    await store.init();
    expect(store.getState().banner).toMatch(/unreachable/i);
    expect(store.getState().items).toBeNull();

    online = true;
    await store.retry();
    expect(store.getState().banner).toBeNull();
    expect(store.getState().items).toHaveLength(10);
  });
});

describe("reset", () => {
  it("clears the stored profile and answers", async () => {
    const storage = new FakeStorage();
    const store = new AppStore(mockApi([questionnaireRoute, profileRoute, feedRoute]), storage);
    await store.init();
    for (const [value, answer] of Object.entries(allAnswers(6))) {
      store.setAnswer(value, answer);
    }
    await store.submit();
    expect(store.getState().phase).toBe("FEED");
    await store.reset();
    expect(store.getState().phase).toBe("QUESTIONNAIRE");
    expect(storage.getItem(PROFILE_STORAGE_KEY)).toBeNull();
    expect(Object.keys(store.getState().answers)).toHaveLength(0);
  });
});
