/**
 * Application state machine: QUESTIONNAIRE -> FEED.
 *
 * Everything the UI shows derives from (answers, profile_id): submission
 * stays blocked until all ten items are answered, the feed is rendered
 * exactly as the service returned it, and a stored profile_id lets a
 * returning visitor land straight on their feed. A stale stored profile
 * (404 from the service) drops back to the questionnaire.
 */

import {
  ApiClient,
  ApiError,
  EntityDetail,
  FeedItem,
  QuestionnaireItem,
} from "./api.js";

export type Phase = "QUESTIONNAIRE" | "FEED";

export const PROFILE_STORAGE_KEY = "climatekb.profile_id";
export const FEED_LIMIT = 20;

export interface UIState {
  phase: Phase;
  items: QuestionnaireItem[] | null;
  answers: Record<string, number>;
  profileId: string | null;
  feed: FeedItem[] | null;
  fieldErrors: Record<string, string>;
  banner: string | null;
  detail: EntityDetail | null;
  loading: boolean;
}

export interface KeyValueStorage {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

const INITIAL: UIState = {
  phase: "QUESTIONNAIRE",
  items: null,
  answers: {},
  profileId: null,
  feed: null,
  fieldErrors: {},
  banner: null,
  detail: null,
  loading: false,
};

type Listener = (state: UIState) => void;

function isNetworkFailure(error: unknown): boolean {
  return !(error instanceof ApiError);
}

export class AppStore {
  private state: UIState = { ...INITIAL };
  private listeners: Listener[] = [];
  private lastFailed: (() => Promise<void>) | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly storage: KeyValueStorage,
  ) {}

  getState(): UIState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private update(partial: Partial<UIState>): void {
    this.state = { ...this.state, ...partial };
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  /** All ten items answered? Submission stays blocked until this holds. */
  isComplete(): boolean {
    if (!this.state.items || this.state.items.length === 0) {
      return false;
    }
    return this.state.items.every((item) => this.state.answers[item.value] !== undefined);
  }

  canSubmit(): boolean {
    return this.isComplete() && !this.state.loading;
  }

  async init(): Promise<void> {
    const stored = this.storage.getItem(PROFILE_STORAGE_KEY);
    if (stored) {
      this.update({ profileId: stored, phase: "FEED" });
      await this.loadFeed();
      return;
    }
    await this.loadQuestionnaire();
  }

  async loadQuestionnaire(): Promise<void> {
    this.update({ loading: true, banner: null });
    try {
      const items = await this.api.getQuestionnaire();
      this.update({ items, loading: false });
    } catch (error) {
      this.lastFailed = () => this.loadQuestionnaire();
      this.update({ loading: false, banner: "The service is unreachable. Check it is running, then retry." });
    }
  }

  setAnswer(value: string, answer: number): void {
    const fieldErrors = { ...this.state.fieldErrors };
    delete fieldErrors[value];
    this.update({ answers: { ...this.state.answers, [value]: answer }, fieldErrors });
  }

  async submit(): Promise<void> {
    if (!this.canSubmit()) {
      return;
    }
    this.update({ loading: true, banner: null, fieldErrors: {} });
    try {
      const profile = await this.api.createProfile(this.state.answers);
      this.storage.setItem(PROFILE_STORAGE_KEY, profile.profile_id);
      this.update({ profileId: profile.profile_id, phase: "FEED", loading: false });
      await this.loadFeed();
    } catch (error) {
      if (error instanceof ApiError && (error.status === 400 || error.status === 422)) {
        this.update({ loading: false, fieldErrors: error.body.fields ?? {} });
        return;
      }
      this.lastFailed = () => this.submit();
      this.update({ loading: false, banner: "Could not submit your answers. Retry when the service is back." });
    }
  }

  async loadFeed(): Promise<void> {
    const profileId = this.state.profileId;
    if (!profileId) {
      return;
    }
    this.update({ loading: true, banner: null });
    try {
      const feed = await this.api.getRecommendations(profileId, FEED_LIMIT);
      this.update({ feed: feed.items, loading: false });
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        // the stored profile no longer exists; start over
        this.storage.removeItem(PROFILE_STORAGE_KEY);
        this.update({ profileId: null, phase: "QUESTIONNAIRE", feed: null, loading: false });
        if (!this.state.items) {
          await this.loadQuestionnaire();
        }
        return;
      }
      if (isNetworkFailure(error)) {
        this.lastFailed = () => this.loadFeed();
        this.update({ loading: false, banner: "Could not load your feed. Retry when the service is back." });
        return;
      }
      this.update({ loading: false, banner: (error as ApiError).message });
    }
  }

  async openEntity(entityId: string): Promise<void> {
    try {
      const detail = await this.api.getEntity(entityId);
      this.update({ detail });
    } catch (error) {
      this.update({ banner: "Could not load the concept detail." });
      this.lastFailed = () => this.openEntity(entityId);
    }
  }

  closeDetail(): void {
    this.update({ detail: null });
  }

  async retry(): Promise<void> {
    const failed = this.lastFailed;
    this.lastFailed = null;
    this.update({ banner: null });
    if (failed) {
      await failed();
    }
  }

  /** Forget the stored profile and answers; back to a fresh questionnaire. */
  async reset(): Promise<void> {
    this.storage.removeItem(PROFILE_STORAGE_KEY);
    this.update({
      profileId: null,
      phase: "QUESTIONNAIRE",
      feed: null,
      answers: {},
      fieldErrors: {},
      detail: null,
    });
    if (!this.state.items) {
      await this.loadQuestionnaire();
    }
  }
}
