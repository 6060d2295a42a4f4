/**
 * Typed client for the five climatekb service endpoints.
 *
 * The UI talks to nothing else: questionnaire, profile creation, the
 * ranked feed, entity detail, and (not used by the UI itself) the admin
 * rebuild. A non-2xx response raises ApiError with the parsed body;
 * network failures bubble up as TypeError so callers can offer a retry.
 */

export interface ScaleSpec {
  min: number;
  max: number;
  labels: string[];
}

export interface QuestionnaireItem {
  id: number;
  value: string;
  statement: string;
  scale: ScaleSpec;
}

export interface ProfileResponse {
  profile_id: string;
  u: Record<string, number>;
}

export interface FeedItem {
  entity_id: string;
  label: string;
  relevance: number;
  rank: number;
  evidence_snippet: string;
}

export interface FeedResponse {
  limit: number;
  count: number;
  items: FeedItem[];
}

export interface EvidenceRef {
  article_id: string;
  sentence_index: number;
  text: string;
}

export interface EdgeDetail {
  cause_id: string;
  effect_id: string;
  count: number;
  evidence: EvidenceRef[];
}

export interface EntityDetail {
  id: string;
  label: string;
  key: string;
  state: string | null;
  base: string;
  unit: string | null;
  curated: boolean;
  associations: Record<string, number>;
  member_count: number;
  outgoing: EdgeDetail[];
  incoming: EdgeDetail[];
}

export interface ErrorBody {
  error: string;
  fields?: Record<string, string>;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly body: ErrorBody,
  ) {
    super(body.error || `HTTP ${status}`);
    this.name = "ApiError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    const text = await response.text();
    let body: unknown = null;
    try {
      body = text ? JSON.parse(text) : null;
    } catch {
      body = { error: text };
    }
    if (!response.ok) {
      throw new ApiError(response.status, (body ?? { error: `HTTP ${response.status}` }) as ErrorBody);
    }
    return body as T;
  }

  getQuestionnaire(): Promise<QuestionnaireItem[]> {
    return this.request<QuestionnaireItem[]>("/questionnaire");
  }

  createProfile(answers: Record<string, number>): Promise<ProfileResponse> {
    return this.request<ProfileResponse>("/profiles", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ answers }),
    });
  }

  getRecommendations(profileId: string, limit: number): Promise<FeedResponse> {
    const query = `profile_id=${encodeURIComponent(profileId)}&limit=${limit}`;
    return this.request<FeedResponse>(`/recommendations?${query}`);
  }

  getEntity(entityId: string): Promise<EntityDetail> {
    return this.request<EntityDetail>(`/entities/${encodeURIComponent(entityId)}`);
  }
}
