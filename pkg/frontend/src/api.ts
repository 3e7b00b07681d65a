/**
 * Typed bindings for the matching-service HTTP API.
 *
 * The bearer token lives in memory only; closing the tab ends the session.
 * Non-2xx responses reject with ApiError so callers can branch on the status
 * code. Network-level failures (fetch throwing) are passed through untouched.
 */

export interface RegistrationForm {
  name: string;
  email: string;
  password: string;
  profession: string;
  experience: number;
  interest: string;
  collaboration_with: string;
  domain: string;
  skillset: string;
}

export interface OwnProfile {
  id: string;
  name: string;
  email: string;
  profession: string;
  domain: string;
  skillset: string;
  interest: string;
  collaboration_with: string;
  rating: number | null;
}

export interface FeedCard {
  candidate: string;
  name: string;
  summary: string;
  similarity: number;
  cluster: number;
  rating: number | null;
}

export interface MatchEntry {
  match_id: string;
  other_user: string;
  other_name: string;
  matched_at: number;
}

export interface ChatMessage {
  seq: number;
  sender: string;
  text: string;
  ts: number;
}

export interface SwipeOutcome {
  matched: boolean;
  match_id: string;
}

export type SwipeDirection = "left" | "right";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public readonly status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
  }
}

export class ApiClient {
  private token: string | null = null;

  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  get authenticated(): boolean {
    return this.token !== null;
  }

  logout(): void {
    this.token = null;
  }

  async register(form: RegistrationForm): Promise<string> {
    const body = await this.request("POST", "/profiles", form);
    return (body as { id: string }).id;
  }

  async login(email: string, password: string): Promise<void> {
    const body = await this.request("POST", "/auth/login", { email, password });
    this.token = (body as { token: string }).token;
  }

  me(): Promise<OwnProfile> {
    return this.request("GET", "/me") as Promise<OwnProfile>;
  }

  feed(k: number): Promise<FeedCard[]> {
    return this.request("GET", `/feed?k=${k}`) as Promise<FeedCard[]>;
  }

  swipe(target: string, direction: SwipeDirection): Promise<SwipeOutcome> {
    return this.request("POST", "/swipes", { target, direction }) as Promise<SwipeOutcome>;
  }

  matches(): Promise<MatchEntry[]> {
    return this.request("GET", "/matches") as Promise<MatchEntry[]>;
  }

  messages(matchId: string, since?: number): Promise<ChatMessage[]> {
    const query = since === undefined ? "" : `?since=${since}`;
    const path = `/matches/${encodeURIComponent(matchId)}/messages${query}`;
    return this.request("GET", path) as Promise<ChatMessage[]>;
  }

  sendMessage(matchId: string, text: string): Promise<ChatMessage> {
    const path = `/matches/${encodeURIComponent(matchId)}/messages`;
    return this.request("POST", path, { text }) as Promise<ChatMessage>;
  }

  async rate(target: string, score: number): Promise<number> {
    const body = await this.request("POST", "/ratings", { target, score });
    return (body as { average: number }).average;
  }

  private async request(method: string, path: string, payload?: unknown): Promise<unknown> {
    const headers: Record<string, string> = {};
    if (this.token !== null) {
      headers["Authorization"] = `Bearer ${this.token}`;
    }
    const init: RequestInit = { method, headers };
    if (payload !== undefined) {
      headers["Content-Type"] = "application/json";
      init.body = JSON.stringify(payload);
    }
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (!response.ok) {
      throw new ApiError(response.status, await readDetail(response));
    }
    return response.json();
  }
}

async function readDetail(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (typeof body.detail === "string") {
      return body.detail;
    }
  } catch {
    // non-JSON error body; fall through to the generic message
  }
  return `request failed with status ${response.status}`;
}
