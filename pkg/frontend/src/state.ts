/**
 * Session state for the matching client.
 *
 * The store is the single source of truth the views render from, and every
 * value it holds is taken verbatim from a server response. It never computes
 * similarity, ordering, or match state locally: the feed deck keeps the
 * server's order, banners fire only on server-reported matches, and chat
 * visibility follows the server's 403/404 answers.
 *
 * Polling is pull-based. startPolling() schedules pollOnce() on an interval;
 * tests call pollOnce() directly so timing never enters the assertions.
 */

import { ApiError } from "./api.js";
import type {
  ApiClient,
  ChatMessage,
  FeedCard,
  MatchEntry,
  OwnProfile,
  RegistrationForm,
  SwipeDirection,
} from "./api.js";

export type View = "login" | "register" | "feed" | "matches" | "chat" | "profile";

export interface Notice {
  kind: "info" | "error";
  text: string;
}

export interface ChatState {
  matchId: string;
  otherName: string;
  messages: ChatMessage[];
  /** Server refused the thread (not matched); render a notice, no send box. */
  denied: boolean;
  /** Optimistically rendered texts awaiting server confirmation. */
  pending: string[];
  /** Timestamp cursor for the ?since= parameter (exclusive on the server). */
  sinceTs: number | null;
  /** Sequence numbers already displayed; guards against overlap on ts ties. */
  seen: Set<number>;
}

type Api = Pick<
  ApiClient,
  | "register"
  | "login"
  | "logout"
  | "me"
  | "feed"
  | "swipe"
  | "matches"
  | "messages"
  | "sendMessage"
  | "rate"
>;

export const DEFAULT_POLL_MS = 2000;

const FEED_SIZE = 10;
const MAX_NOTICES = 4;

export class SessionStore {
  view: View = "login";
  me: OwnProfile | null = null;
  deck: FeedCard[] = [];
  matches: MatchEntry[] = [];
  matchBanner: string | null = null;
  chat: ChatState | null = null;
  notices: Notice[] = [];

  private knownMatches = new Set<string>();
  private pollTimer: ReturnType<typeof setInterval> | null = null;
  private pollInFlight = false;
  private listeners: Array<() => void> = [];

  constructor(private readonly api: Api) {}

  subscribe(listener: () => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((fn) => fn !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) {
      listener();
    }
  }

  private notify(kind: Notice["kind"], text: string): void {
    const last = this.notices[this.notices.length - 1];
    if (last !== undefined && last.text === text) {
      return;
    }
    this.notices.push({ kind, text });
    while (this.notices.length > MAX_NOTICES) {
      this.notices.shift();
    }
  }

  dismissNotice(index: number): void {
    this.notices.splice(index, 1);
    this.emit();
  }

  dismissBanner(): void {
    this.matchBanner = null;
    this.emit();
  }

  // -- authentication ------------------------------------------------------

  showLogin(): void {
    this.view = "login";
    this.emit();
  }

  showRegister(): void {
    this.view = "register";
    this.emit();
  }

  async register(form: RegistrationForm): Promise<boolean> {
    try {
      await this.api.register(form);
    } catch (err) {
      this.notify("error", `registration failed: ${describe(err)}`);
      this.emit();
      return false;
    }
    return this.login(form.email, form.password);
  }

  async login(email: string, password: string): Promise<boolean> {
    try {
      await this.api.login(email, password);
    } catch (err) {
      this.notify("error", `login failed: ${describe(err)}`);
      this.emit();
      return false;
    }
    try {
      this.me = await this.api.me();
      await this.refreshFeed();
      await this.refreshMatches(false);
    } catch (err) {
      this.notify("error", describe(err));
    }
    this.view = "feed";
    this.emit();
    return true;
  }

  logout(): void {
    this.api.logout();
    this.me = null;
    this.deck = [];
    this.matches = [];
    this.matchBanner = null;
    this.chat = null;
    this.knownMatches = new Set();
    this.view = "login";
    this.emit();
  }

  // -- feed and swipes -----------------------------------------------------

  async refreshFeed(): Promise<void> {
    try {
      this.deck = await this.api.feed(FEED_SIZE);
    } catch (err) {
      this.notify("error", `could not load the feed: ${describe(err)}`);
    }
    this.emit();
  }

  /**
   * Swipe the top card. On success the card is removed and the next one shows.
   * A server-reported match raises the banner and refreshes the match list.
   * On any failure the card stays on top so the gesture can be retried.
   */
  async swipeTop(direction: SwipeDirection): Promise<void> {
    const card = this.deck[0];
    if (card === undefined) {
      return;
    }
    let outcome;
    try {
      outcome = await this.api.swipe(card.candidate, direction);
    } catch (err) {
      if (err instanceof ApiError) {
        this.notify("error", `swipe rejected: ${err.message}`);
      } else {
        this.notify("error", "network error; the card was kept so you can retry");
      }
      this.emit();
      return;
    }
    this.deck.shift();
    if (outcome.matched) {
      this.matchBanner = `You matched with ${card.name}`;
      try {
        await this.refreshMatches(false);
      } catch (err) {
        this.notify("error", `could not refresh matches: ${describe(err)}`);
      }
    }
    this.emit();
  }

  // -- matches -------------------------------------------------------------

  showFeed(): void {
    this.view = "feed";
    this.emit();
  }

  showMatches(): void {
    this.view = "matches";
    this.emit();
  }

  private async refreshMatches(announce: boolean): Promise<void> {
    const fresh = await this.api.matches();
    if (announce) {
      for (const entry of fresh) {
        if (!this.knownMatches.has(entry.match_id)) {
          this.matchBanner = `You matched with ${entry.other_name}`;
        }
      }
    }
    this.matches = fresh;
    this.knownMatches = new Set(fresh.map((entry) => entry.match_id));
  }

  async rateMatch(target: string, score: number): Promise<void> {
    try {
      const average = await this.api.rate(target, score);
      this.notify("info", `rating saved; their average is now ${average.toFixed(1)}`);
    } catch (err) {
      this.notify("error", `rating failed: ${describe(err)}`);
    }
    this.emit();
  }

  // -- chat ----------------------------------------------------------------

  async openChat(matchId: string): Promise<void> {
    const entry = this.matches.find((m) => m.match_id === matchId);
    this.chat = {
      matchId,
      otherName: entry !== undefined ? entry.other_name : matchId,
      messages: [],
      denied: false,
      pending: [],
      sinceTs: null,
      seen: new Set(),
    };
    this.view = "chat";
    await this.pollChat();
    this.emit();
  }

  closeChat(): void {
    this.chat = null;
    this.view = "matches";
    this.emit();
  }

  async sendMessage(text: string): Promise<void> {
    const chat = this.chat;
    if (chat === null || chat.denied || text.trim() === "") {
      return;
    }
    chat.pending.push(text);
    this.emit();
    try {
      const message = await this.api.sendMessage(chat.matchId, text);
      this.absorb(chat, [message]);
    } catch (err) {
      if (err instanceof ApiError && (err.status === 403 || err.status === 404)) {
        chat.denied = true;
        this.notify("error", "not matched; this chat is unavailable");
      } else {
        this.notify("error", `message not sent: ${describe(err)}`);
      }
    } finally {
      const at = chat.pending.indexOf(text);
      if (at >= 0) {
        chat.pending.splice(at, 1);
      }
    }
    this.emit();
  }

  private async pollChat(): Promise<void> {
    const chat = this.chat;
    if (chat === null || chat.denied) {
      return;
    }
    try {
      const fresh = await this.api.messages(chat.matchId, chat.sinceTs ?? undefined);
      this.absorb(chat, fresh);
    } catch (err) {
      if (err instanceof ApiError && (err.status === 403 || err.status === 404)) {
        chat.denied = true;
        this.notify("error", "not matched; this chat is unavailable");
      } else {
        this.notify("error", `chat update failed: ${describe(err)}`);
      }
    }
  }

  private absorb(chat: ChatState, incoming: ChatMessage[]): void {
    for (const message of incoming) {
      if (!chat.seen.has(message.seq)) {
        chat.seen.add(message.seq);
        chat.messages.push(message);
      }
      if (chat.sinceTs === null || message.ts > chat.sinceTs) {
        chat.sinceTs = message.ts;
      }
    }
    chat.messages.sort((a, b) => a.seq - b.seq);
  }

  // -- profile -------------------------------------------------------------

  async showProfile(): Promise<void> {
    try {
      this.me = await this.api.me();
    } catch (err) {
      this.notify("error", describe(err));
    }
    this.view = "profile";
    this.emit();
  }

  // -- polling -------------------------------------------------------------

  /**
   * One poll cycle: refresh the match list (announcing matches made by the
   * other side) and, when a thread is open, fetch new messages. Overlapping
   * calls collapse to one; the since cursor keeps re-fetches disjoint.
   */
  async pollOnce(): Promise<void> {
    if (this.pollInFlight || this.me === null) {
      return;
    }
    this.pollInFlight = true;
    try {
      await this.refreshMatches(true);
      await this.pollChat();
    } catch (err) {
      this.notify("error", `refresh failed: ${describe(err)}`);
    } finally {
      this.pollInFlight = false;
    }
    this.emit();
  }

  startPolling(intervalMs: number = DEFAULT_POLL_MS): void {
    this.stopPolling();
    this.pollTimer = setInterval(() => {
      void this.pollOnce();
    }, intervalMs);
  }

  stopPolling(): void {
    if (this.pollTimer !== null) {
      clearInterval(this.pollTimer);
      this.pollTimer = null;
    }
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) {
    return err.message;
  }
  if (err instanceof Error) {
    return err.message;
  }
  return String(err);
}
