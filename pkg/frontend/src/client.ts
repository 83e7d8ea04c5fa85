// Thin HTTP client for the UI endpoints, with an injectable fetch so tests
// can run against a mocked server.

import {
  MoveReply,
  ReplayBundle,
  ReplaySummary,
  SessionCreateReply,
  StateMessage,
} from "./types.js";

export class ApiError extends Error {
  code: string;
  status: number;
  constructor(status: number, code: string, message: string) {
    super(message);
    this.status = status;
    this.code = code;
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function parseOrThrow<T>(resp: Response): Promise<T> {
  const body = await resp.json();
  if (!resp.ok) {
    const err = body?.error ?? {};
    throw new ApiError(resp.status, err.code ?? "unknown", err.message ?? resp.statusText);
  }
  return body as T;
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (url, init) => fetch(url, init)
  ) {}

  private get(path: string) {
    return this.fetchFn(this.baseUrl + path);
  }

  private post(path: string, body: unknown) {
    return this.fetchFn(this.baseUrl + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  async createSession(params: Record<string, unknown>): Promise<SessionCreateReply> {
    return parseOrThrow(await this.post("/api/sessions", params));
  }

  async getState(sessionId: string): Promise<StateMessage> {
    return parseOrThrow(await this.get(`/api/sessions/${sessionId}/state`));
  }

  async submitMove(sessionId: string, action: number): Promise<MoveReply> {
    return parseOrThrow(await this.post(`/api/sessions/${sessionId}/move`, { action }));
  }

  async saveReplay(sessionId: string): Promise<{ replay_id: string }> {
    return parseOrThrow(await this.post(`/api/sessions/${sessionId}/replay`, {}));
  }

  async listReplays(): Promise<ReplaySummary[]> {
    const body = await parseOrThrow<{ replays: ReplaySummary[] }>(
      await this.get("/api/replays")
    );
    return body.replays;
  }

  async fetchReplay(replayId: string): Promise<ReplayBundle> {
    return parseOrThrow(await this.get(`/api/replays/${replayId}`));
  }
}

// One in-flight move per session: input locks when a move is submitted and
// unlocks when the server answers (success or rejection).
export class MoveGate {
  private busy = false;

  get locked(): boolean {
    return this.busy;
  }

  async submit<T>(request: () => Promise<T>): Promise<T> {
    if (this.busy) {
      throw new ApiError(0, "locked", "a move is already in flight");
    }
    this.busy = true;
    try {
      return await request();
    } finally {
      this.busy = false;
    }
  }
}
