// Thin typed client for the game-server HTTP API; the single base-URL
// setting is the only configuration.

import type { GuessResult, Hint, SessionCreated, SessionView } from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  const body = await response.json();
  if (!response.ok) {
    throw new ApiError(response.status, body.error ?? "error", body.message ?? "request failed");
  }
  return body as T;
}

export interface NewGameOptions {
  n: number;
  p: string | number;
  seed?: number;
  flips?: boolean[];
}

export class GameApi {
  constructor(public baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl.replace(/\/$/, "")}${path}`;
  }

  async createSession(options: NewGameOptions): Promise<SessionCreated> {
    const response = await fetch(this.url("/api/session"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(options),
    });
    return unwrap<SessionCreated>(response);
  }

  async getSession(sessionId: string): Promise<SessionView> {
    return unwrap<SessionView>(await fetch(this.url(`/api/session/${sessionId}`)));
  }

  async submitGuess(sessionId: string, label: number): Promise<GuessResult> {
    const response = await fetch(this.url(`/api/session/${sessionId}/guess`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ label }),
    });
    return unwrap<GuessResult>(response);
  }

  async hint(sessionId: string): Promise<Hint> {
    return unwrap<Hint>(await fetch(this.url(`/api/session/${sessionId}/hint`)));
  }

  async exactPmf(n: number, p: string | number): Promise<unknown> {
    const params = new URLSearchParams({ n: String(n), p: String(p) });
    return unwrap(await fetch(this.url(`/api/exact/pmf?${params}`)));
  }
}
