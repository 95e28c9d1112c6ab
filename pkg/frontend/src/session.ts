// Client-side mirror of one game session.  Pure state transitions so the
// rendering layer and the tests share the exact logic; no probability math
// happens here (laws always come from the server).

import type { Classification, GuessResult, Totals } from "./types.js";

export interface UiSession {
  sessionId: string;
  n: number;
  p: string | number;
  history: { guess: number; shown: number; classification: Classification }[];
  totals: Totals;
  status: "active" | "finished";
  remaining: number[];
  deck: number[] | null;
}

export function newSession(sessionId: string, n: number, p: string | number): UiSession {
  return {
    sessionId,
    n,
    p,
    history: [],
    totals: { total: 0, lucky: 0, certified: 0 },
    status: "active",
    remaining: Array.from({ length: n }, (_, i) => i + 1),
    deck: null,
  };
}

/** Fold a guess response into the session; never infers hidden cards. */
export function applyGuess(session: UiSession, guess: number, result: GuessResult): UiSession {
  if (session.status === "finished") {
    throw new Error("session is finished");
  }
  const totals = result.totals;
  if (totals.total !== totals.lucky + totals.certified) {
    throw new Error("server totals violate total = lucky + certified");
  }
  return {
    ...session,
    history: [
      ...session.history,
      { guess, shown: result.shown, classification: result.classification },
    ],
    totals,
    status: result.status,
    remaining: session.remaining.filter((label) => label !== result.shown),
    deck: result.deck ?? null,
  };
}

export function revealedLabels(session: UiSession): number[] {
  return session.history.map((entry) => entry.shown);
}

export function canGuess(session: UiSession, label: number): boolean {
  return session.status === "active" && session.remaining.includes(label);
}
