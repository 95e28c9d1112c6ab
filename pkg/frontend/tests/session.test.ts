import { describe, expect, it } from "vitest";

import { applyGuess, canGuess, newSession, revealedLabels } from "../src/session.js";
import type { GuessResult } from "../src/types.js";

function result(partial: Partial<GuessResult> & Pick<GuessResult, "shown">): GuessResult {
  return {
    correct: false,
    classification: "incorrect",
    totals: { total: 0, lucky: 0, certified: 0 },
    remaining_count: 0,
    status: "active",
    ...partial,
  };
}

describe("session state", () => {
  it("starts with all labels available", () => {
    const session = newSession("abc", 4, "1/2");
    expect(session.remaining).toEqual([1, 2, 3, 4]);
    expect(canGuess(session, 4)).toBe(true);
    expect(session.totals.total).toBe(0);
  });

  it("removes revealed labels and tracks history", () => {
    let session = newSession("abc", 3, "1/2");
    session = applyGuess(
      session,
      1,
      result({
        shown: 2,
        totals: { total: 0, lucky: 0, certified: 0 },
        remaining_count: 2,
      }),
    );
    expect(session.remaining).toEqual([1, 3]);
    expect(revealedLabels(session)).toEqual([2]);
    expect(canGuess(session, 2)).toBe(false);
    expect(canGuess(session, 3)).toBe(true);
  });

  it("keeps the invariant total = lucky + certified", () => {
    const session = newSession("abc", 2, "1/2");
    expect(() =>
      applyGuess(
        session,
        1,
        result({ shown: 1, totals: { total: 2, lucky: 0, certified: 1 } }),
      ),
    ).toThrow(/total/);
  });

  it("finishes and stores the deck", () => {
    let session = newSession("abc", 1, "1/2");
    session = applyGuess(
      session,
      1,
      result({
        shown: 1,
        correct: true,
        classification: "certified",
        totals: { total: 1, lucky: 0, certified: 1 },
        status: "finished",
        deck: [1],
      }),
    );
    expect(session.status).toBe("finished");
    expect(session.deck).toEqual([1]);
    expect(canGuess(session, 1)).toBe(false);
    expect(() => applyGuess(session, 1, result({ shown: 1 }))).toThrow(/finished/);
  });
});
