import { describe, expect, it } from "vitest";

import { expectedScore, formatPercent, lawToBars, parseProb, scoreBanner } from "../src/format.js";

describe("parseProb", () => {
  it("parses rational strings", () => {
    expect(parseProb("1/2")).toBe(0.5);
    expect(parseProb("3/4")).toBe(0.75);
    expect(parseProb("343/1000")).toBeCloseTo(0.343, 12);
  });

  it("parses decimals and numbers", () => {
    expect(parseProb("0.3")).toBeCloseTo(0.3, 12);
    expect(parseProb(0.9)).toBe(0.9);
  });

  it("rejects garbage", () => {
    expect(() => parseProb("3/0")).toThrow();
    expect(() => parseProb("abc")).toThrow();
  });
});

describe("lawToBars", () => {
  it("normalizes bars to sum to one", () => {
    const bars = lawToBars([
      [1, "1/2"],
      [2, "1/4"],
      [3, "1/4"],
    ]);
    const total = bars.reduce((acc, bar) => acc + bar.prob, 0);
    expect(total).toBeCloseTo(1, 12);
    expect(bars[0]).toEqual({ label: 1, prob: 0.5 });
  });

  it("handles a degenerate law", () => {
    expect(lawToBars([[4, "1"]])).toEqual([{ label: 4, prob: 1 }]);
  });
});

describe("expectedScore", () => {
  it("matches the balanced closed form 3n/4", () => {
    expect(expectedScore(16, 0.5)).toBe(12);
    expect(expectedScore(20, 0.5)).toBe(15);
  });

  it("matches the biased closed form", () => {
    // (1 - p + p^2) n + 3p - 1 - 2p^2 at n = 2 reduces to 1 + p
    expect(expectedScore(2, 0.75)).toBeCloseTo(1.75, 12);
  });
});

describe("scoreBanner", () => {
  it("renders the final banner", () => {
    expect(scoreBanner({ total: 17, lucky: 3, certified: 14 })).toBe(
      "17 correct: 3 lucky, 14 certified",
    );
  });
});

describe("formatPercent", () => {
  it("formats with one digit by default", () => {
    expect(formatPercent(0.25)).toBe("25.0%");
  });
});
