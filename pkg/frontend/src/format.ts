// Parsing and formatting helpers; all probabilities arrive from the server
// as "a/b" strings or plain numbers and are only converted for display.

import type { LawEntry } from "./types.js";

/** Parse "a/b" rational strings, decimal strings or numbers to a float. */
export function parseProb(value: string | number): number {
  if (typeof value === "number") return value;
  const text = value.trim();
  const slash = text.indexOf("/");
  if (slash >= 0) {
    const num = Number(text.slice(0, slash));
    const den = Number(text.slice(slash + 1));
    if (!Number.isFinite(num) || !Number.isFinite(den) || den === 0) {
      throw new Error(`cannot parse probability "${value}"`);
    }
    return num / den;
  }
  const parsed = Number(text);
  if (!Number.isFinite(parsed)) throw new Error(`cannot parse probability "${value}"`);
  return parsed;
}

export function formatPercent(x: number, digits = 1): string {
  return `${(100 * x).toFixed(digits)}%`;
}

/** Law entries as numeric bars normalized to sum to one (display safety). */
export function lawToBars(entries: LawEntry[]): { label: number; prob: number }[] {
  const bars = entries.map(([label, prob]) => ({ label, prob: parseProb(prob) }));
  const total = bars.reduce((acc, bar) => acc + bar.prob, 0);
  if (total > 0) {
    for (const bar of bars) bar.prob /= total;
  }
  return bars;
}

/** Expected score of optimal play: (1 - p + p^2) n + 3p - 1 - 2p^2, p >= 1/2. */
export function expectedScore(n: number, p: number): number {
  return (1 - p + p * p) * n + 3 * p - 1 - 2 * p * p;
}

export function scoreBanner(totals: { total: number; lucky: number; certified: number }): string {
  return `${totals.total} correct: ${totals.lucky} lucky, ${totals.certified} certified`;
}
