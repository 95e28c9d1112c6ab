// DOM wiring for the single-page game client.  One active session per tab;
// requests are serialized by disabling input while a call is in flight.

import { GameApi, ApiError } from "./api.js";
import { expectedScore, formatPercent, lawToBars, parseProb, scoreBanner } from "./format.js";
import { applyGuess, canGuess, newSession, type UiSession } from "./session.js";
import type { Hint } from "./types.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

let api = new GameApi("http://127.0.0.1:8000");
let session: UiSession | null = null;
let busy = false;

function setError(message: string): void {
  $("error").textContent = message;
}

function render(): void {
  const grid = $("card-grid");
  const log = $("log");
  const score = $("score");
  const banner = $("banner");
  grid.replaceChildren();
  if (!session) {
    score.textContent = "";
    banner.textContent = "";
    log.replaceChildren();
    return;
  }
  for (let label = 1; label <= session.n; label++) {
    const button = document.createElement("button");
    button.textContent = String(label);
    button.className = "card";
    button.disabled = busy || !canGuess(session, label);
    button.addEventListener("click", () => void guess(label));
    grid.appendChild(button);
  }
  log.replaceChildren(
    ...session.history.map((entry, index) => {
      const line = document.createElement("li");
      const badge = document.createElement("span");
      badge.className = `badge ${entry.classification}`;
      badge.textContent = entry.classification;
      line.textContent = `#${index + 1} guessed ${entry.guess}, card was ${entry.shown} `;
      line.appendChild(badge);
      return line;
    }),
  );
  const p = parseProb(session.p);
  const benchmark =
    p >= 0.5 && session.n >= 2
      ? ` (optimal play expects ${expectedScore(session.n, p).toFixed(2)})`
      : "";
  score.textContent =
    `correct ${session.totals.total} = ${session.totals.lucky} lucky + ` +
    `${session.totals.certified} certified${benchmark}`;
  banner.textContent = session.status === "finished" ? scoreBanner(session.totals) : "";
  if (session.status === "finished" && session.deck) {
    banner.textContent += ` — deck was ${session.deck.join(", ")}`;
  }
}

function renderHint(hint: Hint): void {
  const overlay = $("hint-panel");
  overlay.replaceChildren();
  const title = document.createElement("div");
  title.textContent = hint.certified
    ? `certain: next card is ${hint.optimal_guess}`
    : `optimal guess: ${hint.optimal_guess}`;
  overlay.appendChild(title);
  for (const bar of lawToBars(hint.conditional_law)) {
    const row = document.createElement("div");
    row.className = "bar-row";
    const fill = document.createElement("div");
    fill.className = "bar-fill" + (bar.label === hint.optimal_guess ? " best" : "");
    fill.style.width = `${Math.max(1, 100 * bar.prob)}%`;
    const text = document.createElement("span");
    text.textContent = `${bar.label}: ${formatPercent(bar.prob)}`;
    row.append(fill, text);
    overlay.appendChild(row);
  }
}

async function withBusy(action: () => Promise<void>): Promise<void> {
  if (busy) return;
  busy = true;
  setError("");
  try {
    await action();
  } catch (err) {
    setError(err instanceof ApiError ? `${err.code}: ${err.message}` : String(err));
  } finally {
    busy = false;
    render();
  }
}

async function guess(label: number): Promise<void> {
  await withBusy(async () => {
    if (!session) return;
    const result = await api.submitGuess(session.sessionId, label);
    session = applyGuess(session, label, result);
    $("hint-panel").replaceChildren();
  });
}

async function startGame(): Promise<void> {
  await withBusy(async () => {
    api = new GameApi(($("base-url") as HTMLInputElement).value || "http://127.0.0.1:8000");
    const n = Number(($("deck-size") as HTMLInputElement).value);
    const p = ($("bias") as HTMLInputElement).value || "1/2";
    const seedRaw = ($("seed") as HTMLInputElement).value;
    if (!Number.isInteger(n) || n < 1) {
      throw new Error("deck size must be a positive integer");
    }
    const created = await api.createSession({
      n,
      p,
      ...(seedRaw ? { seed: Number(seedRaw) } : {}),
    });
    session = newSession(created.session_id, created.n, created.p);
    $("hint-panel").replaceChildren();
  });
}

async function showHint(): Promise<void> {
  await withBusy(async () => {
    if (!session || session.status !== "active") return;
    renderHint(await api.hint(session.sessionId));
  });
}

export function init(): void {
  $("new-game").addEventListener("click", () => void startGame());
  $("show-hint").addEventListener("click", () => void showHint());
  render();
}

if (typeof document !== "undefined" && document.getElementById("new-game")) {
  init();
}
