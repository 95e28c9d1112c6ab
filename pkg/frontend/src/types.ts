// Payload shapes of the game-server JSON API.

export type Classification = "lucky" | "certified" | "incorrect";

export interface Totals {
  total: number;
  lucky: number;
  certified: number;
}

export interface SessionCreated {
  session_id: string;
  n: number;
  p: string | number;
}

export interface HistoryEntry {
  guess: number;
  shown: number;
  classification: Classification;
}

export interface SessionView {
  session_id: string;
  n: number;
  p: string | number;
  status: "active" | "finished";
  history: HistoryEntry[];
  totals: Totals;
  remaining_count: number;
  remaining_labels: number[];
  deck?: number[];
}

export interface GuessResult {
  shown: number;
  correct: boolean;
  classification: Classification;
  totals: Totals;
  remaining_count: number;
  status: "active" | "finished";
  deck?: number[];
}

/** Conditional law entries: [label, probability as "a/b" or number]. */
export type LawEntry = [number, string | number];

export interface Hint {
  optimal_guess: number;
  conditional_law: LawEntry[];
  certified: boolean;
}

export interface ApiErrorBody {
  error: string;
  message: string;
}
