"""Optimal guessing strategy under full feedback, with luck/certified bookkeeping.

Play proceeds against the deck structure left by one shelf shuffle: while no
label >= n-1 has been revealed, the revealed cards form an increasing run and
the live instance is the label suffix {s+1..n} (s = largest label shown).
Guessing s+1 is optimal whenever top placements are likely (p >= 1/2); when
they are rare (p < 1/2) the largest remaining label is the better guess for
small instances, up to the threshold returned by high_guess_threshold.  Once
a label >= n-1 appears the rest of the deck is the known decreasing tail and
every remaining guess is certain.

A correct guess is "certified" when its success probability was exactly one
at guess time (descending phase, or a single card left) and "lucky"
otherwise.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

from .params import Prob, validate_deck_size, validate_probability
from .shuffle import Deck

# Exact-comparison window size around the float estimate of the threshold.
_THRESHOLD_CERTIFY_CAP = 10**6


class GuessClassification(str, enum.Enum):
    INCORRECT = "incorrect"
    LUCKY = "lucky"
    CERTIFIED = "certified"


def high_guess_threshold(p: Prob) -> int:
    """Largest instance size m with (1-p)^(m-1) >= p, for 0 < p < 1/2.

    Below or at this size the optimal first guess in a live instance is its
    largest label; above it, the smallest.  Computed by exact rational
    comparison (floats are converted to the exact binary rational they
    denote), seeded by a float logarithm estimate so only O(1) big-integer
    powers are evaluated.
    """
    validate_probability(p)
    pf = Fraction(p)
    if pf >= Fraction(1, 2):
        raise ValueError("the high-guess threshold only applies for p < 1/2")
    q = 1 - pf
    estimate = int(math.log(float(pf)) / math.log(float(q)))
    if estimate > _THRESHOLD_CERTIFY_CAP:
        raise ValueError(f"threshold near {estimate} is too large to certify exactly")
    k = max(1, estimate - 2)
    while q**k < pf:  # only if the float estimate overshot
        k -= 1
    while q ** (k + 1) >= pf:
        k += 1
    return k + 1


def _prefers_high_guess(p: Prob, m: int, tie_break: str) -> bool:
    """Whether the optimal guess in a live instance of size m is its largest label.

    Compares the two candidate hit probabilities p (smallest label) and
    (1-p)^(m-1) (largest label) exactly.  Ties are possible only for special
    algebraic p (and for p = 1/2 at m = 2) and are settled by ``tie_break``.
    """
    pf = Fraction(p)
    high = (1 - pf) ** (m - 1)
    if high == pf:
        return tie_break == "high"
    return high > pf


@dataclass(frozen=True)
class GuesserState:
    """Knowledge available to the guesser: immutable, one reveal per transition."""

    n: int
    p: Prob
    unseen: frozenset[int]
    last_shown: int | None = None
    descending: bool = False
    offset: int = 0  # largest shown label; live instance is {offset+1..n}
    tie_break: str = "low"


def initial_state(n: int, p: Prob, tie_break: str = "low") -> GuesserState:
    validate_deck_size(n)
    validate_probability(p)
    if tie_break not in ("low", "high"):
        raise ValueError(f"tie_break must be 'low' or 'high', got {tie_break!r}")
    return GuesserState(n=n, p=p, unseen=frozenset(range(1, n + 1)), tie_break=tie_break)


def next_guess(state: GuesserState) -> int:
    """Optimal guess for the current state."""
    if not state.unseen:
        raise ValueError("no cards remain to guess")
    if state.descending or len(state.unseen) == 1:
        return max(state.unseen)
    m = state.n - state.offset
    if _prefers_high_guess(state.p, m, state.tie_break):
        return state.n
    return state.offset + 1


def observe(state: GuesserState, shown: int, guess: int) -> tuple[GuesserState, GuessClassification]:
    """Record a revealed card and classify the guess made before the reveal."""
    if shown not in state.unseen:
        raise ValueError(f"card {shown} has already been shown or is out of range")
    if guess == shown:
        certain = state.descending or len(state.unseen) == 1
        cls = GuessClassification.CERTIFIED if certain else GuessClassification.LUCKY
    else:
        cls = GuessClassification.INCORRECT
    new_state = replace(
        state,
        unseen=state.unseen - {shown},
        last_shown=shown,
        descending=state.descending or shown >= state.n - 1,
        offset=max(state.offset, shown),
    )
    return new_state, cls


@dataclass(frozen=True)
class GameRecord:
    """Full trace of one game played with the optimal strategy."""

    deck: Deck
    p: Prob
    guesses: tuple[int, ...]
    shown: tuple[int, ...]
    classifications: tuple[GuessClassification, ...]
    total_correct: int
    lucky: int
    certified: int

    @property
    def n(self) -> int:
        return len(self.deck)

    def to_json_dict(self) -> dict:
        from .params import format_probability

        return {
            "n": self.n,
            "p": format_probability(self.p),
            "deck": list(self.deck),
            "guesses": list(self.guesses),
            "shown": list(self.shown),
            "classifications": [c.value for c in self.classifications],
            "totals": {
                "total": self.total_correct,
                "lucky": self.lucky,
                "certified": self.certified,
            },
        }


def play_game(deck: Sequence[int], p: Prob, tie_break: str = "low") -> GameRecord:
    """Play one full game against ``deck`` with the optimal strategy."""
    n = len(deck)
    state = initial_state(n, p, tie_break)
    guesses: list[int] = []
    classifications: list[GuessClassification] = []
    for shown in deck:
        guess = next_guess(state)
        state, cls = observe(state, shown, guess)
        guesses.append(guess)
        classifications.append(cls)
    lucky = sum(1 for c in classifications if c is GuessClassification.LUCKY)
    certified = sum(1 for c in classifications if c is GuessClassification.CERTIFIED)
    return GameRecord(
        deck=tuple(deck),
        p=p,
        guesses=tuple(guesses),
        shown=tuple(deck),
        classifications=tuple(classifications),
        total_correct=lucky + certified,
        lucky=lucky,
        certified=certified,
    )
