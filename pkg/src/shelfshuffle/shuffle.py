"""Single-shelf shuffle: deck generation, exact position matrix, first-card law.

Model: an ordered deck of n cards labelled 1..n is processed from the bottom.
Card n starts the pile; each card n-1 down to 1 is then dropped on TOP of the
pile with probability p or slid UNDERNEATH with probability 1-p.  Position 1
is the top of the final pile and is the first card drawn in the guessing game.

The n-1 top/bottom flips fully determine the deck, so the sample space has
2^(n-1) equally structured outcomes with weight p^(#top) * (1-p)^(#bottom).
Every reachable deck reads, top to bottom: a strictly increasing run of
top-placed labels, then n, then a strictly decreasing run of bottom-placed
labels.
"""

from __future__ import annotations

import random
from collections import deque
from fractions import Fraction
from math import comb
from typing import Sequence

from .params import Prob, validate_deck_size, validate_probability

Deck = tuple[int, ...]


def deck_from_placements(n: int, flips: Sequence[bool]) -> Deck:
    """Build the shuffled deck from the n-1 top/bottom flips.

    ``flips[k]`` belongs to card n-1-k (cards are processed in order n-1
    down to 1); True places the card on top of the pile.  Card n starts the
    pile and carries no flip.  The map flips -> deck is injective.
    """
    validate_deck_size(n)
    if len(flips) != n - 1:
        raise ValueError(f"expected {n - 1} placement flips for n={n}, got {len(flips)}")
    pile: deque[int] = deque([n])
    for card, on_top in zip(range(n - 1, 0, -1), flips):
        if on_top:
            pile.appendleft(card)
        else:
            pile.append(card)
    return tuple(pile)


def placements_from_deck(deck: Sequence[int]) -> tuple[bool, ...]:
    """Recover the flips that produced ``deck`` (inverse of deck_from_placements).

    Raises ValueError if ``deck`` is not a permutation reachable by a single
    shelf shuffle (increasing prefix, n, decreasing suffix).
    """
    n = len(deck)
    validate_deck_size(n)
    if sorted(deck) != list(range(1, n + 1)):
        raise ValueError("deck is not a permutation of 1..n")
    anchor = deck.index(n)
    prefix, suffix = deck[:anchor], deck[anchor + 1:]
    if list(prefix) != sorted(prefix) or list(suffix) != sorted(suffix, reverse=True):
        raise ValueError("deck is not reachable by a single shelf shuffle")
    top = set(prefix)
    return tuple(card in top for card in range(n - 1, 0, -1))


def shelf_shuffle(n: int, p: Prob, rng: random.Random) -> Deck:
    """Shuffle a fresh deck once: n-1 independent flips, each top with probability p."""
    validate_deck_size(n)
    validate_probability(p)
    flips = [rng.random() < p for _ in range(n - 1)]
    return deck_from_placements(n, flips)


def position_matrix(n: int, p: Prob) -> list[list[Prob]]:
    """Probability matrix m[i-1][j-1] = P{card i ends at position j}.

    Exact rationals when p is a Fraction.  The matrix is doubly stochastic;
    entries vanish exactly on i+1 <= j <= n-i.  Row i < n is the sum of a
    top-placement term (card i on top, then j-1 of the i-1 later cards above
    it) and a bottom-placement term (card i underneath, then n-j of the i-1
    later cards below it); row n has no flip of its own.
    """
    validate_deck_size(n)
    validate_probability(p)
    one = Fraction(1) if isinstance(p, Fraction) else 1.0
    q = one - p
    rows: list[list[Prob]] = []
    for i in range(1, n):
        row: list[Prob] = []
        for j in range(1, n + 1):
            entry = one * 0
            if j <= i:
                entry += comb(i - 1, j - 1) * p**j * q ** (i - j)
            if n - j <= i - 1:
                entry += comb(i - 1, n - j) * p ** (i - 1 - (n - j)) * q ** (n - j + 1)
            row.append(entry)
        rows.append(row)
    rows.append([comb(n - 1, j - 1) * p ** (j - 1) * q ** (n - j) for j in range(1, n + 1)])
    return rows


def first_card_law(n: int, p: Prob) -> list[Prob]:
    """Law of the first drawn card: P{label i} = p(1-p)^(i-1), with the
    leftover mass (1-p)^(n-1) on label n.  Equals column 1 of position_matrix."""
    validate_deck_size(n)
    validate_probability(p)
    one = Fraction(1) if isinstance(p, Fraction) else 1.0
    q = one - p
    probs = [p * q ** (i - 1) for i in range(1, n)]
    probs.append(one * q ** (n - 1))
    return probs
