"""Independent ground truth by exhaustive enumeration of all placement sequences.

For small n every one of the 2^(n-1) flip sequences is generated, the game is
played with the strategy module, and laws are accumulated with exact weights
p^(#top) (1-p)^(#bottom).  The probability computation is therefore fully
independent of the dynamic program and the generating functions it validates;
only the strategy itself is shared, which is the object under test elsewhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .params import Prob, format_probability, format_value, validate_deck_size, validate_probability
from .shuffle import deck_from_placements
from .strategy import initial_state, next_guess, observe, play_game

ENUMERATION_CAP = 20  # 2^19 sequences; override explicitly if you mean it


@dataclass
class EnumerationResult:
    """Exact laws produced by weighting every placement sequence."""

    n: int
    p: Prob
    sequences: int
    weight_total: Prob
    total_law: dict[int, Prob]
    joint_law: dict[tuple[int, int], Prob]
    position_matrix: list[list[Prob]]
    first_card: list[Prob]

    def mean_total(self) -> Prob:
        return sum(k * v for k, v in self.total_law.items())

    def mean_lucky(self) -> Prob:
        return sum(l * v for (l, _), v in self.joint_law.items())

    def mean_certified(self) -> Prob:
        return sum(c * v for (_, c), v in self.joint_law.items())


def _weight_factors(p: Prob) -> tuple[Prob, Prob]:
    if isinstance(p, Fraction):
        return p, 1 - p
    return float(p), 1.0 - float(p)


def iter_weighted_games(n: int, p: Prob, tie_break: str = "low"):
    """Yield (flips, weight, deck, game record) over all 2^(n-1) sequences."""
    top_w, bot_w = _weight_factors(p)
    zero = top_w * 0
    top_pow = [zero + 1]
    bot_pow = [zero + 1]
    for _ in range(n - 1):
        top_pow.append(top_pow[-1] * top_w)
        bot_pow.append(bot_pow[-1] * bot_w)
    for flips in itertools.product((True, False), repeat=n - 1):
        tops = sum(flips)
        weight = top_pow[tops] * bot_pow[n - 1 - tops]
        deck = deck_from_placements(n, flips)
        yield flips, weight, deck, play_game(deck, p, tie_break)


def enumerate_all(
    n: int, p: Prob, max_n: int = ENUMERATION_CAP, tie_break: str = "low"
) -> EnumerationResult:
    """Exact laws of (score, lucky, certified), position matrix and first-card
    law by weighted enumeration of every placement sequence."""
    validate_deck_size(n)
    validate_probability(p)
    if n > max_n:
        raise ValueError(
            f"enumeration over 2^{n - 1} sequences exceeds the cap {max_n}; "
            "raise max_n explicitly if that is intended"
        )
    zero = (Fraction(0) if isinstance(p, Fraction) else 0.0)
    total_law: dict[int, Prob] = {}
    joint_law: dict[tuple[int, int], Prob] = {}
    matrix = [[zero for _ in range(n)] for _ in range(n)]
    weight_total = zero
    count = 0
    for _, weight, deck, record in iter_weighted_games(n, p, tie_break):
        count += 1
        weight_total += weight
        key = record.total_correct
        total_law[key] = total_law.get(key, zero) + weight
        jkey = (record.lucky, record.certified)
        joint_law[jkey] = joint_law.get(jkey, zero) + weight
        for pos, card in enumerate(deck):
            matrix[card - 1][pos] += weight
    first_card = [matrix[i][0] for i in range(n)]
    return EnumerationResult(
        n=n,
        p=p,
        sequences=count,
        weight_total=weight_total,
        total_law=total_law,
        joint_law=joint_law,
        position_matrix=matrix,
        first_card=first_card,
    )


# ---------------------------------------------------------------------------
# Conditional next-card law


def _validate_prefix(n: int, prefix: tuple[int, ...]) -> None:
    if len(set(prefix)) != len(prefix) or any(not 1 <= c <= n for c in prefix):
        raise ValueError("prefix must consist of distinct labels in 1..n")


def conditional_next_card_closed(n: int, p: Prob, prefix: tuple[int, ...] | list[int]) -> dict[int, Prob]:
    """Closed-form posterior of the next revealed card given a revealed prefix.

    While no label >= n-1 has shown, the next card is the successor run
    distribution of the live instance: P{c} = p(1-p)^(c-s-1) for s < c < n and
    the leftover (1-p)^(n-1-s) on n, where s is the largest label shown.  Once
    a label >= n-1 has shown, the rest of the deck is the descending tail and
    the next card is the largest unseen label with probability one.
    """
    validate_deck_size(n)
    validate_probability(p)
    prefix = tuple(prefix)
    _validate_prefix(n, prefix)
    if len(prefix) >= n:
        raise ValueError("no cards remain after the prefix")
    one = Fraction(1) if isinstance(p, Fraction) else 1.0
    q = one - p

    descended_at = next((i for i, c in enumerate(prefix) if c >= n - 1), None)
    if descended_at is None:
        if list(prefix) != sorted(prefix):
            raise ValueError("prefix is not reachable by any placement sequence")
        s = prefix[-1] if prefix else 0
        law: dict[int, Prob] = {c: p * q ** (c - s - 1) for c in range(s + 1, n)}
        law[n] = one * q ** (n - 1 - s)
        return law
    head, tail = prefix[: descended_at + 1], prefix[descended_at + 1:]
    if list(head[:-1]) != sorted(head[:-1]):
        raise ValueError("prefix is not reachable by any placement sequence")
    # After the trigger the deck is deterministic: n (if unseen) then the
    # unseen labels in decreasing order.
    expected = iter_descending_tail(n, head)
    for seen, want in zip(tail, expected):
        if seen != want:
            raise ValueError("prefix is not reachable by any placement sequence")
    remaining = [c for c in range(1, n + 1) if c not in set(prefix)]
    return {max(remaining): one}


def iter_descending_tail(n: int, shown_head: tuple[int, ...]):
    seen = set(shown_head)
    remaining = sorted((c for c in range(1, n + 1) if c not in seen), reverse=True)
    return remaining


def conditional_next_card_enumerated(
    n: int, p: Prob, prefix: tuple[int, ...] | list[int], max_n: int = ENUMERATION_CAP
) -> dict[int, Prob]:
    """Posterior of the next card by filtering all consistent placement sequences."""
    validate_deck_size(n)
    validate_probability(p)
    prefix = tuple(prefix)
    _validate_prefix(n, prefix)
    if len(prefix) >= n:
        raise ValueError("no cards remain after the prefix")
    if n > max_n:
        raise ValueError(f"enumeration for n={n} exceeds the cap {max_n}")
    k = len(prefix)
    zero = (Fraction(0) if isinstance(p, Fraction) else 0.0)
    mass: dict[int, Prob] = {}
    total = zero
    top_w, bot_w = _weight_factors(p)
    for flips in itertools.product((True, False), repeat=n - 1):
        deck = deck_from_placements(n, flips)
        if deck[:k] != prefix:
            continue
        tops = sum(flips)
        weight = top_w**tops * bot_w ** (n - 1 - tops)
        total += weight
        nxt = deck[k]
        mass[nxt] = mass.get(nxt, zero) + weight
    if not mass or total == 0:
        raise ValueError("prefix is not reachable by any placement sequence")
    return {c: w / total for c, w in mass.items()}


def conditional_next_card(
    n: int, p: Prob, prefix: tuple[int, ...] | list[int], method: str = "closed"
) -> dict[int, Prob]:
    """Posterior law of the next revealed card given a prefix.

    method "closed" (any n), "enumerate" (small n), or "both" (assert the two
    agree, then return the closed form).
    """
    if method == "closed":
        return conditional_next_card_closed(n, p, prefix)
    if method == "enumerate":
        return conditional_next_card_enumerated(n, p, prefix)
    if method == "both":
        closed = conditional_next_card_closed(n, p, prefix)
        enumerated = conditional_next_card_enumerated(n, p, prefix)
        if isinstance(p, Fraction):
            agree = closed == enumerated
        else:
            agree = set(closed) == set(enumerated) and all(
                abs(closed[c] - enumerated[c]) < 1e-12 for c in closed
            )
        if not agree:
            raise AssertionError(
                f"closed form and enumeration disagree for n={n}, p={p}, prefix={prefix}"
            )
        return closed
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Strategy optimality certificate


@dataclass
class OptimalityReport:
    """Outcome of checking the strategy against the stepwise-argmax criterion.

    With full feedback the revealed card never depends on the guess, so the
    expected score of any strategy is the sum over reachable prefixes of the
    probability that its guess matches the next card; maximizing every term
    separately is achievable and hence globally optimal in expectation.
    """

    n: int
    p: Prob
    prefixes_checked: int
    tol: float = 0.0
    failures: list[tuple[tuple[int, ...], int]] = field(default_factory=list)
    ties: list[tuple[int, ...]] = field(default_factory=list)
    strategy_score: Prob = 0
    stepwise_max_score: Prob = 0

    @property
    def passed(self) -> bool:
        if self.failures:
            return False
        if isinstance(self.p, Fraction):
            return self.strategy_score == self.stepwise_max_score
        return abs(self.strategy_score - self.stepwise_max_score) <= self.tol * self.n

    def lines(self) -> list[str]:
        out = [
            f"optimality check: n={self.n} p={format_probability(self.p)}",
            f"reachable prefixes checked: {self.prefixes_checked}",
            f"strategy expected score:    {format_value(self.strategy_score)}",
            f"stepwise maxima sum:        {format_value(self.stepwise_max_score)}",
            f"prefixes with tied optima:  {len(self.ties)}",
        ]
        for prefix, guess in self.failures:
            out.append(f"FAIL: guess {guess} not an argmax after prefix {prefix}")
        out.append("PASS" if self.passed else "FAIL")
        return out

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "p": format_probability(self.p),
            "prefixes_checked": self.prefixes_checked,
            "failures": [[list(pref), guess] for pref, guess in self.failures],
            "ties": [list(t) for t in self.ties],
            "strategy_score": format_value(self.strategy_score),
            "stepwise_max_score": format_value(self.stepwise_max_score),
            "passed": self.passed,
        }


def verify_strategy_optimality(
    n: int, p: Prob, tie_break: str = "low", tol: float | None = None
) -> OptimalityReport:
    """Check that next_guess attains the argmax of the conditional next-card
    law after every reachable prefix, and that the strategy's expected score
    equals the sum of stepwise maxima."""
    validate_deck_size(n)
    validate_probability(p)
    if n > 9:
        raise ValueError("optimality verification is limited to n <= 9")
    if tol is None:
        tol = 0.0 if isinstance(p, Fraction) else 1e-9

    # Prefix tree of reachable histories with exact transition weights.
    children: dict[tuple[int, ...], dict[int, Prob]] = {}
    zero = (Fraction(0) if isinstance(p, Fraction) else 0.0)
    for _, weight, deck, _ in iter_weighted_games(n, p, tie_break):
        for k in range(n):
            node = children.setdefault(deck[:k], {})
            node[deck[k]] = node.get(deck[k], zero) + weight

    report = OptimalityReport(
        n=n, p=p, prefixes_checked=0, tol=tol, strategy_score=zero, stepwise_max_score=zero
    )
    for prefix in sorted(children, key=lambda t: (len(t), t)):
        node = children[prefix]
        node_weight = sum(node.values())
        best = max(node.values())
        state = initial_state(n, p, tie_break)
        for shown in prefix:
            state, _ = observe(state, shown, 0)
        guess = next_guess(state)
        hit = node.get(guess, zero)
        report.prefixes_checked += 1
        # Compare at conditional-probability scale.
        if best - hit > tol * node_weight:
            report.failures.append((prefix, guess))
        if sum(1 for w in node.values() if best - w <= tol * node_weight) > 1:
            report.ties.append(prefix)
        report.strategy_score += hit
        report.stepwise_max_score += best
    return report
