"""Tests for the guessing strategy, classification and threshold logic."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shelfshuffle import (
    GuessClassification,
    deck_from_placements,
    high_guess_threshold,
    initial_state,
    next_guess,
    observe,
    play_game,
)
from shelfshuffle.oracle import conditional_next_card_closed

HALF = Fraction(1, 2)

# Root of p = (1-p)^3: at four cards the low and high first guesses tie.
P_STAR = 0.31767219617198067


def play_totals(deck, p=HALF, **kw):
    rec = play_game(deck, p, **kw)
    return rec.total_correct, rec.lucky, rec.certified


class TestHighGuessThreshold:
    def test_exact_examples(self):
        assert high_guess_threshold(Fraction(1, 5)) == 8
        assert high_guess_threshold(Fraction(3, 10)) == 4

    def test_threshold_characterizes_comparison(self):
        for p in (Fraction(1, 5), Fraction(3, 10), Fraction(2, 5)):
            nu = high_guess_threshold(p)
            assert (1 - p) ** (nu - 1) >= p > (1 - p) ** nu

    def test_float_input(self):
        assert high_guess_threshold(0.2) == 8
        assert high_guess_threshold(0.3) == 4

    def test_rejected_at_half_and_above(self):
        for p in (HALF, Fraction(3, 4), 0.9):
            with pytest.raises(ValueError):
                high_guess_threshold(p)

    def test_near_tie_root(self):
        # p* solves p = (1-p)^3, so instances of size 4 are (numerically) tied.
        assert high_guess_threshold(P_STAR) in (3, 4)


class TestNextGuess:
    def test_published_twenty_card_script(self):
        shown = [1, 2, 5, 10, 11, 19]
        state = initial_state(20, HALF)
        guesses = []
        for card in shown:
            guesses.append(next_guess(state))
            state, _ = observe(state, card, guesses[-1])
        assert guesses == [1, 2, 3, 6, 11, 12]
        # descending from here: 20, 18, 17, ...
        assert next_guess(state) == 20

    def test_biased_first_guess_is_high(self):
        state = initial_state(4, Fraction(3, 10))
        assert next_guess(state) == 4

    def test_single_remaining_card(self):
        state = initial_state(2, HALF)
        state, _ = observe(state, 2, 1)
        assert next_guess(state) == 1

    def test_tie_break_flag_at_balanced_two_cards(self):
        low = initial_state(2, HALF, tie_break="low")
        high = initial_state(2, HALF, tie_break="high")
        assert next_guess(low) == 1
        assert next_guess(high) == 2

    def test_exhausted_state_rejected(self):
        state = initial_state(1, HALF)
        state, _ = observe(state, 1, 1)
        with pytest.raises(ValueError):
            next_guess(state)


class TestObserve:
    def test_repeat_reveal_rejected(self):
        state = initial_state(3, HALF)
        state, _ = observe(state, 2, 1)
        with pytest.raises(ValueError):
            observe(state, 2, 1)

    def test_descending_mode_is_monotone(self):
        state = initial_state(5, HALF)
        state, _ = observe(state, 4, 1)
        assert state.descending
        state, _ = observe(state, 5, 5)
        assert state.descending


class TestPlayGame:
    def test_hand_played_games(self):
        assert play_totals((2, 3, 1)) == (2, 0, 2)
        assert play_totals((1, 2)) == (2, 1, 1)
        assert play_totals((1, 2, 3, 4)) == (4, 3, 1)
        assert play_totals((4, 3, 2, 1)) == (3, 0, 3)

    def test_perfect_decks_score_n(self):
        for n in (1, 2, 7, 30):
            # successor strategy: the identity deck is the perfect game
            for p in (HALF, Fraction(4, 5), Fraction(1)):
                rec = play_game(tuple(range(1, n + 1)), p)
                assert rec.total_correct == n
            # high-guess regime: the reversed deck is the perfect game instead
            rec = play_game(tuple(range(min(n, 4), 0, -1)), Fraction(3, 10))
            assert rec.total_correct == min(n, 4)

    def test_published_twenty_card_game(self):
        top = {1, 2, 5, 10, 11, 19}
        deck = deck_from_placements(20, [c in top for c in range(19, 0, -1)])
        rec = play_game(deck, HALF)
        assert rec.guesses[:6] == (1, 2, 3, 6, 11, 12)
        assert rec.guesses[6:] == (20, 18, 17, 16, 15, 14, 13, 12, 9, 8, 7, 6, 4, 3)
        assert (rec.total_correct, rec.lucky, rec.certified) == (17, 3, 14)

    @pytest.mark.parametrize("n", range(1, 13))
    def test_exhaustive_invariants(self, n):
        identity = tuple(range(1, n + 1))
        for flips in itertools.product((True, False), repeat=n - 1):
            deck = deck_from_placements(n, flips)
            rec = play_game(deck, HALF)
            assert rec.total_correct == rec.lucky + rec.certified
            assert rec.total_correct == sum(g == s for g, s in zip(rec.guesses, rec.shown))
            # perfect play happens exactly on the identity deck
            assert (rec.total_correct == n) == (deck == identity)

    @pytest.mark.parametrize("n", range(2, 11))
    def test_descending_guesses_always_hit(self, n):
        for flips in itertools.product((True, False), repeat=n - 1):
            deck = deck_from_placements(n, flips)
            state = initial_state(n, HALF)
            for shown in deck:
                guess = next_guess(state)
                was_descending = state.descending
                state, cls = observe(state, shown, guess)
                if was_descending:
                    assert cls is GuessClassification.CERTIFIED

    @pytest.mark.parametrize("p", [HALF, Fraction(3, 10)])
    @pytest.mark.parametrize("n", range(1, 9))
    def test_certified_iff_conditional_probability_one(self, n, p):
        for flips in itertools.product((True, False), repeat=n - 1):
            deck = deck_from_placements(n, flips)
            state = initial_state(n, p)
            for k, shown in enumerate(deck):
                guess = next_guess(state)
                law = conditional_next_card_closed(n, p, deck[:k])
                state, cls = observe(state, shown, guess)
                if cls is GuessClassification.CERTIFIED:
                    assert law[guess] == 1
                elif cls is GuessClassification.LUCKY:
                    assert law[guess] < 1

    @given(
        n=st.integers(1, 40),
        bits=st.integers(min_value=0),
        p=st.sampled_from([HALF, Fraction(3, 10), Fraction(4, 5)]),
    )
    @settings(max_examples=80, deadline=None)
    def test_random_decks_decompose(self, n, bits, p):
        flips = [bool((bits >> k) & 1) for k in range(n - 1)]
        rec = play_game(deck_from_placements(n, flips), p)
        assert rec.total_correct == rec.lucky + rec.certified
        assert 1 <= rec.total_correct <= n
        assert len(rec.guesses) == n
