"""Tests for deck construction, the position matrix and the first-card law."""

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shelfshuffle import (
    deck_from_placements,
    first_card_law,
    placements_from_deck,
    position_matrix,
    shelf_shuffle,
)

HALF = Fraction(1, 2)


class TestDeckFromPlacements:
    def test_hand_simulated_examples(self):
        assert deck_from_placements(3, [True, True]) == (1, 2, 3)
        assert deck_from_placements(3, [True, False]) == (2, 3, 1)
        assert deck_from_placements(4, [True, False, True]) == (1, 3, 4, 2)

    def test_singleton(self):
        assert deck_from_placements(1, []) == (1,)

    def test_all_top_gives_identity(self):
        for n in (2, 5, 9):
            assert deck_from_placements(n, [True] * (n - 1)) == tuple(range(1, n + 1))

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            deck_from_placements(4, [True, False])

    @pytest.mark.parametrize("n", range(1, 11))
    def test_injective_and_structured(self, n):
        seen = set()
        for flips in itertools.product((True, False), repeat=n - 1):
            deck = deck_from_placements(n, flips)
            assert deck not in seen
            seen.add(deck)
            # increasing prefix, then n, then decreasing suffix
            anchor = deck.index(n)
            prefix, suffix = deck[:anchor], deck[anchor + 1:]
            assert list(prefix) == sorted(prefix)
            assert list(suffix) == sorted(suffix, reverse=True)
            assert placements_from_deck(deck) == flips
        assert len(seen) == 2 ** (n - 1)

    def test_unreachable_deck_rejected(self):
        with pytest.raises(ValueError):
            placements_from_deck((2, 1, 3))  # 3 must be between the runs
        with pytest.raises(ValueError):
            placements_from_deck((1, 1, 3))


class TestShelfShuffle:
    def test_same_seed_same_deck(self):
        a = shelf_shuffle(20, HALF, random.Random(42))
        b = shelf_shuffle(20, HALF, random.Random(42))
        assert a == b

    def test_two_card_decks(self):
        decks = {shelf_shuffle(2, HALF, random.Random(seed)) for seed in range(50)}
        assert decks == {(1, 2), (2, 1)}

    def test_p_one_is_identity(self):
        assert shelf_shuffle(6, Fraction(1), random.Random(0)) == (1, 2, 3, 4, 5, 6)

    def test_invalid_p(self):
        with pytest.raises(ValueError):
            shelf_shuffle(3, Fraction(0), random.Random(0))
        with pytest.raises(ValueError):
            shelf_shuffle(3, 1.5, random.Random(0))


class TestPositionMatrix:
    def test_card_two_row_balanced(self):
        m = position_matrix(3, HALF)
        assert m[1] == [Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)]

    def test_first_row_biased(self):
        m = position_matrix(2, Fraction(3, 10))
        assert m[0] == [Fraction(3, 10), Fraction(7, 10)]

    @pytest.mark.parametrize("p", [HALF, Fraction(3, 10), Fraction(3, 4), Fraction(9, 10)])
    @pytest.mark.parametrize("n", [1, 2, 3, 7, 16, 33])
    def test_doubly_stochastic(self, n, p):
        m = position_matrix(n, p)
        for row in m:
            assert sum(row) == 1
        for j in range(n):
            assert sum(m[i][j] for i in range(n)) == 1

    @pytest.mark.parametrize("n", [2, 3, 6, 11])
    def test_zero_pattern(self, n):
        m = position_matrix(n, Fraction(3, 10))
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                inside = i + 1 <= j <= n - i
                assert (m[i - 1][j - 1] == 0) == inside

    @pytest.mark.parametrize("n", [2, 3, 8, 15])
    def test_mirror_symmetry_balanced_only(self, n):
        m = position_matrix(n, HALF)
        for i in range(n):
            for j in range(n):
                assert m[i][n - 1 - j] == m[i][j]
        biased = position_matrix(n, Fraction(3, 10))
        assert any(
            biased[i][n - 1 - j] != biased[i][j] for i in range(n) for j in range(n)
        )

    @pytest.mark.parametrize("p", [HALF, Fraction(3, 10)])
    @pytest.mark.parametrize("n", [1, 2, 5, 12])
    def test_first_column_is_first_card_law(self, n, p):
        m = position_matrix(n, p)
        assert [m[i][0] for i in range(n)] == first_card_law(n, p)


class TestFirstCardLaw:
    def test_balanced_three_cards(self):
        assert first_card_law(3, HALF) == [HALF, Fraction(1, 4), Fraction(1, 4)]

    def test_biased_four_cards(self):
        law = first_card_law(4, Fraction(3, 10))
        assert law == [
            Fraction(3, 10),
            Fraction(21, 100),
            Fraction(147, 1000),
            Fraction(343, 1000),
        ]
        assert sum(law) == 1

    def test_singleton(self):
        assert first_card_law(1, Fraction(3, 4)) == [Fraction(1)]

    @given(
        n=st.integers(1, 40),
        p=st.fractions(min_value=Fraction(1, 100), max_value=1),
    )
    @settings(max_examples=60, deadline=None)
    def test_normalized_for_any_bias(self, n, p):
        law = first_card_law(n, p)
        assert sum(law) == 1
        assert all(v >= 0 for v in law)
