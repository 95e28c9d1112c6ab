"""Exact distributions, optimal strategy and simulation for the single-shelf
card shuffle guessing game with full feedback."""

from ._version import __version__
from .exact import (
    JointPmf,
    MomentSummary,
    PhaseTransitionParams,
    Pmf,
    SeriesExpansion,
    binomial_regime_pmf,
    closed_form_moments,
    joint_pgf_series,
    joint_pgf_series_biased,
    joint_pmf,
    joint_pmf_range,
    perfect_score_probability,
    refined_closed_form_moments,
    total_pgf_series,
    total_pgf_series_symmetric,
    total_pmf,
    total_pmf_range,
)
from .montecarlo import SimConfig, SimSummary, clt_deviation, phase_transition_sweep, simulate
from .oracle import (
    EnumerationResult,
    OptimalityReport,
    conditional_next_card,
    enumerate_all,
    verify_strategy_optimality,
)
from .params import parse_probability
from .shuffle import (
    deck_from_placements,
    first_card_law,
    placements_from_deck,
    position_matrix,
    shelf_shuffle,
)
from .strategy import (
    GameRecord,
    GuessClassification,
    GuesserState,
    high_guess_threshold,
    initial_state,
    next_guess,
    observe,
    play_game,
)

__all__ = [
    "__version__",
    "GameRecord",
    "GuessClassification",
    "GuesserState",
    "JointPmf",
    "MomentSummary",
    "EnumerationResult",
    "OptimalityReport",
    "PhaseTransitionParams",
    "Pmf",
    "SeriesExpansion",
    "SimConfig",
    "SimSummary",
    "binomial_regime_pmf",
    "closed_form_moments",
    "clt_deviation",
    "conditional_next_card",
    "deck_from_placements",
    "enumerate_all",
    "first_card_law",
    "high_guess_threshold",
    "initial_state",
    "joint_pgf_series",
    "joint_pgf_series_biased",
    "joint_pmf",
    "joint_pmf_range",
    "next_guess",
    "observe",
    "parse_probability",
    "perfect_score_probability",
    "phase_transition_sweep",
    "placements_from_deck",
    "play_game",
    "position_matrix",
    "refined_closed_form_moments",
    "shelf_shuffle",
    "simulate",
    "total_pgf_series",
    "total_pgf_series_symmetric",
    "total_pmf",
    "total_pmf_range",
    "verify_strategy_optimality",
]
