"""Acceptance suite: one test per release criterion, each at its pinned
tolerance, printing one PASS line on success (run with -s to see them).

Exact criteria compare Fractions for equality; statistical criteria pin the
seed and the threshold.  The Poisson criterion is exploratory: its observed
value is printed even though the threshold is generous.
"""

import math
from fractions import Fraction

from shelfshuffle import (
    PhaseTransitionParams,
    SimConfig,
    binomial_regime_pmf,
    clt_deviation,
    enumerate_all,
    high_guess_threshold,
    joint_pmf_range,
    perfect_score_probability,
    position_matrix,
    refined_closed_form_moments,
    simulate,
    total_pmf,
    total_pmf_range,
    verify_strategy_optimality,
)
from shelfshuffle.exact import closed_form_moments, joint_pgf_series, total_pgf_series, total_pgf_series_symmetric
from shelfshuffle.montecarlo import poisson_tv
from shelfshuffle.oracle import conditional_next_card_closed

HALF = Fraction(1, 2)


def report(criterion: int, message: str) -> None:
    print(f"ACCEPTANCE {criterion:>2} PASS: {message}")


def test_criterion_1_exact_mean_and_variance():
    laws = total_pmf_range(300, HALF)
    assert laws[0].variance() == 0
    assert laws[1].variance() == Fraction(1, 4)
    for n in range(2, 301):
        assert laws[n - 1].mean() == Fraction(3 * n, 4)
    for n in range(3, 301):
        assert laws[n - 1].variance() == Fraction(n, 16)
    report(1, "mean = 3n/4 (n <= 300) and variance = n/16 (3 <= n <= 300) exactly")


def test_criterion_2_oracle_equivalence():
    biases = [HALF, Fraction(3, 10), Fraction(3, 4), Fraction(9, 10)]
    for p in biases:
        totals = total_pmf_range(14, p)
        joints = joint_pmf_range(14, p)
        for n in range(1, 15):
            res = enumerate_all(n, p)
            assert res.total_law == totals[n - 1].probs, (n, p)
            assert res.joint_law == joints[n - 1].probs, (n, p)
    report(2, "score and joint laws equal enumeration exactly, n <= 14, 4 biases")


def test_criterion_3_refined_moments():
    joints = joint_pmf_range(128, HALF)
    for n in range(2, 129):
        law = joints[n - 1]
        assert law.mean_lucky() == Fraction(n, 4)
        assert law.mean_certified() == Fraction(n, 2)
    for n in range(3, 129):
        law = joints[n - 1]
        ref = refined_closed_form_moments(n)
        assert law.var_lucky() == ref.var_lucky == Fraction(5 * n - 4, 16)
        assert law.var_certified() == ref.var_certified == Fraction(n - 2, 4)
        assert law.covariance() == ref.covariance == Fraction(3 - 2 * n, 8)
        assert (
            law.var_lucky() + law.var_certified() + 2 * law.covariance()
            == Fraction(n, 16)
        )
    # leading coefficients match the published linear terms
    for moments in (16, 32):
        a, b = joints[moments - 1], joints[2 * moments - 1]
        assert (b.var_lucky() - a.var_lucky()) / moments == Fraction(5, 16)
        assert (b.var_certified() - a.var_certified()) / moments == Fraction(1, 4)
        assert (b.covariance() - a.covariance()) / moments == Fraction(-1, 4)
    report(3, "split means n/4, n/2 and exact (5n-4)/16, (n-2)/4, (3-2n)/8 moments, n <= 128")


def test_criterion_4_position_matrix():
    grid = [Fraction(1, 10), Fraction(3, 10), HALF, Fraction(3, 4), Fraction(9, 10)]
    for p in grid:
        for n in range(1, 65):
            m = position_matrix(n, p)
            for row in m:
                assert sum(row) == 1
            for j in range(n):
                assert sum(m[i][j] for i in range(n)) == 1
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    inside = i + 1 <= j <= n - i
                    assert (m[i - 1][j - 1] == 0) == inside, (n, p, i, j)
    for n in range(1, 65):
        m = position_matrix(n, HALF)
        for i in range(n):
            for j in range(n):
                assert m[i][n - 1 - j] == m[i][j]
    for p in (HALF, Fraction(3, 10), Fraction(3, 4)):
        for n in range(1, 13):
            assert enumerate_all(n, p).position_matrix == position_matrix(n, p)
    report(4, "doubly stochastic, support and mirror checks (n <= 64); oracle equality (n <= 12)")


def test_criterion_5_generating_function_cross_check():
    for p in (HALF, Fraction(3, 4), Fraction(9, 10)):
        series = total_pgf_series(60, p)
        laws = total_pmf_range(60, p)
        for n in range(1, 61):
            assert series.pmf_dict(n) == laws[n - 1].probs, (n, p)
    symmetric = total_pgf_series_symmetric(60)
    balanced = total_pmf_range(60, HALF)
    for n in range(1, 61):
        assert symmetric.pmf_dict(n) == balanced[n - 1].probs
    trivariate = joint_pgf_series(40)
    joints = joint_pmf_range(40, HALF)
    for n in range(1, 41):
        assert trivariate.pmf_dict(n) == joints[n - 1].probs
    report(5, "series == DP: biased/balanced forms n <= 60, trivariate n <= 40")


def test_criterion_6_asymmetric_closed_moments():
    for p in (HALF, Fraction(3, 5), Fraction(3, 4), Fraction(9, 10)):
        laws = total_pmf_range(200, p)
        for n in range(3, 201):
            moments = closed_form_moments(n, p)
            assert laws[n - 1].mean() == moments.mean, (n, p)
            assert laws[n - 1].variance() == moments.variance, (n, p)
    report(6, "closed-form mean/variance equal DP moments exactly, 3 <= n <= 200, 4 biases")


def test_criterion_7_binomial_regime():
    for p, expected_threshold in ((Fraction(1, 5), 8), (Fraction(3, 10), 4)):
        threshold = high_guess_threshold(p)
        assert threshold == expected_threshold
        laws = total_pmf_range(threshold + 1, p)
        for n in range(1, threshold + 1):
            assert binomial_regime_pmf(n, p).probs == laws[n - 1].probs
        n = threshold + 1
        shifted_binomial = {
            1 + k: math.comb(n - 1, k) * (1 - p) ** k * p ** (n - 1 - k) for k in range(n)
        }
        assert laws[n - 1].probs != shifted_binomial
    report(7, "law is 1 + Binomial(n-1, 1-p) up to the threshold and differs just past it")


def test_criterion_8_identity_probability_and_phase_limit():
    for p in (HALF, Fraction(3, 4)):
        for n in range(1, 13):
            law = enumerate_all(n, p).total_law
            assert law.get(n, Fraction(0)) == perfect_score_probability(n, p) == p ** (n - 1)
    bias = PhaseTransitionParams(lam=1, alpha=1).bias_for(10**4)
    value = float(perfect_score_probability(10**4, bias))
    deviation = abs(value - math.exp(-1))
    assert deviation <= 1e-3
    report(8, f"P(score=n) = p^(n-1) (oracle, n <= 12); |p^(n-1) - e^-1| = {deviation:.2e} at n=10^4")


def test_criterion_9_central_limit():
    deviation = clt_deviation(4096, HALF)
    assert deviation <= 0.03
    report(9, f"normal sup-distance {deviation:.4f} <= 0.03 at n = 4096")


def test_criterion_10_poisson_regime():
    n = 5000
    law = total_pmf(n, 1.0 - 2.0 / n, backend="float")
    miss_law = {n - k: v for k, v in law.probs.items()}
    observed = poisson_tv(miss_law, 2.0)
    assert observed <= 0.02
    report(10, f"TV(miss law, Poisson(2)) = {observed:.2e} <= 0.02 at n = 5000 (exploratory)")


def test_criterion_11_monte_carlo_consistency():
    config = SimConfig(n=20, p=HALF, replications=100_000, seed=42)
    reference = total_pmf(20, HALF)
    summary = simulate(config, reference=reference)
    assert summary.tv_to_reference <= Fraction(1, 100)
    se_lucky = math.sqrt((5 * 20 - 4) / 16) / math.sqrt(config.replications)
    se_certified = math.sqrt((20 - 2) / 4) / math.sqrt(config.replications)
    assert abs(summary.mean_lucky - 5) <= 4 * se_lucky
    assert abs(summary.mean_certified - 10) <= 4 * se_certified
    rerun = simulate(config, reference=reference)
    assert summary.stat_fields() == rerun.stat_fields()
    report(
        11,
        f"TV = {float(summary.tv_to_reference):.4f} <= 0.01; split means within 4 SE; "
        "rerun bit-identical",
    )


def test_criterion_12_strategy_optimality():
    for p in (Fraction(3, 10), HALF, Fraction(3, 4)):
        for n in range(1, 10):
            result = verify_strategy_optimality(n, p)
            assert result.passed, (n, p, result.lines())
    # critical bias: root of p = (1-p)^3, solved to 1e-12 by bisection
    lo, hi = 0.25, 0.5
    while hi - lo > 1e-13:
        mid = (lo + hi) / 2
        if (1 - mid) ** 3 - mid > 0:
            lo = mid
        else:
            hi = mid
    p_star = (lo + hi) / 2
    assert abs(p_star - 0.31767) < 1e-4
    result = verify_strategy_optimality(4, p_star)
    assert result.passed
    assert () in result.ties
    root_law = conditional_next_card_closed(4, p_star, ())
    best = max(root_law.values())
    assert abs(root_law[1] - best) < 1e-9 and abs(root_law[4] - best) < 1e-9
    report(12, "stepwise argmax attained for n <= 9, 3 biases; tied root guesses at p*")
