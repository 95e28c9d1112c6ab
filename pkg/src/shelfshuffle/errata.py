"""Discrepancies between published closed forms for this shuffle and the
exhaustively verified ones, with machine-checkable evidence.

Each entry records the claim as published, the form this package adopts, and
a small computation a reviewer can rerun.  The enumeration oracle is the
adjudicator throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import exact, oracle, shuffle

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Erratum:
    key: str
    published: str
    adopted: str
    evidence: Callable[[], str]

    def to_json_dict(self) -> dict:
        return {
            "key": self.key,
            "published": self.published,
            "adopted": self.adopted,
            "evidence": self.evidence(),
        }


def _zero_pattern_evidence() -> str:
    m = shuffle.position_matrix(4, HALF)
    row1 = ", ".join(str(v) for v in m[0])
    return (
        f"n=4, p=1/2: row for card 1 is ({row1}); the (1,1) entry is 1/2, "
        "so entries cannot vanish on all of 1 <= j <= n-i.  Nonzero set is "
        "exactly j <= i or j >= n-i+1 (checked exhaustively for n <= 12)."
    )


def _mirror_evidence() -> str:
    m = shuffle.position_matrix(2, Fraction(3, 10))
    return (
        f"n=2, p=3/10: row for card 1 is ({m[0][0]}, {m[0][1]}); "
        "m[1][1] != m[1][2], so the mirror identity m[i][n-j+1] = m[i][j] "
        "holds only in the balanced case p = 1/2."
    )


def _gf_denominator_evidence() -> str:
    good = exact.total_pgf_series_symmetric(2).pmf_dict(2)
    law = exact.total_pmf(2, HALF).probs
    return (
        "with the z^2 denominator the series gives q_2 = "
        f"{ {k: str(v) for k, v in sorted(good.items())} } matching the exact law "
        f"{ {k: str(v) for k, v in sorted(law.items())} }; with the printed z^1 term "
        "the same recurrence gives q_2 = (2v + 3v^2 - v^3)/4, which is not a "
        "probability polynomial for a two-card deck."
    )


def _perfect_score_evidence() -> str:
    res = oracle.enumerate_all(3, HALF)
    return (
        f"n=3, p=1/2: enumeration gives P(score = 3) = {res.total_law[3]} = p^2 "
        "= p^(n-1); the printed exponent n would give 1/8.  Checked for n <= 12."
    )


def _phase_table_evidence() -> str:
    lo = float(exact.perfect_score_probability(10000, exact.PhaseTransitionParams(1, 1).bias_for(10000)))
    hi = float(exact.perfect_score_probability(100, 1.0 - 1.0 / 100**2))
    small = float(exact.perfect_score_probability(10000, 1.0 - 1.0 / 10000**0.5))
    return (
        "p = 1 - lam/n^alpha gives p^(n-1) = exp(-lam n^(1-alpha))(1+o(1)): "
        f"alpha=1, n=10^4 -> {lo:.6f} ~ e^-1; alpha=2, n=100 -> {hi:.4f} -> 1; "
        f"alpha=1/2, n=10^4 -> {small:.2e} -> 0.  The printed case table lists "
        "the alpha < 1 and alpha > 1 limits the other way around."
    )


def _refined_moments_evidence() -> str:
    joint = exact.joint_pmf(4, HALF)
    return (
        "n=4, p=1/2 joint law gives Var(lucky) = "
        f"{joint.var_lucky()} = (5n-4)/16, Var(certified) = {joint.var_certified()} "
        f"= (n-2)/4, Cov = {joint.covariance()} = (3-2n)/8; the printed 5n/16, n/4, "
        "-n/4 are the leading terms only.  The split identity "
        "Var(total) = Var(lucky) + Var(certified) + 2 Cov = n/16 holds exactly."
    )


def _joint_gf_evidence() -> str:
    series = exact.joint_pgf_series_biased(3, Fraction(3, 4)).pmf_dict(3)
    law = exact.joint_pmf(3, Fraction(3, 4)).probs
    return (
        "the adopted form (zw + (1-p)w(1-w)z^2) / (1 - ((1-p)w + pv)z "
        "+ p(1-p)w(v-1)z^2) reduces to the balanced trivariate function at "
        f"p = 1/2 and matches the joint law, e.g. n=3, p=3/4: series "
        f"{ {k: str(v) for k, v in sorted(series.items())} } = law "
        f"{ {k: str(v) for k, v in sorted(law.items())} }.  The printed display "
        "swaps the two marks and drops a power of z in the denominator."
    )


def _index_delta_evidence() -> str:
    law = shuffle.first_card_law(3, HALF)
    return (
        "the reduced-instance first-card weights are printed with delta_{i-n}; "
        f"read as the Kronecker delta delta_{{i,n}} they normalize, e.g. n=3: "
        f"({law[0]}, {law[1]}, {law[2]}) sums to 1."
    )


def _threshold_split_evidence() -> str:
    pmf = exact.total_pmf(4, Fraction(3, 10))
    bino = exact.binomial_regime_pmf(4, Fraction(3, 10))
    return (
        "the printed split of the series at the high-guess threshold contains "
        "a malformed denominator term ('1vz(1-p)'); the split form is not used. "
        "The threshold regime is computed by the recurrence and agrees with "
        f"1 + Binomial(n-1, 1-p), e.g. n=4, p=3/10: {pmf.probs == bino.probs}."
    )


ERRATA: list[Erratum] = [
    Erratum(
        key="position-matrix-zero-pattern",
        published="m[i][j] = 0 if and only if 1 <= j <= n-i",
        adopted="m[i][j] = 0 if and only if i+1 <= j <= n-i",
        evidence=_zero_pattern_evidence,
    ),
    Erratum(
        key="position-matrix-mirror-symmetry",
        published="m[i][n-j+1] = m[i][j] for all i, j (stated for the biased shuffle too)",
        adopted="mirror symmetry holds at p = 1/2 only",
        evidence=_mirror_evidence,
    ),
    Erratum(
        key="score-gf-denominator",
        published="denominator 4 - 4vz + (v^2-v)z",
        adopted="denominator 4 - 4vz + (v^2-v)z^2",
        evidence=_gf_denominator_evidence,
    ),
    Erratum(
        key="perfect-score-probability",
        published="P(score = n) = p^n",
        adopted="P(score = n) = p^(n-1) (one flip per card except the first pile card)",
        evidence=_perfect_score_evidence,
    ),
    Erratum(
        key="phase-transition-case-table",
        published="limit of P(score = n) is 1 for 0 < alpha < 1, e^-lam at alpha = 1, 0 for alpha >= 1",
        adopted="evaluated limit exp(-lam n^(1-alpha)): 0 for alpha < 1, e^-lam at alpha = 1, 1 for alpha > 1",
        evidence=_phase_table_evidence,
    ),
    Erratum(
        key="refined-second-moments",
        published="Var(lucky) = 5n/16, Var(certified) = n/4, Cov = -n/4 for n >= 3",
        adopted="Var(lucky) = (5n-4)/16, Var(certified) = (n-2)/4, Cov = (3-2n)/8 for n >= 3",
        evidence=_refined_moments_evidence,
    ),
    Erratum(
        key="biased-joint-gf",
        published="zv(1 + (v-1)(-1+p)z) / (1 - pv(w-1)(-1+p)z^2 - (1-p)v + wpz)",
        adopted="(zw + (1-p)w(1-w)z^2) / (1 - ((1-p)w + pv)z + p(1-p)w(v-1)z^2)",
        evidence=_joint_gf_evidence,
    ),
    Erratum(
        key="reduced-first-card-delta",
        published="P{J = i} = (1 + delta_{i-n}) / 2^(i-1)",
        adopted="delta_{i-n} read as the Kronecker delta delta_{i,n}",
        evidence=_index_delta_evidence,
    ),
    Erratum(
        key="threshold-split-series",
        published="series split at the high-guess threshold with denominator term '1vz(1-p)'",
        adopted="split form unused; the recurrence covers p < 1/2 and matches the binomial regime",
        evidence=_threshold_split_evidence,
    ),
]


def errata_lines() -> list[str]:
    out = []
    for i, e in enumerate(ERRATA, 1):
        out.append(f"{i}. {e.key}")
        out.append(f"   published: {e.published}")
        out.append(f"   adopted:   {e.adopted}")
        out.append(f"   evidence:  {e.evidence()}")
    return out


def errata_json() -> list[dict]:
    return [e.to_json_dict() for e in ERRATA]
