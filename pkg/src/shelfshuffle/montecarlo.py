"""Seeded large-scale simulation and statistical verification.

Reproducibility contract: replication r belongs to fixed-size chunk
r // CHUNK_ROWS; chunk i draws its flips as a (rows x (n-1)) uniform matrix
from a Philox generator seeded with SeedSequence(seed, spawn_key=(i,)), and a
flip is a top placement iff the uniform is < p.  Chunk tallies are integers
and are combined in chunk order, so results are bit-identical for a given
config regardless of the worker count.

For p >= 1/2 the per-game score is computed from the flips in closed form
(the successor guess for card c hits iff both c and c-1 were placed on top,
and everything from the reveal of a label >= n-1 onward is certain), which is
validated exhaustively against played games in the test suite.  For p < 1/2
games are played directly.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from ._version import __version__
from .exact import Pmf, PhaseTransitionParams, closed_form_moments, perfect_score_probability, total_pmf
from .params import Prob, format_probability, format_value, validate_deck_size, validate_probability
from .shuffle import deck_from_placements
from .strategy import play_game

CHUNK_ROWS = 1 << 16
HALF = Fraction(1, 2)


@dataclass(frozen=True)
class SimConfig:
    n: int
    p: Prob | PhaseTransitionParams
    replications: int
    seed: int
    workers: int = 1

    def __post_init__(self):
        validate_deck_size(self.n)
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if not isinstance(self.p, PhaseTransitionParams):
            validate_probability(self.p)

    def resolved_bias(self) -> Prob:
        if isinstance(self.p, PhaseTransitionParams):
            return self.p.bias_for(self.n)
        return self.p


@dataclass
class SimSummary:
    n: int
    p: str
    replications: int
    seed: int
    workers: int
    counts: dict[int, int]
    mean_total: float
    mean_lucky: float
    mean_certified: float
    var_total: float
    var_lucky: float
    var_certified: float
    tv_to_reference: Prob | None
    ks_normal: float | None
    games_per_second: float
    build: str

    def stat_fields(self) -> dict:
        """Everything except wall-clock throughput; this part is deterministic."""
        out = self.to_json_dict()
        del out["games_per_second"]
        return out

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "replications": self.replications,
            "seed": self.seed,
            "workers": self.workers,
            "counts": [[k, v] for k, v in sorted(self.counts.items())],
            "mean_total": self.mean_total,
            "mean_lucky": self.mean_lucky,
            "mean_certified": self.mean_certified,
            "var_total": self.var_total,
            "var_lucky": self.var_lucky,
            "var_certified": self.var_certified,
            "tv_to_reference": None
            if self.tv_to_reference is None
            else format_value(self.tv_to_reference),
            "ks_normal": self.ks_normal,
            "games_per_second": self.games_per_second,
            "build": self.build,
        }

    @staticmethod
    def csv_header() -> list[str]:
        return [
            "n", "p", "replications", "seed", "workers",
            "mean_total", "mean_lucky", "mean_certified",
            "var_total", "var_lucky", "var_certified",
            "tv_to_reference", "ks_normal", "games_per_second", "build",
        ]

    def to_csv_row(self) -> list:
        d = self.to_json_dict()
        return [d[key] for key in self.csv_header()]


def _chunk_flips(seed: int, chunk_index: int, rows: int, n: int, p: float) -> np.ndarray:
    ss = np.random.SeedSequence(seed, spawn_key=(chunk_index,))
    gen = np.random.Generator(np.random.Philox(ss))
    return gen.random((rows, n - 1)) < p


def _trace_scores(flips: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(total, lucky, certified) per game from the flips, successor strategy
    (optimal for p >= 1/2).

    Column reversal puts card c at column c-1.  A successor guess hits iff the
    guessed card was placed on top while the previous reveal was its
    predecessor, i.e. cards c-1 and c are both top-placed (card 0 counts as
    top).  Certainty starts when a label >= n-1 is revealed: after the last
    top-placed card if that card is n-1, otherwise after n shows up.
    """
    rows = flips.shape[0]
    if n == 1:
        ones = np.ones(rows, dtype=np.int64)
        return ones, np.zeros(rows, dtype=np.int64), ones
    top = flips[:, ::-1]
    lucky = top[:, 0].astype(np.int64)
    if n > 2:
        lucky = lucky + (top[:, 1:] & top[:, :-1]).sum(axis=1)
    top_count = top.sum(axis=1)
    certified = n - top_count - (~top[:, n - 2]).astype(np.int64)
    return lucky + certified, lucky, certified


def _played_scores(flips: np.ndarray, n: int, p: Prob) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    rows = flips.shape[0]
    total = np.empty(rows, dtype=np.int64)
    lucky = np.empty(rows, dtype=np.int64)
    certified = np.empty(rows, dtype=np.int64)
    for r in range(rows):
        deck = deck_from_placements(n, flips[r].tolist())
        record = play_game(deck, p)
        total[r] = record.total_correct
        lucky[r] = record.lucky
        certified[r] = record.certified
    return total, lucky, certified


def simulate(config: SimConfig, reference: Pmf | None = None) -> SimSummary:
    """Run seeded replications of shuffle-and-play and aggregate exact tallies."""
    n = config.n
    p = config.resolved_bias()
    pf = float(p)
    use_trace = Fraction(p) >= HALF
    n_chunks = (config.replications + CHUNK_ROWS - 1) // CHUNK_ROWS

    def run_chunk(index: int):
        rows = min(CHUNK_ROWS, config.replications - index * CHUNK_ROWS)
        flips = _chunk_flips(config.seed, index, rows, n, pf)
        if use_trace:
            total, lucky, certified = _trace_scores(flips, n)
        else:
            total, lucky, certified = _played_scores(flips, n, p)
        counts = np.bincount(total, minlength=n + 1)
        sums = np.array(
            [
                total.sum(), (total * total).sum(),
                lucky.sum(), (lucky * lucky).sum(),
                certified.sum(), (certified * certified).sum(),
            ],
            dtype=np.int64,
        )
        return counts, sums

    start = time.perf_counter()
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(run_chunk, range(n_chunks)))
    else:
        results = [run_chunk(i) for i in range(n_chunks)]
    elapsed = time.perf_counter() - start

    counts = np.zeros(n + 1, dtype=np.int64)
    sums = np.zeros(6, dtype=np.int64)
    for chunk_counts, chunk_sums in results:  # fixed chunk order
        counts += chunk_counts
        sums += chunk_sums

    reps = config.replications
    s_t, s_t2, s_l, s_l2, s_c, s_c2 = (int(v) for v in sums)

    def empirical(s1: int, s2: int) -> tuple[float, float]:
        mean = s1 / reps
        return mean, s2 / reps - mean * mean

    mean_total, var_total = empirical(s_t, s_t2)
    mean_lucky, var_lucky = empirical(s_l, s_l2)
    mean_certified, var_certified = empirical(s_c, s_c2)

    count_map = {int(k): int(v) for k, v in enumerate(counts) if v}
    tv = None
    mu = sigma = None
    if reference is not None:
        if reference.backend == "exact":
            empirical_law: Mapping[int, Prob] = {k: Fraction(v, reps) for k, v in count_map.items()}
        else:
            empirical_law = {k: v / reps for k, v in count_map.items()}
        tv = tv_distance(empirical_law, reference.probs)
        mu, sigma = float(reference.mean()), math.sqrt(float(reference.variance()))
    if sigma is None or sigma == 0:
        mu, sigma = mean_total, math.sqrt(var_total) if var_total > 0 else None

    ks = None
    if sigma:
        ks = _ks_from_counts(count_map, reps, mu, sigma)

    return SimSummary(
        n=n,
        p=format_probability(p),
        replications=reps,
        seed=config.seed,
        workers=config.workers,
        counts=count_map,
        mean_total=mean_total,
        mean_lucky=mean_lucky,
        mean_certified=mean_certified,
        var_total=var_total,
        var_lucky=var_lucky,
        var_certified=var_certified,
        tv_to_reference=tv,
        ks_normal=ks,
        games_per_second=reps / elapsed if elapsed > 0 else float("inf"),
        build=f"shelfshuffle-{__version__}",
    )


# ---------------------------------------------------------------------------
# Distances and limit checks


def tv_distance(a: Mapping, b: Mapping) -> Prob:
    """Total variation distance between two finitely supported laws."""
    keys = set(a) | set(b)
    zero_a = next(iter(a.values())) * 0 if a else 0
    diff = sum(abs(a.get(k, zero_a) - b.get(k, zero_a)) for k in keys)
    return diff / 2


def normal_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def normal_sup_distance(probs: Mapping[int, Prob], mean: float, std: float) -> float:
    """sup_x |F((x-mean)/std) - Phi(x)| for a discrete law, evaluated at atoms
    from both sides."""
    worst = 0.0
    cum = 0.0
    for k in sorted(probs):
        z = (k - mean) / std
        phi = normal_cdf(z)
        worst = max(worst, abs(cum - phi))  # left limit at the atom
        cum += float(probs[k])
        worst = max(worst, abs(cum - phi))
    return worst


def _ks_from_counts(counts: Mapping[int, int], reps: int, mean: float, std: float) -> float:
    return normal_sup_distance({k: v / reps for k, v in counts.items()}, mean, std)


def clt_deviation(n: int, p: Prob = HALF) -> float:
    """Sup-distance between the standardized exact score CDF (float backend)
    and the standard normal CDF, standardized by the closed-form moments."""
    law = total_pmf(n, p, backend="float")
    moments = closed_form_moments(n, p)
    return normal_sup_distance(law.probs, float(moments.mean), math.sqrt(float(moments.variance)))


def poisson_pmf_map(lam: float, k_max: int) -> dict[int, float]:
    out = {0: math.exp(-lam)}
    for k in range(1, k_max + 1):
        out[k] = out[k - 1] * lam / k
    return out


def poisson_tv(z_probs: Mapping[int, float], lam: float) -> float:
    """TV distance between a law on {0,1,...} and Poisson(lam), including the
    Poisson mass beyond the law's support."""
    k_max = max(z_probs)
    pois = poisson_pmf_map(lam, k_max)
    diff = sum(abs(z_probs.get(k, 0.0) - pois[k]) for k in range(k_max + 1))
    tail = max(0.0, 1.0 - sum(pois.values()))
    return (diff + tail) / 2


def phase_transition_sweep(
    lam: Prob,
    alphas: list[float | int],
    ns: list[int],
    dp_limit: int = 20000,
) -> list[dict]:
    """Near-deterministic shuffle sweep: p = 1 - lam/n^alpha.

    Reports the perfect-score probability p^(n-1) with its evaluated limit
    exp(-lam * n^(1-alpha)), and for n within the float-DP budget the mean and
    variance of the miss count n - score plus its TV distance to Poisson(lam).
    """
    rows = []
    for alpha in alphas:
        for n in ns:
            params = PhaseTransitionParams(lam=lam, alpha=alpha)
            p = params.bias_for(n)
            perfect = perfect_score_probability(n, p)
            row: dict = {
                "lambda": float(lam),
                "alpha": float(alpha),
                "n": n,
                "p": float(p),
                "perfect_prob": float(perfect),
                "limit_reference": math.exp(-float(lam) * n ** (1.0 - float(alpha))),
            }
            if n <= dp_limit:
                law = total_pmf(n, float(p), backend="float")
                z_probs = {n - k: v for k, v in law.probs.items()}
                z_mean = sum(k * v for k, v in z_probs.items())
                z_var = sum((k - z_mean) ** 2 * v for k, v in z_probs.items())
                row.update(
                    z_mean=z_mean,
                    z_var=z_var,
                    tv_poisson=poisson_tv(z_probs, float(lam)),
                )
            rows.append(row)
    return rows
