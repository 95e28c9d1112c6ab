"""Exact and floating-point laws of the guessing score.

The normative computation is a dynamic program over the size-reduction
recurrence: revealing a first card j in an instance of size m leaves an
independent sub-instance of size m-j, credits j-1 certified guesses, and
credits one lucky guess when j happened to be the optimal first guess.  The
closed-form generating functions and moment formulas implemented here are
independent cross-checks of the same laws, not their definition.

Two backends: exact rationals (default when p is a Fraction; the DP runs on
scaled integers, denominator denom(p)^(n-1), so no gcd work is needed) and
IEEE doubles via numpy for large n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Mapping

import numpy as np

from .params import (
    Prob,
    format_value,
    parse_probability,
    parse_value,
    validate_deck_size,
    validate_probability,
)
from .strategy import high_guess_threshold

HALF = Fraction(1, 2)


def _guess_high(p: Prob, m: int) -> bool:
    """Whether the dynamic program credits the high guess in an instance of size m.

    Mirrors the strategy's threshold rule: the largest label is guessed when
    top placements are rare enough that (1-p)^(m-1) >= p.
    """
    pf = Fraction(p)
    if pf >= HALF:
        return False
    return (1 - pf) ** (m - 1) >= pf


# ---------------------------------------------------------------------------
# Laws


@dataclass
class Pmf:
    """Law of the number of correct guesses for a deck of n cards."""

    n: int
    p: Prob
    probs: dict[int, Prob]
    backend: str

    def total(self) -> Prob:
        return sum(self.probs.values())

    def support(self) -> list[int]:
        return sorted(k for k, v in self.probs.items() if v != 0)

    def mean(self) -> Prob:
        return sum(k * v for k, v in self.probs.items())

    def variance(self) -> Prob:
        mu = self.mean()
        return sum((k - mu) ** 2 * v for k, v in self.probs.items())

    def as_array(self) -> np.ndarray:
        """Dense float array a[k] = P{score = k}, k = 0..n."""
        out = np.zeros(self.n + 1)
        for k, v in self.probs.items():
            out[k] = float(v)
        return out

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "p": format_value(self.p),
            "backend": self.backend,
            "entries": [[k, format_value(v)] for k, v in sorted(self.probs.items())],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Pmf":
        p = parse_probability(data["p"])
        probs = {int(k): parse_value(v) for k, v in data["entries"]}
        return cls(n=int(data["n"]), p=p, probs=probs, backend=data["backend"])


@dataclass
class JointPmf:
    """Joint law of (lucky, certified) correct guesses."""

    n: int
    p: Prob
    probs: dict[tuple[int, int], Prob]
    backend: str

    def total(self) -> Prob:
        return sum(self.probs.values())

    def marginal_total(self) -> Pmf:
        out: dict[int, Prob] = {}
        for (lucky, certified), v in self.probs.items():
            k = lucky + certified
            out[k] = out.get(k, 0) + v
        return Pmf(n=self.n, p=self.p, probs=out, backend=self.backend)

    def mean_lucky(self) -> Prob:
        return sum(l * v for (l, _), v in self.probs.items())

    def mean_certified(self) -> Prob:
        return sum(c * v for (_, c), v in self.probs.items())

    def var_lucky(self) -> Prob:
        mu = self.mean_lucky()
        return sum((l - mu) ** 2 * v for (l, _), v in self.probs.items())

    def var_certified(self) -> Prob:
        mu = self.mean_certified()
        return sum((c - mu) ** 2 * v for (_, c), v in self.probs.items())

    def covariance(self) -> Prob:
        ml, mc = self.mean_lucky(), self.mean_certified()
        return sum((l - ml) * (c - mc) * v for (l, c), v in self.probs.items())

    def moment_summary(self) -> "MomentSummary":
        marginal = self.marginal_total()
        return MomentSummary(
            mean=marginal.mean(),
            variance=marginal.variance(),
            var_lucky=self.var_lucky(),
            var_certified=self.var_certified(),
            covariance=self.covariance(),
        )

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "p": format_value(self.p),
            "backend": self.backend,
            "entries": [
                [[l, c], format_value(v)] for (l, c), v in sorted(self.probs.items())
            ],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "JointPmf":
        p = parse_probability(data["p"])
        probs = {(int(l), int(c)): parse_value(v) for (l, c), v in data["entries"]}
        return cls(n=int(data["n"]), p=p, probs=probs, backend=data["backend"])


@dataclass
class MomentSummary:
    mean: Prob
    variance: Prob | None = None
    var_lucky: Prob | None = None
    var_certified: Prob | None = None
    covariance: Prob | None = None


# ---------------------------------------------------------------------------
# Dynamic programs

def _iter_total_coeffs(n_max: int, p: Fraction):
    """Yield integer coefficient lists of the score law for sizes 1..n_max.

    The list for size m is scaled by denom(p)^(m-1).  Telescoped recurrence:
    with A_m the successor-sum sum_j p(1-p)^(j-1) v^(j-1) s_(m-j), we have
    A_m = p s_(m-1) + (1-p) v A_(m-1), and s_m adds the lucky bonus either on
    the j=1 term (successor guess) or on the tail j=m term (high guess), so
    every step costs O(m).
    """
    a, b = p.numerator, p.denominator
    c = b - a
    s = [0, 1]  # s_1 = v, scale b^0
    yield s
    A = [0, 0]
    cpow = 1  # (b-a)^(m-1), tracked alongside m
    for m in range(2, n_max + 1):
        cpow *= c
        shift_a = [0] + A  # v * A_(m-1), length m+1
        shift_s = [0] + s  # v * s_(m-1), length m+1
        A = [a * sv + c * av for sv, av in zip(s + [0], shift_a)]
        if _guess_high(p, m):
            s = list(A)
            s[m] += cpow
        else:
            s = [c * av + a * sv for av, sv in zip(shift_a, shift_s)]
            s[m - 1] += cpow
        yield s


def _total_pmf_exact(n: int, p: Fraction) -> dict[int, Fraction]:
    for coeffs in _iter_total_coeffs(n, p):
        pass
    denom = p.denominator ** (n - 1)
    return {k: Fraction(v, denom) for k, v in enumerate(coeffs) if v}


def _total_pmf_float(n: int, p: float) -> np.ndarray:
    q = 1.0 - p
    s = np.zeros(n + 1)
    s[1] = 1.0
    if n == 1:
        return s
    if Fraction(p) < HALF:
        threshold = high_guess_threshold(p)
    else:
        threshold = 1
    A = np.zeros(n + 1)
    qpow = 1.0
    for m in range(2, n + 1):
        qpow *= q
        shift_a = np.concatenate(([0.0], A[:-1]))
        new_a = p * s + q * shift_a
        if m <= threshold:
            s = new_a.copy()
            s[m] += qpow
        else:
            s = q * shift_a + p * np.concatenate(([0.0], s[:-1]))
            s[m - 1] += qpow
        A = new_a
    return s


def total_pmf(n: int, p: Prob, backend: str | None = None) -> Pmf:
    """Law of the number of correct guesses under optimal play.

    backend "exact" (requires rational p) or "float"; inferred from the type
    of p when omitted.
    """
    validate_deck_size(n)
    validate_probability(p)
    if backend is None:
        backend = "exact" if isinstance(p, Fraction) else "float"
    if backend == "exact":
        if not isinstance(p, Fraction):
            raise ValueError("exact backend requires a rational p")
        return Pmf(n=n, p=p, probs=_total_pmf_exact(n, p), backend="exact")
    if backend == "float":
        arr = _total_pmf_float(n, float(p))
        probs = {k: float(v) for k, v in enumerate(arr) if v != 0.0}
        return Pmf(n=n, p=float(p), probs=probs, backend="float")
    raise ValueError(f"unknown backend {backend!r}")


def _iter_joint_coeffs(n_max: int, p: Fraction):
    """Yield integer (lucky, certified) coefficient maps for sizes 1..n_max,
    scaled by denom(p)^(m-1); same telescoping as the score law."""
    a, b = p.numerator, p.denominator
    c = b - a
    s: dict[tuple[int, int], int] = {(0, 1): 1}  # (lucky, certified) = (0, 1) at n=1
    yield s
    A: dict[tuple[int, int], int] = {}
    cpow = 1
    for m in range(2, n_max + 1):
        cpow *= c
        shift_a = {(l, cc + 1): v for (l, cc), v in A.items()}  # w * A_(m-1)
        new_a: dict[tuple[int, int], int] = {}
        for key, v in s.items():
            new_a[key] = new_a.get(key, 0) + a * v
        for key, v in shift_a.items():
            new_a[key] = new_a.get(key, 0) + c * v
        if _guess_high(p, m):
            new_s = dict(new_a)
            key = (1, m - 1)
            new_s[key] = new_s.get(key, 0) + cpow
        else:
            new_s = {}
            for key, v in shift_a.items():
                new_s[key] = new_s.get(key, 0) + c * v
            for (l, cc), v in s.items():  # v * s_(m-1): successor guess hits
                key = (l + 1, cc)
                new_s[key] = new_s.get(key, 0) + a * v
            key = (0, m - 1)
            new_s[key] = new_s.get(key, 0) + cpow
        s, A = new_s, new_a
        yield s


def _joint_pmf_exact(n: int, p: Fraction) -> dict[tuple[int, int], Fraction]:
    for coeffs in _iter_joint_coeffs(n, p):
        pass
    denom = p.denominator ** (n - 1)
    return {k: Fraction(v, denom) for k, v in coeffs.items() if v}


def _joint_pmf_float(n: int, p: float) -> dict[tuple[int, int], float]:
    q = 1.0 - p
    size = n + 1
    s = np.zeros((size, size))
    s[0, 1] = 1.0
    if Fraction(p) < HALF:
        threshold = high_guess_threshold(p)
    else:
        threshold = 1
    A = np.zeros((size, size))
    qpow = 1.0
    for m in range(2, n + 1):
        qpow *= q
        shift_a = np.zeros((size, size))
        shift_a[:, 1:] = A[:, :-1]
        new_a = p * s + q * shift_a
        if m <= threshold:
            new_s = new_a.copy()
            new_s[1, m - 1] += qpow
        else:
            new_s = q * shift_a
            new_s[1:, :] += p * s[:-1, :]  # successor hit: lucky count shifts
            new_s[0, m - 1] += qpow
        s, A = new_s, new_a
    return {
        (int(l), int(c)): float(s[l, c])
        for l, c in zip(*np.nonzero(s))
    }


def total_pmf_range(n_max: int, p: Prob) -> list[Pmf]:
    """Exact score laws for every size 1..n_max from one pass of the recurrence."""
    validate_deck_size(n_max)
    validate_probability(p)
    if not isinstance(p, Fraction):
        raise ValueError("range computation uses the exact backend; pass a rational p")
    out = []
    denom = 1
    for m, coeffs in enumerate(_iter_total_coeffs(n_max, p), 1):
        probs = {k: Fraction(v, denom) for k, v in enumerate(coeffs) if v}
        out.append(Pmf(n=m, p=p, probs=probs, backend="exact"))
        denom *= p.denominator
    return out


def joint_pmf_range(n_max: int, p: Prob) -> list[JointPmf]:
    """Exact joint laws for every size 1..n_max from one pass of the recurrence."""
    validate_deck_size(n_max)
    validate_probability(p)
    if not isinstance(p, Fraction):
        raise ValueError("range computation uses the exact backend; pass a rational p")
    out = []
    denom = 1
    for m, coeffs in enumerate(_iter_joint_coeffs(n_max, p), 1):
        probs = {k: Fraction(v, denom) for k, v in coeffs.items() if v}
        out.append(JointPmf(n=m, p=p, probs=probs, backend="exact"))
        denom *= p.denominator
    return out


def joint_pmf(n: int, p: Prob, backend: str | None = None) -> JointPmf:
    """Joint law of (lucky, certified) correct guesses under optimal play."""
    validate_deck_size(n)
    validate_probability(p)
    if backend is None:
        backend = "exact" if isinstance(p, Fraction) else "float"
    if backend == "exact":
        if not isinstance(p, Fraction):
            raise ValueError("exact backend requires a rational p")
        return JointPmf(n=n, p=p, probs=_joint_pmf_exact(n, p), backend="exact")
    if backend == "float":
        probs = _joint_pmf_float(n, float(p))
        return JointPmf(n=n, p=float(p), probs=probs, backend="float")
    raise ValueError(f"unknown backend {backend!r}")


# ---------------------------------------------------------------------------
# Closed-form moments


def closed_form_moments(n: int, p: Prob) -> MomentSummary:
    """Closed-form mean (n >= 2) and variance (n >= 3) of the score, p >= 1/2.

    mean = (1-p+p^2) n + 3p - 1 - 2p^2
    variance = (1-p) p (3p^2-3p+1) n + p (1-p)(10p - 8p^2 - 3)
    """
    validate_deck_size(n)
    validate_probability(p)
    if Fraction(p) < HALF:
        raise ValueError("closed-form moments hold for p >= 1/2; use total_pmf moments")
    if n < 2:
        raise ValueError("closed-form mean requires n >= 2")
    one = Fraction(1) if isinstance(p, Fraction) else 1.0
    mean = (one - p + p * p) * n + 3 * p - 1 - 2 * p * p
    variance = None
    if n >= 3:
        variance = (one - p) * p * (3 * p * p - 3 * p + 1) * n + p * (one - p) * (
            10 * p - 8 * p * p - 3
        )
    return MomentSummary(mean=mean, variance=variance)


def refined_closed_form_moments(n: int) -> MomentSummary:
    """Exact balanced-shuffle moments of the luck/certified split, n >= 3.

    The linear coefficients 5/16, 1/4, -1/4 are the published leading terms;
    the constant corrections are derived from the joint law (verified against
    exhaustive enumeration and the generating function).
    """
    if n < 3:
        raise ValueError("refined closed forms require n >= 3")
    return MomentSummary(
        mean=Fraction(3 * n, 4),
        variance=Fraction(n, 16),
        var_lucky=Fraction(5 * n - 4, 16),
        var_certified=Fraction(n - 2, 4),
        covariance=Fraction(3 - 2 * n, 8),
    )


# ---------------------------------------------------------------------------
# Generating-function series (independent cross-checks)

_Poly = dict[tuple[int, ...], Fraction]


def _poly_add(f: _Poly, g: _Poly, scale: Fraction = Fraction(1)) -> _Poly:
    out = dict(f)
    for k, v in g.items():
        out[k] = out.get(k, Fraction(0)) + scale * v
        if not out[k]:
            del out[k]
    return out


def _poly_mul(f: _Poly, g: _Poly) -> _Poly:
    out: _Poly = {}
    for k1, v1 in f.items():
        for k2, v2 in g.items():
            key = tuple(x + y for x, y in zip(k1, k2))
            out[key] = out.get(key, Fraction(0)) + v1 * v2
    return {k: v for k, v in out.items() if v}


def _expand_series(num: dict[int, _Poly], den: dict[int, _Poly], n_max: int) -> list[_Poly]:
    """Power-series coefficients of num(z)/den(z) in z, as mark polynomials.

    Uses the linear recurrence implied by the denominator:
    den_0 s_n = num_n - sum_{i>=1} den_i s_{n-i}.
    """
    (d0_key, d0_val), = den[0].items()
    assert all(e == 0 for e in d0_key), "denominator constant term must be mark-free"
    degree = max(den)
    series: list[_Poly] = [{}]
    for n in range(1, n_max + 1):
        acc = dict(num.get(n, {}))
        for i in range(1, min(n, degree) + 1):
            if i in den:
                acc = _poly_add(acc, _poly_mul(den[i], series[n - i]), Fraction(-1))
        series.append({k: v / d0_val for k, v in acc.items() if v})
    return series[1:]


@dataclass
class SeriesExpansion:
    """Coefficient polynomials q_n of a generating-function z-series.

    Each q_n carries exact rational coefficients over the given marks and
    must be the probability generating polynomial of the matching law
    (q_n evaluated at all-ones equals 1).
    """

    n_max: int
    p: Prob | None
    marks: tuple[str, ...]
    polys: list[_Poly]

    def poly(self, n: int) -> _Poly:
        return self.polys[n - 1]

    def at_ones(self, n: int) -> Fraction:
        return sum(self.poly(n).values(), Fraction(0))

    def pmf_dict(self, n: int) -> dict:
        """Coefficients keyed like the matching law (int score or (l, c) pair)."""
        if len(self.marks) == 1:
            return {k[0]: v for k, v in self.poly(n).items()}
        return {k: v for k, v in self.poly(n).items()}


def _require_exact_p(p: Prob) -> Fraction:
    if not isinstance(p, Fraction):
        raise ValueError("series expansion is an exact cross-check; pass a rational p")
    return p


def total_pgf_series(n_max: int, p: Prob) -> SeriesExpansion:
    """Series of the biased-score generating function
    zv(1+(v-1)(p-1)z) / (1 - zv - pv(v-1)(p-1)z^2), valid for p in [1/2, 1]."""
    p = _require_exact_p(p)
    validate_probability(p)
    if p < HALF:
        raise ValueError("closed-form series holds for p >= 1/2")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    pm1 = p - 1
    num = {1: {(1,): Fraction(1)}, 2: {(2,): pm1, (1,): -pm1}}
    den = {
        0: {(0,): Fraction(1)},
        1: {(1,): Fraction(-1)},
        2: {(2,): -p * pm1, (1,): p * pm1},
    }
    return SeriesExpansion(n_max=n_max, p=p, marks=("v",), polys=_expand_series(num, den, n_max))


def total_pgf_series_symmetric(n_max: int) -> SeriesExpansion:
    """Series of the balanced-shuffle generating function
    2zv(2+(1-v)z) / (4 - 4vz + (v^2-v)z^2)."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    num = {1: {(1,): Fraction(4)}, 2: {(1,): Fraction(2), (2,): Fraction(-2)}}
    den = {
        0: {(0,): Fraction(4)},
        1: {(1,): Fraction(-4)},
        2: {(2,): Fraction(1), (1,): Fraction(-1)},
    }
    return SeriesExpansion(
        n_max=n_max, p=HALF, marks=("v",), polys=_expand_series(num, den, n_max)
    )


def joint_pgf_series(n_max: int) -> SeriesExpansion:
    """Series of the balanced luck/certified generating function
    2zw(2+(1-w)z) / (4 + w(v-1)z^2 - 2z(v+w)); v marks lucky, w certified."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    num = {1: {(0, 1): Fraction(4)}, 2: {(0, 1): Fraction(2), (0, 2): Fraction(-2)}}
    den = {
        0: {(0, 0): Fraction(4)},
        1: {(1, 0): Fraction(-2), (0, 1): Fraction(-2)},
        2: {(1, 1): Fraction(1), (0, 1): Fraction(-1)},
    }
    return SeriesExpansion(
        n_max=n_max, p=HALF, marks=("v", "w"), polys=_expand_series(num, den, n_max)
    )


def joint_pgf_series_biased(n_max: int, p: Prob) -> SeriesExpansion:
    """Series of the biased luck/certified generating function, p in [1/2, 1]:

        (zw + (1-p)w(1-w)z^2) / (1 - ((1-p)w + pv)z + p(1-p)w(v-1)z^2)

    This is the corrected form of the published display (which swaps the two
    marks and drops a power of z); it reduces to the balanced trivariate
    generating function at p = 1/2 and is validated against the joint law.
    """
    p = _require_exact_p(p)
    validate_probability(p)
    if p < HALF:
        raise ValueError("closed-form series holds for p >= 1/2")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    q = 1 - p
    num = {1: {(0, 1): Fraction(1)}, 2: {(0, 1): q, (0, 2): -q}}
    den = {
        0: {(0, 0): Fraction(1)},
        1: {(0, 1): -q, (1, 0): -p},
        2: {(1, 1): p * q, (0, 1): -p * q},
    }
    return SeriesExpansion(
        n_max=n_max, p=p, marks=("v", "w"), polys=_expand_series(num, den, n_max)
    )


# ---------------------------------------------------------------------------
# Special regimes


def binomial_regime_pmf(n: int, p: Prob) -> Pmf:
    """Law 1 + Binomial(n-1, 1-p), valid while the high guess stays optimal
    (p < 1/2 and n at most the high-guess threshold)."""
    validate_deck_size(n)
    validate_probability(p)
    pf = Fraction(p)
    if pf >= HALF:
        raise ValueError("binomial regime requires p < 1/2")
    threshold = high_guess_threshold(p)
    if n > threshold:
        raise ValueError(f"binomial regime holds only for n <= {threshold}, got n={n}")
    one = Fraction(1) if isinstance(p, Fraction) else 1.0
    q = one - p
    probs = {
        1 + k: comb(n - 1, k) * q**k * p ** (n - 1 - k) for k in range(n)
    }
    backend = "exact" if isinstance(p, Fraction) else "float"
    return Pmf(n=n, p=p, probs=probs, backend=backend)


def perfect_score_probability(n: int, p: Prob) -> Prob:
    """P{identity deck} = p^(n-1), which for p >= 1/2 is also P{score = n}
    (a perfect game happens exactly on the identity deck under the successor
    strategy; for p < 1/2 the perfect deck is the reversed one instead)."""
    validate_deck_size(n)
    validate_probability(p)
    return p ** (n - 1)


@dataclass(frozen=True)
class PhaseTransitionParams:
    """Bias schedule p = 1 - lam / n^alpha approaching the deterministic shuffle."""

    lam: Prob
    alpha: float | int

    def __post_init__(self):
        if self.lam <= 0 or self.alpha <= 0:
            raise ValueError("lam and alpha must be positive")

    def bias_for(self, n: int) -> Prob:
        validate_deck_size(n)
        scale = n**self.alpha
        if self.lam >= scale:
            raise ValueError(f"lam={self.lam} >= n^alpha={scale}: bias leaves (0, 1)")
        if isinstance(self.lam, (int, Fraction)) and isinstance(self.alpha, int):
            return Fraction(1) - Fraction(self.lam) / Fraction(scale)
        return 1.0 - float(self.lam) / float(scale)
