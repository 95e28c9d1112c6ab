"""Shared handling of the top-placement probability and deck-size parameters.

The package runs on two numeric backends: exact rational arithmetic
(``fractions.Fraction``) and IEEE doubles.  Which backend a computation uses
is decided by the type of ``p``: a ``Fraction`` keeps everything exact, a
``float`` routes to the floating-point code paths.
"""

from __future__ import annotations

from fractions import Fraction

# A probability in (0, 1]; Fraction selects the exact backend.
Prob = Fraction | float


def validate_deck_size(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"deck size must be a positive integer, got {n!r}")


def validate_probability(p: Prob) -> None:
    if not isinstance(p, (Fraction, float)):
        raise ValueError(f"probability must be a Fraction or float, got {type(p).__name__}")
    if not 0 < p <= 1:
        raise ValueError(f"probability must lie in (0, 1], got {p}")


def parse_probability(value: str | float | int | Fraction, *, as_float: bool = False) -> Prob:
    """Parse a probability given as "a/b", a decimal string, or a number.

    Strings parse exactly: both "3/10" and "0.3" become Fraction(3, 10), so no
    precision is lost before arithmetic starts.  Pass ``as_float=True`` to
    force the floating-point backend instead.
    """
    p: Prob
    if isinstance(value, bool):
        raise ValueError("probability must be numeric, got a bool")
    if isinstance(value, Fraction):
        p = value
    elif isinstance(value, int):
        p = Fraction(value)
    elif isinstance(value, float):
        p = value
    elif isinstance(value, str):
        try:
            p = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse probability from {value!r}") from exc
    else:
        raise ValueError(f"cannot parse probability from {value!r}")
    if as_float:
        p = float(p)
    validate_probability(p)
    return p


def format_probability(p: Prob) -> str:
    """Render a probability for serialization: "a/b" for rationals, repr for floats."""
    if isinstance(p, Fraction):
        return str(p)
    return repr(p)


def format_value(x) -> str | float:
    """Serialize a single probability value: rational string or plain float."""
    if isinstance(x, Fraction):
        return str(x)
    return float(x)


def parse_value(x) -> Prob:
    """Inverse of :func:`format_value`."""
    if isinstance(x, str):
        return Fraction(x)
    return float(x)
