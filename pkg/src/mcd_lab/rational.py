"""Exact rationals used as monoid elements.

Monoid elements are nonnegative :class:`fractions.Fraction` values. ``Fraction``
already keeps ``gcd(num, den) == 1`` with a positive denominator, so it doubles
as the signed type that algorithms use for intermediate differences; :func:`rat`
is the gate that enforces nonnegativity where a monoid element is expected.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Union

from .errors import DomainError

RatLike = Union[Fraction, int, str]

_RAT_RE = re.compile(r"\s*(\d+)\s*(?:/\s*(\d+)\s*)?\Z")


def rat(x: RatLike) -> Fraction:
    """Coerce ``x`` to a nonnegative Fraction.

    Strings must be ``"n"`` or ``"n/d"``; decimals are rejected so that no
    inexact value can slip in.
    """
    if isinstance(x, str):
        return parse_rat(x)
    if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
        raise DomainError(f"expected an exact rational, got {type(x).__name__}")
    q = Fraction(x)
    if q < 0:
        raise DomainError(f"monoid elements are nonnegative, got {format_rat(q)}")
    return q


def parse_rat(text: str) -> Fraction:
    m = _RAT_RE.match(text)
    if not m:
        raise DomainError(f"not a nonnegative rational of the form n or n/d: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise DomainError(f"zero denominator: {text!r}")
    return Fraction(num, den)


def format_rat(q: Fraction) -> str:
    """Serialize as ``"num/den"``, or ``"num"`` when the denominator is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def num_den(q: RatLike) -> tuple[int, int]:
    q = Fraction(q) if not isinstance(q, str) else parse_rat(q)
    return q.numerator, q.denominator


def int_valuation(n: int, p: int) -> int:
    """Exponent of ``p`` in the nonzero integer ``n``."""
    if n == 0:
        raise DomainError("valuation of zero undefined")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_valuation(q: RatLike, p: int) -> int:
    from .primes import is_prime

    q = Fraction(q) if not isinstance(q, str) else parse_rat(q)
    if q == 0:
        raise DomainError("valuation of zero undefined")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    return int_valuation(q.numerator, p) - int_valuation(q.denominator, p)


def lcm_of(values: Iterable[int]) -> int:
    return math.lcm(1, *values)


def common_denominator(values: Iterable[Fraction]) -> int:
    return lcm_of(Fraction(v).denominator for v in values)
