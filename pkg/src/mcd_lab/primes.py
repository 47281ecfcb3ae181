"""Prime utilities: deterministic primality, prime sequences, small factoring."""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError, TruncationExceeded

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_U64 = 1 << 64


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for every ``n < 2**64``."""
    if n >= _U64:
        raise DomainError("primality is only decided below 2**64")
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class _PrimeTable:
    """Growing list of consecutive primes, extended by segmented sieving."""

    def __init__(self):
        self.primes = [2, 3, 5, 7, 11, 13]

    def _extend(self, limit: int) -> None:
        lo = self.primes[-1] + 1
        if limit < lo:
            return
        seg = bytearray([1]) * (limit - lo + 1)
        for p in self.primes:
            if p * p > limit:
                break
            start = max(p * p, (lo + p - 1) // p * p)
            seg[start - lo::p] = bytes(len(range(start - lo, len(seg), p)))
        # primes above sqrt(limit) bootstrap themselves only if the table already
        # reaches sqrt(limit), which holds because we at most double each time
        self.primes.extend(lo + i for i, flag in enumerate(seg) if flag)

    def nth(self, n: int) -> int:
        while len(self.primes) < n:
            self._extend(self.primes[-1] * 2)
        return self.primes[n - 1]

    def index(self, p: int) -> Optional[int]:
        while self.primes[-1] < p:
            self._extend(self.primes[-1] * 2)
        i = bisect.bisect_left(self.primes, p)
        if i < len(self.primes) and self.primes[i] == p:
            return i + 1
        return None


_TABLE = _PrimeTable()


def nth_prime(n: int) -> int:
    if n < 1:
        raise DomainError("prime indices start at 1")
    return _TABLE.nth(n)


def prime_pi_index(p: int) -> Optional[int]:
    """1-based position of ``p`` among all primes, or None if not prime."""
    return _TABLE.index(p)


NTH_PRIME = "nth-prime"
NTH_ODD_PRIME = "nth-odd-prime"
PREFIX = "prefix"


@dataclass(frozen=True)
class PrimeIndexRule:
    """A prime sequence ``p_1, p_2, ...``: all primes, odd primes, or an explicit prefix."""

    rule: str
    prefix: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rule not in (NTH_PRIME, NTH_ODD_PRIME, PREFIX):
            raise DomainError(f"unknown prime rule {self.rule!r}")
        if self.rule == PREFIX:
            if not self.prefix:
                raise DomainError("explicit prime prefix must be nonempty")
            object.__setattr__(self, "prefix", tuple(int(p) for p in self.prefix))
        elif self.prefix:
            raise DomainError("named prime rules take no prefix")

    @classmethod
    def explicit(cls, primes) -> "PrimeIndexRule":
        return cls(PREFIX, tuple(primes))

    @property
    def is_named(self) -> bool:
        return self.rule != PREFIX

    @property
    def length(self) -> Optional[int]:
        """Number of available terms, or None for an unbounded rule."""
        return len(self.prefix) if self.rule == PREFIX else None

    def nth_of(self, n: int) -> int:
        if n < 1:
            raise DomainError("sequence indices start at 1")
        if self.rule == NTH_PRIME:
            return nth_prime(n)
        if self.rule == NTH_ODD_PRIME:
            return nth_prime(n + 1)
        if n > len(self.prefix):
            raise TruncationExceeded(
                f"index {n} beyond explicit prefix of length {len(self.prefix)}")
        return self.prefix[n - 1]

    def prime_index(self, p: int) -> Optional[int]:
        if not is_prime(p):
            raise DomainError(f"{p} is not prime")
        if self.rule == NTH_PRIME:
            return prime_pi_index(p)
        if self.rule == NTH_ODD_PRIME:
            return None if p == 2 else prime_pi_index(p) - 1
        if p in self.prefix:
            return self.prefix.index(p) + 1
        if p > max(self.prefix):
            raise TruncationExceeded(f"{p} exceeds the explicit prefix maximum {max(self.prefix)}")
        return None

    def to_json(self) -> dict:
        if self.rule == PREFIX:
            return {"prefix": list(self.prefix)}
        return {"rule": self.rule}


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of a positive integer by trial division.

    Adequate for the denominators met at desk scale; a cofactor that is
    neither 1 nor prime after trial division up to 10**6 raises DomainError.
    """
    if n < 1:
        raise DomainError("factorize expects a positive integer")
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f, step = 7, 4
    # wheel over residues coprime to 6
    while f * f <= n and f <= 10**6:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += step
        step = 6 - step
    if n > 1:
        if f * f <= n and not is_prime(n):
            raise DomainError(f"cofactor {n} too large to factor")
        out[n] = out.get(n, 0) + 1
    return dict(sorted(out.items()))
