"""Pure-Python search kernels.

Every function works on positive integer weights (generators scaled by a
common denominator).  Tables are ``bytearray`` objects holding 0/1 per cell;
internally the sieve uses Python big integers as bitsets, which keeps the
fallback usable at the sizes the test-suite needs.
"""

from __future__ import annotations

from math import gcd

from ..errors import SearchOverflow

_TO01 = bytes.maketrans(b"01", b"\x00\x01")
_FROM01 = bytes.maketrans(b"\x00\x01", b"01")


def _bits_to_table(bits: int, size: int) -> bytearray:
    s = bin(bits)[2:].zfill(size)[::-1].encode("ascii")
    return bytearray(s[:size].translate(_TO01))


def _table_to_bits(table) -> int:
    if not table:
        return 0
    return int(bytes(table).translate(_FROM01)[::-1], 2)


def dfs_solve(weights, target, limit=0, node_cap=10**7):
    """All coefficient vectors ``c >= 0`` with ``sum(c[i] * weights[i]) == target``.

    Branches on the weights in the given order.  A branch is cut as soon as
    its residual is not divisible by the gcd of the remaining weights, which
    encodes every valuation obstruction at once.  Returns ``(solutions, nodes)``.
    ``limit > 0`` stops after that many solutions.
    """
    n = len(weights)
    if target < 0:
        return [], 0
    if n == 0:
        return ([()] if target == 0 else []), 1
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = gcd(weights[i], suffix[i + 1])
    if target % suffix[0]:
        return [], 1
    sols: list[tuple[int, ...]] = []
    coeffs = [0] * n
    nodes = 0

    def rec(i, r):
        nonlocal nodes
        w = weights[i]
        if i == n - 1:
            nodes += 1
            if r % w == 0:
                coeffs[i] = r // w
                sols.append(tuple(coeffs))
                return limit and len(sols) >= limit
            return False
        g = suffix[i + 1]
        # c*w == r (mod g): first admissible c and the stride between them
        step = g // gcd(w, g)
        c0 = _first_coeff(w, r, g)
        if c0 is None:
            return False
        c = c0
        while c * w <= r:
            nodes += 1
            if nodes > node_cap:
                raise SearchOverflow(f"DFS exceeded node cap {node_cap}", nodes)
            coeffs[i] = c
            if rec(i + 1, r - c * w):
                return True
            c += step
        return False

    rec(0, target)
    return sols, nodes


def _first_coeff(w, r, g):
    """Smallest c >= 0 with c*w = r (mod g), or None."""
    h = gcd(w, g)
    if r % h:
        return None
    m = g // h
    if m == 1:
        return 0
    return (r // h) * pow(w // h, -1, m) % m


def reach_table(weights, bound, node_cap=10**7):
    """Cell ``t`` is 1 iff ``t`` is a nonnegative combination of the weights."""
    if bound < 0:
        return bytearray()
    size = bound + 1
    if size > node_cap:
        raise SearchOverflow(f"sieve of {size} cells exceeds node cap {node_cap}", size)
    mask = (1 << size) - 1
    bits = 1
    for w in weights:
        shift = w
        while shift <= bound:
            bits |= (bits << shift) & mask
            shift <<= 1
    return _bits_to_table(bits, size)


def bounded_sums(weights, bound, node_cap=10**7):
    """Sorted distinct combinations of the weights not exceeding ``bound``."""
    if bound < 0:
        return []
    values = {0}
    nodes = 0
    for w in weights:
        out = set()
        for v in values:
            while v <= bound:
                out.add(v)
                v += w
                nodes += 1
            if nodes > node_cap:
                raise SearchOverflow(f"enumeration exceeded node cap {node_cap}", nodes)
        values = out
    return sorted(values)


def cd_mask(reach, targets, upto):
    """Cell ``d`` (``0 <= d <= upto``) is 1 iff ``d`` and every ``t - d`` are reachable."""
    size = upto + 1
    acc = _table_to_bits(reach[:size])
    for t in targets:
        # bit d of the reversed prefix [0..t] is reach[t - d]
        rev = _table_to_bits(reach[t::-1] if t >= 0 else b"")
        acc &= rev
    return _bits_to_table(acc & ((1 << size) - 1), size)


def maximal_mask(mask, weights):
    """Cells of ``mask`` with no ``d + w`` also in ``mask`` for any weight ``w``."""
    size = len(mask)
    bits = _table_to_bits(mask)
    blocked = 0
    for w in weights:
        blocked |= bits >> w
    return _bits_to_table(bits & ~blocked & ((1 << size) - 1), size)
