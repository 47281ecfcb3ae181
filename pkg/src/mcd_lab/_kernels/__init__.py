"""Search kernels with a compiled backend and a pure-Python fallback.

The compiled extension is used when it imported and every value involved
fits comfortably in 63 bits; otherwise calls go to the Python backend.  Set
``MCD_LAB_PURE_PYTHON=1`` to force the fallback for the whole process.
"""

from __future__ import annotations

import os

from . import _pykernels

_LIMIT = 1 << 62

try:
    if os.environ.get("MCD_LAB_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-Python backend forced")
    from . import _ckernels
except ImportError:
    _ckernels = None

BACKEND = "compiled" if _ckernels is not None else "python"


def _fits(*values) -> bool:
    return all(v < _LIMIT for v in values)


def _pick(weights, *values):
    if _ckernels is None:
        return _pykernels
    if weights and not _fits(max(weights) * 2, *(abs(v) * 2 for v in values)):
        return _pykernels
    return _ckernels


def dfs_solve(weights, target, limit=0, node_cap=10**7):
    return _pick(weights, target).dfs_solve(list(weights), target, limit, node_cap)


def reach_table(weights, bound, node_cap=10**7):
    return _pick(weights, bound).reach_table(list(weights), bound, node_cap)


def bounded_sums(weights, bound, node_cap=10**7):
    return _pick(weights, bound).bounded_sums(list(weights), bound, node_cap)


def cd_mask(reach, targets, upto):
    targets = list(targets)
    if any(t >= len(reach) for t in targets) or upto > min(targets, default=upto):
        raise ValueError("table too short for the requested targets")
    return _pick([], *targets).cd_mask(reach, targets, upto)


def maximal_mask(mask, weights):
    return _pick(list(weights)).maximal_mask(mask, list(weights))


__all__ = ["BACKEND", "dfs_solve", "reach_table", "bounded_sums", "cd_mask", "maximal_mask"]
