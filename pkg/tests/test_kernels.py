import os
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from mcd_lab import _kernels
from mcd_lab._kernels import _pykernels

if _kernels._ckernels is None:
    pytest.skip("compiled kernels not built", allow_module_level=True)
ck = _kernels._ckernels

weights_st = st.lists(st.integers(min_value=1, max_value=40), min_size=1, max_size=5)


@settings(max_examples=80)
@given(weights_st, st.integers(min_value=0, max_value=120), st.integers(min_value=0, max_value=3))
def test_dfs_parity(ws, target, limit):
    a, _ = ck.dfs_solve(ws, target, limit, 10**6)
    b, _ = _pykernels.dfs_solve(ws, target, limit, 10**6)
    assert sorted(a) == sorted(b)


@settings(max_examples=80)
@given(weights_st, st.integers(min_value=0, max_value=300))
def test_tables_parity(ws, bound):
    r1, r2 = ck.reach_table(ws, bound), _pykernels.reach_table(ws, bound)
    assert bytes(r1) == bytes(r2)
    assert list(ck.bounded_sums(ws, bound)) == list(_pykernels.bounded_sums(ws, bound))
    members = [i for i, f in enumerate(r1) if f]
    targets = members[-2:]
    m1 = ck.cd_mask(r1, targets, min(targets))
    m2 = _pykernels.cd_mask(r2, targets, min(targets))
    assert bytes(m1) == bytes(m2)
    assert bytes(ck.maximal_mask(m1, ws)) == bytes(_pykernels.maximal_mask(m2, ws))


def test_huge_values_use_python():
    big = 1 << 70
    sols, _ = _kernels.dfs_solve([big, 1], big + 3, 0, 100)
    assert sorted(sols) == [(0, big + 3), (1, 3)]


def test_forced_fallback():
    env = dict(os.environ, MCD_LAB_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from mcd_lab import _kernels; print(_kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_fallback_gives_same_answers():
    code = ("from mcd_lab.oracle import mcd_bf\n"
            "from mcd_lab.spec import grams_classical, generators\n"
            "G = grams_classical(4)\n"
            "print(mcd_bf(['13/30', '23/30'], generators(G)))\n")
    runs = []
    for flag in ("0", "1"):
        env = dict(os.environ, MCD_LAB_PURE_PYTHON=flag)
        runs.append(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                                   text=True, check=True).stdout)
    assert runs[0] == runs[1]
