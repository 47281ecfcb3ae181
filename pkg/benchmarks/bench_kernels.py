"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Workloads come from the Grams K=4 and M_P K=6 truncations used by the tests.
"""

from __future__ import annotations

import argparse
import timeit
from fractions import Fraction

from mcd_lab._kernels import _ckernels, _pykernels
from mcd_lab.rational import common_denominator
from mcd_lab.spec import generators, grams_classical, m_p


def _weights(spec):
    gens = generators(spec)
    L = common_denominator(gens)
    return [int(g * L) for g in gens], L


def workloads():
    gw, gL = _weights(grams_classical(4))
    mw, mL = _weights(m_p(6))
    g_order = sorted(gw, reverse=True)
    bound = int(Fraction(23, 30) * gL)
    targets = [int(Fraction(13, 30) * gL), bound]

    def cd_args(mod):
        return mod.reach_table(gw, bound), targets, min(targets)

    return {
        "dfs_solve (grams, 4)": lambda mod: mod.dfs_solve(g_order, 4 * gL, 0, 10**8),
        "dfs_solve (m_p, 1)": lambda mod: mod.dfs_solve(sorted(mw, reverse=True), mL, 0, 10**8),
        "reach_table (m_p, 1/2)": lambda mod: mod.reach_table(mw, mL // 2, 10**8),
        "bounded_sums (grams, 1)": lambda mod: mod.bounded_sums(gw, gL, 10**8),
        "cd_mask (grams)": lambda mod: mod.cd_mask(*cd_args(mod)),
        "maximal_mask (grams)": lambda mod: mod.maximal_mask(mod.cd_mask(*cd_args(mod)), gw),
    }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels unavailable; nothing to compare")
        return 1
    print(f"{'workload':34} {'compiled s':>11} {'python s':>10} {'speedup':>8}")
    for name, fn in workloads().items():
        tc = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat))
        tp = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        print(f"{name:34} {tc:11.4f} {tp:10.4f} {tp / tc:7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
