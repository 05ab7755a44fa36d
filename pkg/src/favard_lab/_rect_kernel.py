"""Exact maximization of cell coverage over a lattice family of Lipschitz graphs.

The family: piecewise linear F with nodes every ``h`` along J, node values on
the lattice ``h * Z`` and consecutive node values at most ``K`` lattice steps
apart. Coverage of F counts the cells of J containing a point with
``|v - F(u)| <= eps``; the optimum over the family is found by dynamic
programming over node values.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def best_coverage(seg, cell, frac, v, n_seg, level0, n_levels, h, K, eps):
    """Maximum number of covered cells.

    Points must be sorted by ``seg``; ``frac`` is the position inside the
    segment in [0, 1] and ``cell`` a global cell index.
    """
    width = 2 * K + 1
    best = np.zeros(n_levels, dtype=np.int64)
    new = np.empty(n_levels, dtype=np.int64)
    cov = np.zeros((n_levels, width), dtype=np.int64)
    stamp = np.full((n_levels, width), -1, dtype=np.int64)
    p = 0
    n_pts = seg.shape[0]
    for k in range(n_seg):
        cov[:, :] = 0
        while p < n_pts and seg[p] == k:
            s = frac[p]
            c = cell[p]
            # F(u) moves at most s*K*h away from the left node value
            reach = eps + s * K * h
            a0 = max(0, math.ceil((v[p] - reach) / h - level0) - 1)
            a1 = min(n_levels - 1, math.floor((v[p] + reach) / h - level0) + 1)
            for a in range(a0, a1 + 1):
                va = (level0 + a) * h
                lo_b = a - K
                hi_b = a + K
                if s <= 0.0:
                    if abs(v[p] - va) > eps:
                        continue
                else:
                    # compare as floats first: dividing by a tiny s overflows int64
                    tlo = ((v[p] - eps - va * (1.0 - s)) / s) / h - level0
                    thi = ((v[p] + eps - va * (1.0 - s)) / s) / h - level0
                    if tlo > hi_b or thi < lo_b:
                        continue
                    if tlo > lo_b:
                        lo_b = math.ceil(tlo)
                    if thi < hi_b:
                        hi_b = math.floor(thi)
                if lo_b < 0:
                    lo_b = 0
                if hi_b > n_levels - 1:
                    hi_b = n_levels - 1
                for b in range(lo_b, hi_b + 1):
                    j = b - a + K
                    if stamp[a, j] != c:
                        stamp[a, j] = c
                        cov[a, j] += 1
            p += 1
        for b in range(n_levels):
            m = -1
            a_lo = b - K if b - K > 0 else 0
            a_hi = b + K if b + K < n_levels - 1 else n_levels - 1
            for a in range(a_lo, a_hi + 1):
                val = best[a] + cov[a, b - a + K]
                if val > m:
                    m = val
            new[b] = m
        best[:] = new
    return best.max()
