"""Compiled hit test for the Buffon curve experiment on square sets.

Membership is constant on the cells of the ``denom x denom`` grid, so a
translate of the curve is traced node by node and, between consecutive nodes
whose cells are neither equal nor edge-adjacent, bisected on a finer
precomputed parameter grid until they are.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _occupied(ci, cj, denom, keys, table):
    if ci < 0 or cj < 0 or ci >= denom or cj >= denom:
        return False
    if table.shape[0] == denom:
        return table[ci, cj] != 0
    code = ci * denom + cj
    lo = 0
    hi = keys.shape[0]
    while lo < hi:
        mid = (lo + hi) >> 1
        if keys[mid] < code:
            lo = mid + 1
        else:
            hi = mid
    return lo < keys.shape[0] and keys[lo] == code


@njit(cache=True, nogil=True)
def _cell(v, denom):
    return np.int64(np.floor(v * denom))


@njit(cache=True, nogil=True)
def _needs_split(ai, aj, bi, bj):
    di = abs(ai - bi)
    dj = abs(aj - bj)
    return di + dj > 1


@njit(cache=True, nogil=True)
def count_hits(alphas, betas, t_fine, phi_fine, stride, keys, table, denom, x_lo, x_hi):
    """Number of (alpha, beta) whose curve translate meets an occupied cell.

    ``t_fine``/``phi_fine`` sample the curve on a grid whose every
    ``stride``-th entry is a coarse node. ``table`` is a dense occupancy
    grid when its side equals ``denom``; otherwise the sorted ``keys`` are
    binary searched.
    """
    n_fine = t_fine.shape[0]
    n_coarse = (n_fine - 1) // stride + 1
    stack_lo = np.empty(64, dtype=np.int64)
    stack_hi = np.empty(64, dtype=np.int64)
    hits = 0
    for s in range(alphas.shape[0]):
        a = alphas[s]
        b = betas[s]
        # coarse nodes whose x lies within one node of [x_lo, x_hi]
        dt = t_fine[stride] - t_fine[0]
        k0 = int(np.floor((x_lo - a - t_fine[0]) / dt)) - 1
        k1 = int(np.ceil((x_hi - a - t_fine[0]) / dt)) + 1
        if k0 < 0:
            k0 = 0
        if k1 > n_coarse - 1:
            k1 = n_coarse - 1
        if k0 > k1:
            continue
        hit = False
        pi = np.int64(0)
        pj = np.int64(0)
        for k in range(k0, k1 + 1):
            f = k * stride
            ci = _cell(a + t_fine[f], denom)
            cj = _cell(b + phi_fine[f], denom)
            if k > k0 and ci == pi and cj == pj:
                continue
            if _occupied(ci, cj, denom, keys, table):
                hit = True
                break
            if k > k0 and _needs_split(pi, pj, ci, cj):
                stack_lo[0] = f - stride
                stack_hi[0] = f
                top = 1
                while top > 0 and not hit:
                    top -= 1
                    lo = stack_lo[top]
                    hi = stack_hi[top]
                    if hi - lo < 2:
                        continue
                    mid = (lo + hi) >> 1
                    mi = _cell(a + t_fine[mid], denom)
                    mj = _cell(b + phi_fine[mid], denom)
                    if _occupied(mi, mj, denom, keys, table):
                        hit = True
                        break
                    li = _cell(a + t_fine[lo], denom)
                    lj = _cell(b + phi_fine[lo], denom)
                    hi_i = _cell(a + t_fine[hi], denom)
                    hi_j = _cell(b + phi_fine[hi], denom)
                    if _needs_split(li, lj, mi, mj) and top < 63:
                        stack_lo[top] = lo
                        stack_hi[top] = mid
                        top += 1
                    if _needs_split(mi, mj, hi_i, hi_j) and top < 63:
                        stack_lo[top] = mid
                        stack_hi[top] = hi
                        top += 1
                if hit:
                    break
            pi = ci
            pj = cj
        if hit:
            hits += 1
    return hits
