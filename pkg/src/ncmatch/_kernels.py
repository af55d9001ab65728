"""Numba kernels for the solver hot loops.

Callers are responsible for sorting (numpy lexsort is faster than
anything we would write here); kernels only scan.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def lis_strict(vals):
    """Length of the longest strictly increasing subsequence of ``vals``.

    Patience piles: ``tails[k]`` holds the smallest possible tail of an
    increasing subsequence of length k + 1; binary search is bisect_left,
    so equal values replace instead of extending (strictness).
    """
    n = vals.shape[0]
    tails = np.empty(n, dtype=vals.dtype)
    size = 0
    for i in range(n):
        x = vals[i]
        lo, hi = 0, size
        while lo < hi:
            mid = (lo + hi) >> 1
            if tails[mid] < x:
                lo = mid + 1
            else:
                hi = mid
        tails[lo] = x
        if lo == size:
            size += 1
    return size


@njit(cache=True)
def lis_strict_parents(vals):
    """As :func:`lis_strict` but tracking one optimal chain.

    Returns (length, last_index, parents); follow ``parents`` backwards
    from ``last_index`` to recover the chain (indices into ``vals``).
    """
    n = vals.shape[0]
    tails = np.empty(n, dtype=vals.dtype)
    tails_idx = np.empty(n, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    size = 0
    for i in range(n):
        x = vals[i]
        lo, hi = 0, size
        while lo < hi:
            mid = (lo + hi) >> 1
            if tails[mid] < x:
                lo = mid + 1
            else:
                hi = mid
        if lo > 0:
            parent[i] = tails_idx[lo - 1]
        tails[lo] = x
        tails_idx[lo] = i
        if lo == size:
            size += 1
    if size == 0:
        return 0, -1, parent
    return size, tails_idx[size - 1], parent


@njit(cache=True)
def chain_dp(arr):
    """Longest chain under strict coordinatewise dominance, O(m^2).

    ``arr`` must be lexicographically sorted so dominators of row i can
    only appear among rows j < i.  Returns (length, last_index, parents).
    """
    m, d = arr.shape
    best = np.ones(m, dtype=np.int64)
    parent = np.full(m, -1, dtype=np.int64)
    ans = 0
    end = -1
    for i in range(m):
        bi = 1
        pi = -1
        for j in range(i - 1, -1, -1):
            if best[j] >= bi:
                ok = True
                for c in range(d):
                    if arr[j, c] >= arr[i, c]:
                        ok = False
                        break
                if ok:
                    bi = best[j] + 1
                    pi = j
        best[i] = bi
        parent[i] = pi
        if bi > ans:
            ans = bi
            end = i
    return ans, end, parent


def warmup() -> None:
    """Force compilation of all kernels for both dtypes they meet."""
    iv = np.array([1, 3, 2], dtype=np.int64)
    fv = np.array([0.1, 0.3, 0.2], dtype=np.float64)
    lis_strict(iv)
    lis_strict(fv)
    lis_strict_parents(iv)
    lis_strict_parents(fv)
    chain_dp(np.array([[1, 1], [2, 2]], dtype=np.int64))
    chain_dp(np.array([[0.1, 0.2], [0.3, 0.4]], dtype=np.float64))
