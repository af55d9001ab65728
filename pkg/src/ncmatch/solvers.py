"""Exact computation of L(G), the largest non-crossing matching size.

Strategy per dimension:

* d = 2: sort edges by (first coordinate ascending, second descending),
  then take the longest strictly increasing subsequence of the second
  coordinates with patience piles, O(m log m).  The descending tie-break
  stops two edges sharing a first coordinate from chaining.
* d >= 3: lexicographic sort plus an O(m^2) dominance DP.  Exact and
  simple; large-scale experiments all live on the d = 2 fast path.
* `brute_force_lnm` is the independent oracle: plain exhaustive DFS over
  all chains, no shared code with the solvers it checks.

Real-valued point sets reuse the same kernels with exact float
comparison; ties (probability zero for the samplers here) resolve as
non-dominating, which is the conservative reading of strictness.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import _kernels
from .errors import ContractViolation, ResourceLimitError
from .graphs import Edge, HyperGraph, MatchingResult, lexsorted_rows, strictly_dominates

BRUTE_FORCE_EDGE_CAP = 22
CHAIN_DP_POINT_CAP = 30_000


def _pairs_array(edges) -> np.ndarray:
    arr = np.asarray(edges)
    if arr.size == 0:
        return np.empty((0, 2))
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ContractViolation(f"expected (m, 2) pairs, got shape {arr.shape}")
    return arr


def _sort_for_lis(arr: np.ndarray) -> np.ndarray:
    # a ascending, b descending within equal a
    order = np.lexsort((-arr[:, 1], arr[:, 0]))
    return arr[order]


def lis_strict_2d(edges) -> int:
    """Longest chain of (a, b) pairs under strict dominance in both rows.

    Duplicates are allowed in the input; they can never co-occur in a
    chain.
    """
    arr = _pairs_array(edges)
    if arr.shape[0] == 0:
        return 0
    return int(_kernels.lis_strict(np.ascontiguousarray(_sort_for_lis(arr)[:, 1])))


def _lis_2d_witness(arr: np.ndarray) -> tuple[int, list[Edge]]:
    s = _sort_for_lis(arr)
    length, end, parent = _kernels.lis_strict_parents(np.ascontiguousarray(s[:, 1]))
    idx = []
    i = end
    while i >= 0:
        idx.append(i)
        i = int(parent[i])
    idx.reverse()
    return int(length), [tuple(int(v) for v in s[i]) for i in idx]


def longest_chain_dd(items) -> int:
    """Longest strict-dominance chain of d-tuples via the O(m^2) DP."""
    arr = np.asarray(items)
    if arr.size == 0:
        return 0
    if arr.ndim != 2 or arr.shape[1] < 2:
        raise ContractViolation(f"expected (m, d) tuples with d >= 2, got shape {arr.shape}")
    length, _, _ = _kernels.chain_dp(np.ascontiguousarray(lexsorted_rows(arr)))
    return int(length)


def _chain_dd_witness(arr: np.ndarray) -> tuple[int, list[Edge]]:
    s = lexsorted_rows(arr)
    length, end, parent = _kernels.chain_dp(np.ascontiguousarray(s))
    idx = []
    i = end
    while i >= 0:
        idx.append(i)
        i = int(parent[i])
    idx.reverse()
    return int(length), [tuple(int(v) for v in s[i]) for i in idx]


def longest_noncrossing_matching(g: HyperGraph, want_witness: bool = False) -> MatchingResult:
    """Exact L(G), dispatching on dimension; the witness, when requested,
    is one optimal chain (optima are not unique)."""
    e = g.edges
    if e.shape[0] == 0:
        return MatchingResult(0, [] if want_witness else None)
    if not want_witness:
        if g.d == 2:
            return MatchingResult(lis_strict_2d(e))
        return MatchingResult(longest_chain_dd(e))
    if g.d == 2:
        length, wit = _lis_2d_witness(e)
    else:
        length, wit = _chain_dd_witness(e)
    return MatchingResult(length, wit)


def longest_chain_points(points: np.ndarray) -> int:
    """Longest strict chain among real points in [0, 1]^d.

    d = 1 degenerates to the number of distinct values (a total order up
    to ties, and ties do not chain).
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.size == 0:
        return 0
    if pts.ndim != 2:
        raise ContractViolation(f"expected (n, d) points, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise ContractViolation("point coordinates must be finite")
    n, d = pts.shape
    if d == 1:
        return int(np.unique(pts[:, 0]).size)
    if d == 2:
        return lis_strict_2d(pts)
    if n > CHAIN_DP_POINT_CAP:
        raise ResourceLimitError(
            f"chain DP is quadratic; n={n} exceeds the cap of {CHAIN_DP_POINT_CAP} points for d>=3"
        )
    return longest_chain_dd(pts)


def lis_permutation(pi: Sequence[int]) -> int:
    """Longest strictly increasing subsequence of a permutation of [n]."""
    arr = np.asarray(pi, dtype=np.int64)
    if arr.ndim != 1:
        raise ContractViolation("permutation must be one-dimensional")
    n = arr.shape[0]
    if n and not np.array_equal(np.sort(arr), np.arange(1, n + 1)):
        raise ContractViolation("input is not a permutation of [n]")
    if n == 0:
        return 0
    return int(_kernels.lis_strict(arr))


def brute_force_lnm(g: HyperGraph) -> int:
    """Oracle: exhaustive DFS over every chain of edges.

    Exponential on purpose (it shares no structure with the DP/patience
    paths it cross-checks), hence the hard cap on edge count.
    """
    m = g.num_edges
    if m > BRUTE_FORCE_EDGE_CAP:
        raise ResourceLimitError(
            f"brute force capped at {BRUTE_FORCE_EDGE_CAP} edges, got {m}"
        )
    edges = g.edge_tuples()

    def extend(last: int, depth: int) -> int:
        best = depth
        for nxt in range(last + 1, m):
            if strictly_dominates(edges[last], edges[nxt]):
                got = extend(nxt, depth + 1)
                if got > best:
                    best = got
        return best

    best = 0
    for start in range(m):
        got = extend(start, 1)
        if got > best:
            best = got
    return best


def validate_witness(g: HyperGraph, result: MatchingResult) -> None:
    """Raise unless the witness is a chain of g's edges of stated length."""
    if result.witness is None:
        return
    if len(result.witness) != result.length:
        raise ContractViolation(
            f"witness length {len(result.witness)} != reported {result.length}"
        )
    present = set(g.edge_tuples())
    for e in result.witness:
        if tuple(e) not in present:
            raise ContractViolation(f"witness edge {e} not in graph")
    for a, b in zip(result.witness, result.witness[1:]):
        if not strictly_dominates(a, b):
            raise ContractViolation(f"witness not strictly increasing at {a} -> {b}")
