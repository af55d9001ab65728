"""Block machinery: equal splits of a hyper-graph and greedy chain partitions.

Two constructions live here.  ``split_into_blocks`` cuts each color class
into q consecutive runs of floor(n_j / q) vertices (trailing remainder
vertices are dropped and never enter any block) and induces the q
"diagonal" subgraphs; summing L over the blocks lower-bounds L of the
whole graph.  ``partition_matching`` decomposes a chain J into maximal
consecutive blocks limited by an edge count cap and a per-coordinate
vertex span cap, the greedy process being deterministic: each block is
extended to the last edge that still satisfies both caps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ContractViolation
from .graphs import Edge, HyperGraph, induced_subgraph

PartitionType = tuple


@dataclass
class BlockSplit:
    """q vertex-disjoint induced blocks of equal per-class size."""

    q: int
    block_dims: tuple[int, ...]
    ranges: list[list[np.ndarray]]  # [block][class] -> 1-based vertex ids
    blocks: list[HyperGraph]


@dataclass
class BlockPartition:
    """Greedy partition of a chain into consecutive blocks.

    ``bounds[i] = (lo, hi)`` are inclusive indices into the source chain;
    block i covers edges lo..hi, has s_i = hi - lo + 1 <= s_max edges and
    per-coordinate span chain[hi] - chain[lo] <= span_cap.
    """

    chain: np.ndarray
    s_max: int
    span_cap: int
    bounds: list[tuple[int, int]]

    @property
    def q(self) -> int:
        return len(self.bounds)

    def block_sizes(self) -> list[int]:
        return [hi - lo + 1 for lo, hi in self.bounds]

    def first_edges(self) -> list[Edge]:
        return [tuple(int(v) for v in self.chain[lo]) for lo, _ in self.bounds]

    def last_edges(self) -> list[Edge]:
        return [tuple(int(v) for v in self.chain[hi]) for _, hi in self.bounds]


def split_into_blocks(g: HyperGraph, q: int) -> BlockSplit:
    """Split each class into q consecutive runs of floor(n_j / q) vertices
    and induce the diagonal blocks."""
    q = int(q)
    if q < 1 or q > min(g.dims):
        raise ContractViolation(f"need 1 <= q <= min(dims) = {min(g.dims)}, got {q}")
    block_dims = tuple(n // q for n in g.dims)
    ranges: list[list[np.ndarray]] = []
    blocks: list[HyperGraph] = []
    for i in range(q):
        subsets = [
            np.arange(i * npr + 1, (i + 1) * npr + 1, dtype=np.int64)
            for npr in block_dims
        ]
        ranges.append(subsets)
        blocks.append(induced_subgraph(g, subsets))
    return BlockSplit(q, block_dims, ranges, blocks)


def _require_chain(chain: np.ndarray) -> None:
    if chain.shape[0] > 1:
        diffs = chain[1:] - chain[:-1]
        if not np.all(diffs > 0):
            bad = int(np.flatnonzero(~np.all(diffs > 0, axis=1))[0])
            raise ContractViolation(
                f"input is not a strict chain at position {bad} -> {bad + 1}"
            )


def partition_matching(
    chain: Sequence[Sequence[int]] | np.ndarray, s_max: int, span_cap: int
) -> BlockPartition:
    """Greedy maximal blocks over a dominance-sorted chain of edges.

    Starting from the first uncovered edge e, the block extends to the
    last edge f with at most ``s_max`` edges in [e, f] and
    f[j] - e[j] <= ``span_cap`` for every coordinate j.  Both conditions
    are monotone along a chain, so a linear scan is exact.
    """
    if s_max < 1:
        raise ContractViolation(f"s_max must be >= 1, got {s_max}")
    if span_cap < 0:
        raise ContractViolation(f"span_cap must be >= 0, got {span_cap}")
    arr = np.asarray(chain, dtype=np.int64)
    if arr.size == 0:
        return BlockPartition(arr.reshape(0, 0), s_max, span_cap, [])
    if arr.ndim != 2:
        raise ContractViolation("chain must be a list of equal-length edges")
    _require_chain(arr)
    m = arr.shape[0]
    bounds: list[tuple[int, int]] = []
    lo = 0
    while lo < m:
        hi = lo
        while (
            hi + 1 < m
            and hi + 1 - lo + 1 <= s_max
            and np.all(arr[hi + 1] - arr[lo] <= span_cap)
        ):
            hi += 1
        bounds.append((lo, hi))
        lo = hi + 1
    return BlockPartition(arr, s_max, span_cap, bounds)


def partition_type(p: BlockPartition) -> PartitionType:
    """The flattened (3q)-tuple (e_1, e~_1, s_1, ..., e_q, e~_q, s_q)."""
    out: list = []
    for (lo, hi) in p.bounds:
        out.append(tuple(int(v) for v in p.chain[lo]))
        out.append(tuple(int(v) for v in p.chain[hi]))
        out.append(hi - lo + 1)
    return tuple(out)


def bounds_from_type(t: PartitionType, chain: np.ndarray) -> list[tuple[int, int]]:
    """Reconstruct block boundaries from a type against its source chain."""
    arr = np.asarray(chain, dtype=np.int64)
    rows = {tuple(int(v) for v in row): i for i, row in enumerate(arr)}
    if len(t) % 3 != 0:
        raise ContractViolation("type length must be a multiple of 3")
    bounds = []
    for i in range(0, len(t), 3):
        e, e_last, s = t[i], t[i + 1], t[i + 2]
        if e not in rows or e_last not in rows:
            raise ContractViolation(f"type endpoint {e} or {e_last} not in chain")
        lo, hi = rows[e], rows[e_last]
        if hi - lo + 1 != s:
            raise ContractViolation(f"type size {s} inconsistent with endpoints")
        bounds.append((lo, hi))
    return bounds


def verify_partition_bounds(p: BlockPartition, n_mean: float, l: float) -> dict:
    """Report q against the N/l <= q <= 3N/l band.

    Report-only: the band is a theorem only in the regime where the caps
    came from (l = t^alpha, span cap ~ t^(eta+alpha), chain length at
    least c*N/t^lambda with t^(lambda-alpha) < c/2 and a balanced vertex
    sum), so callers assert ``ok`` only when they built such an instance.
    """
    lower = n_mean / l
    upper = 3.0 * n_mean / l
    q = p.q
    return {
        "q": q,
        "lower": lower,
        "upper": upper,
        "ok": bool(lower <= q <= upper),
    }


def _exact(x) -> Fraction:
    return Fraction(x) if not isinstance(x, Fraction) else x


def product_inequalities_check(x) -> bool:
    """Check the two product inequalities on positive input, exactly.

    1-D input x (all entries >= 1 in every intended use; entries below 1
    can genuinely falsify the first inequality for d >= 3):

        prod(x_j - 1) >= prod(x_j) - (sum x_j)^(d-1)

    2-D input (q rows, d columns), the generalized Hoelder inequality:

        (sum_i prod_j x_ij)^d <= prod_j sum_i x_ij^d

    Evaluation uses exact rational arithmetic, so near-equality cases
    (e.g. the single-row Hoelder equality) are decided without float
    cancellation.  Nonpositive inputs raise; returns the truth value.
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.size == 0:
        raise ContractViolation("empty input")
    if np.any(arr <= 0):
        raise ContractViolation("inputs must be positive")
    if arr.ndim == 1:
        vals = [_exact(float(v)) for v in arr]
        d = len(vals)
        prod_minus = Fraction(1)
        prod_all = Fraction(1)
        total = Fraction(0)
        for v in vals:
            prod_minus *= v - 1
            prod_all *= v
            total += v
        return prod_minus >= prod_all - total ** (d - 1)
    if arr.ndim == 2:
        q, d = arr.shape
        rows = [[_exact(float(v)) for v in row] for row in arr]
        lhs = Fraction(0)
        for row in rows:
            prod = Fraction(1)
            for v in row:
                prod *= v
            lhs += prod
        lhs = lhs ** d
        rhs = Fraction(1)
        for j in range(d):
            col = Fraction(0)
            for i in range(q):
                col += rows[i][j] ** d
            rhs *= col
        return lhs <= rhs
    raise ContractViolation(f"expected a vector or a matrix, got ndim={arr.ndim}")
