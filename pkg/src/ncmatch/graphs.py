"""d-partite hyper-graphs over ordered color classes.

A graph has d color classes of sizes ``dims = (n_1, ..., n_d)``; vertices
are 1-based within their class.  Edges are d-tuples, one vertex per class,
stored as a single lexicographically sorted, duplicate-free ``(m, d)``
integer array.  Everything here treats the edge list as the graph: the
instances of interest are sparse relative to the ``n_1 * ... * n_d``
potential cells, and all algorithms in this package are edge-list
algorithms (there is deliberately no adjacency structure and no mutation
API; values are immutable after construction and safe to share across
worker processes).

A chain under *strict* dominance (every coordinate strictly increasing)
is exactly a non-crossing matching: comparable edges sharing a vertex
would be equal in that coordinate, so node-disjointness forces
strictness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ContractViolation, ValidationError

Edge = tuple[int, ...]


def _as_edge_array(edges, d: int) -> np.ndarray:
    arr = np.asarray(edges, dtype=np.int64)
    if arr.size == 0:
        return np.empty((0, d), dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != d:
        raise ValidationError(f"edge array must have shape (m, {d}), got {arr.shape}")
    return arr


def lexsorted_rows(arr: np.ndarray) -> np.ndarray:
    """Rows of ``arr`` in lexicographic order (first column dominant)."""
    if arr.shape[0] <= 1:
        return arr
    order = np.lexsort(arr.T[::-1])
    return arr[order]


@dataclass(eq=False)
class HyperGraph:
    """A d-partite hyper-graph with a sorted edge array.

    ``edges`` must be lexicographically sorted and duplicate-free with all
    coordinates in range; use :func:`validate` to check, or
    :meth:`from_edges` to build from unsorted input.
    """

    dims: tuple[int, ...]
    edges: np.ndarray

    def __post_init__(self) -> None:
        self.dims = tuple(int(n) for n in self.dims)
        self.edges = _as_edge_array(self.edges, len(self.dims))
        self.edges.setflags(write=False)

    @classmethod
    def from_edges(cls, dims: Sequence[int], edges: Iterable[Sequence[int]]) -> "HyperGraph":
        arr = _as_edge_array(list(edges), len(dims))
        g = cls(tuple(dims), lexsorted_rows(arr))
        validate(g)
        return g

    @property
    def d(self) -> int:
        return len(self.dims)

    @property
    def num_edges(self) -> int:
        return self.edges.shape[0]

    def edge_tuples(self) -> list[Edge]:
        return [tuple(int(v) for v in row) for row in self.edges]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HyperGraph)
            and self.dims == other.dims
            and self.edges.shape == other.edges.shape
            and bool(np.array_equal(self.edges, other.edges))
        )

    def __repr__(self) -> str:
        return f"HyperGraph(dims={self.dims}, m={self.num_edges})"


@dataclass
class MatchingResult:
    """Size of a largest non-crossing matching, optionally with a witness
    chain (strictly dominance-increasing, node-disjoint edges)."""

    length: int
    witness: list[Edge] | None = None


def strictly_dominates(e: Sequence[int], f: Sequence[int]) -> bool:
    """True iff every coordinate of ``f`` strictly exceeds that of ``e``.

    Equality in any coordinate means a shared vertex, which a matching
    cannot contain, hence the strict form.
    """
    if len(e) != len(f):
        raise ContractViolation(f"dimension mismatch: {len(e)} vs {len(f)}")
    return all(a < b for a, b in zip(e, f))


def validate(g: HyperGraph) -> None:
    """Check all HyperGraph invariants, raising on the first violation.

    Raises ValidationError naming the index of the offending edge for
    out-of-range coordinates, unsorted edge order, or duplicates.
    """
    if g.d < 2:
        raise ValidationError(f"dimension must be >= 2, got {g.d}")
    if any(n < 1 for n in g.dims):
        raise ValidationError(f"dims must be positive, got {g.dims}")
    e = g.edges
    if e.shape[0] == 0:
        return
    for j, n in enumerate(g.dims):
        col = e[:, j]
        bad = np.flatnonzero((col < 1) | (col > n))
        if bad.size:
            i = int(bad[0])
            raise ValidationError(
                f"edge {i}: coordinate {j} = {int(col[i])} out of range [1, {n}]"
            )
    if e.shape[0] > 1:
        prev, nxt = e[:-1], e[1:]
        # first differing column decides the lexicographic comparison
        diff = prev != nxt
        any_diff = diff.any(axis=1)
        dup = np.flatnonzero(~any_diff)
        if dup.size:
            raise ValidationError(f"duplicate edge at index {int(dup[0]) + 1}")
        first = np.argmax(diff, axis=1)
        rows = np.arange(e.shape[0] - 1)
        descending = prev[rows, first] > nxt[rows, first]
        bad = np.flatnonzero(any_diff & descending)
        if bad.size:
            raise ValidationError(f"edges not in lexicographic order at index {int(bad[0]) + 1}")


def reduce_degree_one(g: HyperGraph) -> HyperGraph:
    """Subgraph keeping only edges all of whose endpoints have degree 1.

    Equivalently, removes every edge incident to a vertex of degree >= 2.
    Dims are unchanged; the surviving edges are pairwise node-disjoint.
    """
    e = g.edges
    if e.shape[0] == 0:
        return HyperGraph(g.dims, e)
    keep = np.ones(e.shape[0], dtype=bool)
    for j, n in enumerate(g.dims):
        counts = np.bincount(e[:, j], minlength=n + 1)
        keep &= counts[e[:, j]] == 1
    return HyperGraph(g.dims, e[keep])


def orient_symmetric(g: HyperGraph) -> HyperGraph:
    """Delete all edges (x, y) with x >= y from a symmetric bipartite graph.

    Requires d = 2, square dims, a symmetric edge set ((x, y) present iff
    (y, x) is) and no diagonal cells.  The result O keeps one edge per
    symmetric pair; L(O) = L(G) because :func:`fold_matching` carries any
    non-crossing matching of G to one of O of equal size.
    """
    if g.d != 2 or g.dims[0] != g.dims[1]:
        raise ContractViolation(f"orient_symmetric needs a square bipartite graph, got dims={g.dims}")
    e = g.edges
    if np.any(e[:, 0] == e[:, 1]):
        raise ContractViolation("diagonal edge present; symmetric model excludes cells (i, i)")
    swapped = lexsorted_rows(e[:, ::-1])
    if not np.array_equal(e, swapped):
        raise ContractViolation("edge set is not symmetric under (x, y) -> (y, x)")
    return HyperGraph(g.dims, e[e[:, 0] < e[:, 1]])


def fold_matching(matching: Iterable[Sequence[int]]) -> list[Edge]:
    """Map a matching of a symmetric graph onto the oriented graph.

    Each edge (x, y) goes to (min(x, y), max(x, y)); for a non-crossing
    matching this preserves size, strict comparability and disjointness.
    """
    return [(min(int(x), int(y)), max(int(x), int(y))) for x, y in matching]


def induced_subgraph(g: HyperGraph, ranges: Sequence[Sequence[int]]) -> HyperGraph:
    """Induced subgraph on per-class vertex subsets, re-indexed by rank.

    ``ranges[j]`` is a sorted list of 1-based vertices of class j; kept
    edges are those with every coordinate in its subset, and coordinate v
    becomes the rank of v within ``ranges[j]`` (again 1-based).
    """
    if len(ranges) != g.d:
        raise ContractViolation(f"need {g.d} vertex subsets, got {len(ranges)}")
    subsets = []
    for j, r in enumerate(ranges):
        arr = np.asarray(r, dtype=np.int64)
        if arr.size and (np.any(arr < 1) or np.any(arr > g.dims[j])):
            raise ContractViolation(f"subset for class {j} out of range [1, {g.dims[j]}]")
        if np.any(np.diff(arr) <= 0):
            raise ContractViolation(f"subset for class {j} must be strictly sorted")
        subsets.append(arr)
    new_dims = tuple(len(s) for s in subsets)
    e = g.edges
    keep = np.ones(e.shape[0], dtype=bool)
    for j, s in enumerate(subsets):
        keep &= np.isin(e[:, j], s)
    kept = e[keep]
    out = np.empty_like(kept)
    for j, s in enumerate(subsets):
        out[:, j] = np.searchsorted(s, kept[:, j]) + 1
    # rank re-indexing is monotone, so lexicographic order is preserved
    return HyperGraph(new_dims, out)
