"""Exact, seed-deterministic samplers for the five random graph models.

Models (all edge coordinates 1-based):

* binomial: each of the prod(n_j) potential edges present independently
  with probability p.
* word: each vertex gets a uniform letter from a k-letter alphabet; the
  edges are exactly the monochromatic d-tuples, so L(G) is the length of
  the longest common subsequence of the d words.
* symmetric: square bipartite; the orbits {(i, j), (j, i)} for i < j are
  present independently with probability p (never any diagonal cell).
* antisymmetric: classes of size 2n; the 4n^2 cells split into 2n^2
  orbits of size two under (i, j) -> (2n-i+1, 2n-j+1) (no cell is fixed
  since 2i = 2n+1 has no integer solution), each orbit present
  independently with probability p.
* oriented: square bipartite; cells (i, j) with i < j present
  independently with probability p, cells with i >= j never.

Bernoulli processes are realized by geometric gap-skipping over a
canonical enumeration (lexicographic cells, or orbit index), which is
exactly equivalent in distribution to per-edge coin flips at O(#edges)
cost.  The word model materializes the d words and joins per-letter
position buckets; an edge-count guard precedes materialization because
|E| grows like prod(n_j) / k^(d-1) and must fail fast rather than
exhaust memory.

All samplers take a ``numpy.random.Generator`` and are pure given
(parameters, generator state); see :mod:`ncmatch.seeds` for how replicate
streams are derived.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ContractViolation, ResourceLimitError
from .graphs import HyperGraph, lexsorted_rows

KINDS = ("binomial", "word", "symmetric", "antisymmetric", "oriented", "permutation")
_P_KINDS = ("binomial", "symmetric", "antisymmetric", "oriented")


@dataclass(frozen=True)
class ModelSpec:
    """Which random model to draw from, plus its parameters.

    ``dims`` always holds the actual color-class sizes (for the
    antisymmetric model that is (2n, 2n) with n the half-size).  The
    permutation kind (first class in order, classes 2..d independent
    uniform permutations) carries neither p nor k.
    """

    kind: str
    dims: tuple[int, ...]
    p: float | None = None
    k: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "dims", tuple(int(n) for n in self.dims))
        if self.kind not in KINDS:
            raise ContractViolation(f"unknown model kind {self.kind!r}")
        if any(n < 1 for n in self.dims):
            raise ContractViolation(f"dims must be positive, got {self.dims}")
        if len(self.dims) < 2:
            raise ContractViolation("need at least two color classes")
        if self.kind in _P_KINDS:
            if self.p is None or self.k is not None:
                raise ContractViolation(f"{self.kind} model takes p only")
            if not 0.0 <= self.p <= 1.0:
                raise ContractViolation(f"p must be in [0, 1], got {self.p}")
        elif self.kind == "word":
            if self.k is None or self.p is not None:
                raise ContractViolation("word model takes k only")
            if self.k < 1:
                raise ContractViolation(f"alphabet size must be >= 1, got {self.k}")
        else:  # permutation
            if self.p is not None or self.k is not None:
                raise ContractViolation("permutation model takes neither p nor k")
        if self.kind in ("symmetric", "antisymmetric", "oriented"):
            if len(self.dims) != 2 or self.dims[0] != self.dims[1]:
                raise ContractViolation(f"{self.kind} model needs square dims, got {self.dims}")
        if self.kind == "antisymmetric" and self.dims[0] % 2 != 0:
            raise ContractViolation("antisymmetric classes have even size 2n")
        if self.kind == "permutation" and len(set(self.dims)) != 1:
            raise ContractViolation("permutation model needs equal class sizes")

    # -- convenience constructors ------------------------------------
    @classmethod
    def binomial(cls, dims: Sequence[int], p: float) -> "ModelSpec":
        return cls("binomial", tuple(dims), p=p)

    @classmethod
    def word(cls, dims: Sequence[int], k: int) -> "ModelSpec":
        return cls("word", tuple(dims), k=k)

    @classmethod
    def symmetric(cls, n: int, p: float) -> "ModelSpec":
        return cls("symmetric", (n, n), p=p)

    @classmethod
    def antisymmetric(cls, half_n: int, p: float) -> "ModelSpec":
        return cls("antisymmetric", (2 * half_n, 2 * half_n), p=p)

    @classmethod
    def oriented(cls, n: int, p: float) -> "ModelSpec":
        return cls("oriented", (n, n), p=p)

    @classmethod
    def permutation(cls, n: int, d: int = 2) -> "ModelSpec":
        return cls("permutation", (n,) * d)

    # -- derived quantities ------------------------------------------
    @property
    def d(self) -> int:
        return len(self.dims)

    @property
    def geometric_mean(self) -> float:
        return float(np.prod([n ** (1.0 / self.d) for n in self.dims]))

    @property
    def internal_parameter(self) -> float | None:
        """t = 1/p for the Bernoulli-type models, t = k for words."""
        if self.kind in _P_KINDS:
            return math.inf if self.p == 0 else 1.0 / self.p
        if self.kind == "word":
            return float(self.k)
        return None

    def with_square_size(self, n: int) -> "ModelSpec":
        """Same model and parameters at a different (square) size."""
        if self.kind == "antisymmetric":
            return ModelSpec(self.kind, (2 * n, 2 * n), p=self.p)
        return ModelSpec(self.kind, (n,) * self.d, p=self.p, k=self.k)

    def params_dict(self) -> dict:
        out: dict = {}
        if self.p is not None:
            out["p"] = self.p
        if self.k is not None:
            out["k"] = self.k
        return out


@dataclass
class WordSample:
    """The d random words plus the hyper-graph they induce."""

    words: tuple[np.ndarray, ...]
    k: int
    graph: HyperGraph


def expected_edges(spec: ModelSpec) -> float:
    """Closed-form E|E| for guard checks (exact for every kind)."""
    cells = float(np.prod([float(n) for n in spec.dims]))
    if spec.kind == "binomial":
        return spec.p * cells
    if spec.kind == "word":
        return cells / spec.k ** (spec.d - 1)
    n = spec.dims[0]
    if spec.kind == "symmetric":
        return spec.p * n * (n - 1)
    if spec.kind == "antisymmetric":
        return spec.p * n * n  # 2 * (n/2)^2 orbits * 2 edges, n = 2 * half
    if spec.kind == "oriented":
        return spec.p * n * (n - 1) / 2.0
    return float(n)  # permutation: always n node-disjoint edges


def _guard(count: float, max_edges: int | None, what: str) -> None:
    if max_edges is not None and count > max_edges:
        raise ResourceLimitError(
            f"{what} edge count {count:.4g} exceeds the cap of {max_edges}"
        )


def _geometric_hits(rng: np.random.Generator, p: float, total: int) -> np.ndarray:
    """Positions in [0, total) of an exact Bernoulli(p) process.

    Gaps between successive hits are iid Geometric(p); drawing them in
    deterministic-size chunks keeps the cost O(p * total + 1).
    """
    if total <= 0 or p <= 0.0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(total, dtype=np.int64)
    chunks = []
    pos = -1
    while True:
        remaining = total - pos - 1
        expect = remaining * p
        size = int(expect + 6.0 * math.sqrt(expect + 1.0)) + 16
        gaps = rng.geometric(p, size=size).astype(np.int64)
        hits = np.cumsum(gaps) + pos
        cut = int(np.searchsorted(hits, total, side="left"))
        if cut < size:
            chunks.append(hits[:cut])
            break
        chunks.append(hits)
        pos = int(hits[-1])
    return np.concatenate(chunks) if len(chunks) > 1 else chunks[0]


def _unrank_cells(idx: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    """Lexicographic linear cell index -> 1-based coordinates."""
    d = len(dims)
    out = np.empty((idx.shape[0], d), dtype=np.int64)
    rest = idx.copy()
    for j in range(d - 1, -1, -1):
        out[:, j] = rest % dims[j] + 1
        rest //= dims[j]
    return out


def sample_binomial(
    dims: Sequence[int],
    p: float,
    rng: np.random.Generator,
    max_edges: int | None = None,
) -> HyperGraph:
    """Each potential edge present independently with probability p."""
    dims = tuple(int(n) for n in dims)
    total = int(np.prod([int(n) for n in dims], dtype=object))
    _guard(p * total, max_edges, "expected")
    idx = _geometric_hits(rng, p, total)
    return HyperGraph(dims, _unrank_cells(idx, dims))


def sample_word(
    dims: Sequence[int],
    k: int,
    rng: np.random.Generator,
    max_edges: int | None = None,
) -> WordSample:
    """Uniform letters on every vertex; edges are the monochromatic tuples."""
    dims = tuple(int(n) for n in dims)
    d = len(dims)
    cells = float(np.prod([float(n) for n in dims]))
    _guard(cells / k ** (d - 1), max_edges, "expected")
    words = tuple(rng.integers(1, k + 1, size=n).astype(np.int64) for n in dims)
    return word_sample_from_words(words, k, max_edges=max_edges)


def word_sample_from_words(
    words: Sequence[Sequence[int]],
    k: int | None = None,
    max_edges: int | None = None,
) -> WordSample:
    """Build the induced graph for explicitly given words (tests use this
    to force specific instances)."""
    arrs = tuple(np.asarray(w, dtype=np.int64) for w in words)
    if k is None:
        k = int(max((int(a.max()) for a in arrs if a.size), default=1))
    dims = tuple(int(a.shape[0]) for a in arrs)
    counts = [np.bincount(a, minlength=k + 1) for a in arrs]
    per_letter = np.ones(k + 1, dtype=np.float64)
    for c in counts:
        per_letter *= c
    total = float(per_letter[1:].sum())
    _guard(total, max_edges, "actual")
    blocks = []
    for letter in range(1, k + 1):
        if per_letter[letter] == 0:
            continue
        positions = [np.flatnonzero(a == letter) + 1 for a in arrs]
        grids = np.meshgrid(*positions, indexing="ij")
        blocks.append(np.stack([g.ravel() for g in grids], axis=1))
    if blocks:
        edges = lexsorted_rows(np.concatenate(blocks).astype(np.int64))
    else:
        edges = np.empty((0, len(dims)), dtype=np.int64)
    return WordSample(arrs, k, HyperGraph(dims, edges))


def _unrank_upper_pairs(t: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Orbit index -> 0-based (i, j) with i < j, in lexicographic order."""
    counts = np.arange(n - 1, 0, -1, dtype=np.int64)
    starts = np.concatenate(([0], np.cumsum(counts)))
    i = np.searchsorted(starts, t, side="right") - 1
    j = i + 1 + (t - starts[i])
    return i, j


def sample_symmetric(
    n: int,
    p: float,
    rng: np.random.Generator,
    max_edges: int | None = None,
) -> HyperGraph:
    """Orbits {(i, j), (j, i)} for i < j, each present with probability p;
    both edges of a chosen orbit are emitted, diagonal cells never."""
    n = int(n)
    total = n * (n - 1) // 2
    _guard(2.0 * p * total, max_edges, "expected")
    t = _geometric_hits(rng, p, total)
    i, j = _unrank_upper_pairs(t, n)
    edges = np.concatenate(
        [np.stack([i + 1, j + 1], axis=1), np.stack([j + 1, i + 1], axis=1)]
    )
    return HyperGraph((n, n), lexsorted_rows(edges))


def sample_oriented(
    n: int,
    p: float,
    rng: np.random.Generator,
    max_edges: int | None = None,
) -> HyperGraph:
    """Cells (i, j) with i < j present independently with probability p."""
    n = int(n)
    total = n * (n - 1) // 2
    _guard(p * total, max_edges, "expected")
    t = _geometric_hits(rng, p, total)
    i, j = _unrank_upper_pairs(t, n)
    # lexicographic orbit enumeration keeps (i+1, j+1) already sorted
    return HyperGraph((n, n), np.stack([i + 1, j + 1], axis=1))


def sample_antisymmetric(
    half_n: int,
    p: float,
    rng: np.random.Generator,
    max_edges: int | None = None,
) -> HyperGraph:
    """Orbits {(i, j), (2n-i+1, 2n-j+1)} over classes of size 2n.

    Canonical representatives are the cells with i <= n, giving exactly
    2n^2 orbits of size two.
    """
    m = int(half_n)
    size = 2 * m
    total = m * size  # representatives: i in [1, m], j in [1, 2m]
    _guard(2.0 * p * total, max_edges, "expected")
    t = _geometric_hits(rng, p, total)
    i = t // size + 1
    j = t % size + 1
    mirror_i = size + 1 - i
    mirror_j = size + 1 - j
    edges = np.concatenate(
        [np.stack([i, j], axis=1), np.stack([mirror_i, mirror_j], axis=1)]
    )
    return HyperGraph((size, size), lexsorted_rows(edges))


def sample_unit_cube(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """n points with iid uniform coordinates in [0, 1)^d, generation order."""
    if n < 0 or d < 1:
        raise ContractViolation(f"need n >= 0 and d >= 1, got n={n}, d={d}")
    return rng.random((int(n), int(d)))


def sample_involution(m: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform fixed-point-free involution of [2m] as a permutation array.

    Sequential pairing: repeatedly take the smallest unpaired element and
    pair it with a uniform choice among the others.  Exactly uniform over
    the (2m-1)!! involutions, O(m) via a swap-pop pool.
    """
    m = int(m)
    if m < 1:
        raise ContractViolation(f"need m >= 1, got {m}")
    size = 2 * m
    pi = np.zeros(size + 1, dtype=np.int64)
    pool = list(range(1, size + 1))
    pos = {x: i for i, x in enumerate(pool)}
    smallest = 1
    while pool:
        a = smallest
        # remove a (always present, always the minimum of the pool)
        ia = pos.pop(a)
        last = pool.pop()
        if ia < len(pool):
            pool[ia] = last
            pos[last] = ia
        r = int(rng.integers(0, len(pool)))
        b = pool[r]
        pos.pop(b)
        last = pool.pop()
        if r < len(pool):
            pool[r] = last
            pos[last] = r
        pi[a] = b
        pi[b] = a
        while smallest <= size and pi[smallest] != 0:
            smallest += 1
    return pi[1:]


def sample_permutation_array(
    n: int, d: int, rng: np.random.Generator
) -> HyperGraph:
    """n node-disjoint edges (j, pi_2(j), ..., pi_d(j)) with independent
    uniform permutations in classes 2..d; L is the d-dimensional LIS."""
    n, d = int(n), int(d)
    if d < 2:
        raise ContractViolation(f"need d >= 2, got {d}")
    edges = np.empty((n, d), dtype=np.int64)
    edges[:, 0] = np.arange(1, n + 1)
    for j in range(1, d):
        edges[:, j] = rng.permutation(n) + 1
    # sorted already: the first column is strictly increasing
    return HyperGraph((n,) * d, edges)


def sample_instance(
    spec: ModelSpec,
    rng: np.random.Generator,
    max_edges: int | None = None,
) -> HyperGraph:
    """Draw one instance of any model kind (word samples return the graph)."""
    if spec.kind == "binomial":
        return sample_binomial(spec.dims, spec.p, rng, max_edges)
    if spec.kind == "word":
        return sample_word(spec.dims, spec.k, rng, max_edges).graph
    if spec.kind == "symmetric":
        return sample_symmetric(spec.dims[0], spec.p, rng, max_edges)
    if spec.kind == "antisymmetric":
        return sample_antisymmetric(spec.dims[0] // 2, spec.p, rng, max_edges)
    if spec.kind == "oriented":
        return sample_oriented(spec.dims[0], spec.p, rng, max_edges)
    return sample_permutation_array(spec.dims[0], spec.d, rng)
