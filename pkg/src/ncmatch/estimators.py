"""Closed-form edge statistics and the Monte Carlo estimation engine.

Replicate r of any experiment runs on the child stream derived from
(master seed, r); results are reduced in replicate order, so the output
is bit-identical whatever the worker count.  Workers communicate only
tiny per-replicate summaries, never instances.

Tolerance policy: Monte Carlo gates in the test suites compare means at
four standard errors.  The variance reasoning is the usual one for sums
of indicator variables (Chebyshev); four SEs keeps the false-alarm rate
negligible across the whole suite while still detecting the effects the
gates are after (for instance the one-unit difference in the isolated
edge exponent, which sits dozens of SEs from the alternative at the reps
used).
"""

from __future__ import annotations

import math
import multiprocessing as mp
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import stats as sps

from . import _kernels
from .errors import ContractViolation, ResourceLimitError
from .graphs import reduce_degree_one
from .samplers import ModelSpec, sample_instance, sample_involution, sample_unit_cube
from .seeds import Seed, as_seed
from .solvers import (
    CHAIN_DP_POINT_CAP,
    lis_permutation,
    longest_chain_points,
    longest_noncrossing_matching,
)

DEFAULT_QUANTILES = (0.05, 0.25, 0.5, 0.75, 0.95)

# (c-normalization exponent lambda, concentration constant h) per model kind;
# c itself is the d-dimensional chain constant and is what the sweeps estimate.
MODEL_LAMBDA: dict[str, Callable[[int], float]] = {
    "binomial": lambda d: 1.0 / d,
    "word": lambda d: 1.0 - 1.0 / d,
    "symmetric": lambda d: 0.5,
    "antisymmetric": lambda d: 0.5,
    "oriented": lambda d: 0.5,
}

MODEL_THETA: dict[str, Callable[[int], float]] = {
    "binomial": lambda d: (2 * d - 1) / (2 * d * (d - 1)),
    "word": lambda d: 1.0 - 1.0 / d + 1.0 / d**2,
    "symmetric": lambda d: 0.75,
}


def concentration_constant(kind: str, d: int) -> float:
    """1/4 for the Bernoulli-type models, 1/(4d) for the word model."""
    if kind == "word":
        return 1.0 / (4.0 * d)
    if kind in ("binomial", "symmetric"):
        return 0.25
    raise ContractViolation(f"no concentration constant on record for {kind!r}")


# --------------------------------------------------------------------------
# closed forms


@dataclass(frozen=True)
class EdgeStatsClosedForm:
    """Expected |E|, expected |E'| after the degree-1 reduction, and the
    stated bound on E|E \\ E'|.  The E' fields are None for the kinds
    (antisymmetric, oriented) that have no closed form on record."""

    expected_E: float
    expected_Eprime: float | None = None
    bound_E_minus_Eprime: float | None = None


def closed_form_edge_stats(spec: ModelSpec) -> EdgeStatsClosedForm:
    """Exact first moments of the edge counts for the given model.

    For the binomial model an edge e is isolated iff none of the other
    cells sharing a vertex with e is present; there are exactly
    prod(n_j) - prod(n_j - 1) - 1 of those (the count including e itself,
    minus one), hence the exponent below.  The word-model edge with
    letter a is isolated iff none of the other S - d vertices carries a,
    and a symmetric edge (i, j) is isolated iff the 2(n - 2) orbits
    touching row i or column j are all absent.
    """
    dims = spec.dims
    cells = float(np.prod([float(n) for n in dims]))
    if spec.kind == "binomial":
        p = spec.p
        e = p * cells
        shrunk = float(np.prod([float(n - 1) for n in dims]))
        exponent = cells - shrunk - 1.0
        eprime = e * (1.0 - p) ** exponent
        return EdgeStatsClosedForm(e, eprime, e - eprime)
    if spec.kind == "word":
        k, d = spec.k, spec.d
        s = float(sum(dims))
        e = cells / k ** (d - 1)
        eprime = e * ((k - 1) / k) ** (s - d)
        return EdgeStatsClosedForm(e, eprime, cells * s / k**d)
    n = dims[0]
    if spec.kind == "symmetric":
        p = spec.p
        e = p * n * (n - 1)
        eprime = e * (1.0 - p) ** (2 * n - 4)
        return EdgeStatsClosedForm(e, eprime, 2.0 * p * p * n * (n - 1) * (n - 2))
    if spec.kind == "antisymmetric":
        return EdgeStatsClosedForm(spec.p * n * n)
    if spec.kind == "oriented":
        return EdgeStatsClosedForm(spec.p * n * (n - 1) / 2.0)
    return EdgeStatsClosedForm(float(n), float(n), 0.0)  # permutation: all degree 1


# --------------------------------------------------------------------------
# sample statistics


@dataclass
class SampleStats:
    """Summary of a Monte Carlo sample of an integer statistic.

    ``lower_median`` is the floor((reps + 1) / 2)-th order statistic; the
    lower sample median is fixed by convention so estimates are exactly
    reproducible (medians need not be unique).
    """

    reps: int
    mean: float
    variance: float
    std_error: float
    lower_median: float
    quantiles: dict[float, float]
    tail_counts: dict[int, int] = field(default_factory=dict)
    minimum: float = 0.0
    maximum: float = 0.0

    @classmethod
    def from_values(
        cls,
        values: np.ndarray,
        quantiles: Sequence[float] = DEFAULT_QUANTILES,
        raw_counts: np.ndarray | None = None,
    ) -> "SampleStats":
        v = np.asarray(values, dtype=np.float64)
        r = v.shape[0]
        if r < 1:
            raise ContractViolation("need at least one replicate")
        srt = np.sort(v)
        variance = float(np.var(v, ddof=1)) if r > 1 else 0.0
        counts = raw_counts if raw_counts is not None else values
        tail = Counter(int(x) for x in np.asarray(counts).ravel())
        return cls(
            reps=r,
            mean=float(v.mean()),
            variance=variance,
            std_error=math.sqrt(variance / r),
            lower_median=float(srt[(r + 1) // 2 - 1]),
            quantiles={float(q): float(np.quantile(srt, q)) for q in quantiles},
            tail_counts=dict(sorted(tail.items())),
            minimum=float(srt[0]),
            maximum=float(srt[-1]),
        )

    def to_dict(self) -> dict:
        return {
            "reps": self.reps,
            "mean": self.mean,
            "variance": self.variance,
            "std_error": self.std_error,
            "lower_median": self.lower_median,
            "quantiles": {str(q): x for q, x in self.quantiles.items()},
            "tail_counts": {str(k): c for k, c in self.tail_counts.items()},
            "min": self.minimum,
            "max": self.maximum,
        }


# --------------------------------------------------------------------------
# the replicate engine


def _rep_model(args, r: int):
    spec, master, max_edges = args
    rng = Seed(master).generator(r)
    try:
        g = sample_instance(spec, rng, max_edges)
    except ResourceLimitError as exc:
        raise ResourceLimitError(f"replicate {r}: {exc}") from exc
    return longest_noncrossing_matching(g).length, g.num_edges


def _rep_edge_counts(args, r: int):
    spec, master, max_edges = args
    rng = Seed(master).generator(r)
    g = sample_instance(spec, rng, max_edges)
    return g.num_edges, reduce_degree_one(g).num_edges


def _rep_both_L(args, r: int):
    spec, master, max_edges = args
    rng = Seed(master).generator(r)
    g = sample_instance(spec, rng, max_edges)
    reduced = reduce_degree_one(g)
    return (
        longest_noncrossing_matching(g).length,
        longest_noncrossing_matching(reduced).length,
        g.num_edges,
        reduced.num_edges,
    )


def _rep_ulam(args, r: int):
    d, n, master = args
    rng = Seed(master).generator(r)
    return longest_chain_points(sample_unit_cube(n, d, rng))


def _rep_involution(args, r: int):
    m, master = args
    rng = Seed(master).generator(r)
    return lis_permutation(sample_involution(m, rng))


def parallel_replicates(worker, args, reps: int, workers: int = 1) -> list:
    """Run ``worker(args, r)`` for r in 0..reps-1, results in index order.

    Each replicate is a pure function of (args, r), so the map is safe to
    parallelize; results are identical to sequential execution.
    """
    if reps < 1:
        raise ContractViolation(f"need reps >= 1, got {reps}")
    if workers <= 1:
        return [worker(args, r) for r in range(reps)]
    _kernels.warmup()  # compile before forking so children inherit the JIT state
    ctx = mp.get_context("fork")
    chunk = max(1, reps // (workers * 8))
    with ctx.Pool(workers) as pool:
        return pool.starmap(worker, ((args, r) for r in range(reps)), chunksize=chunk)


def collect_L(
    spec: ModelSpec,
    reps: int,
    seed: Seed | int,
    workers: int = 1,
    max_edges: int | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-replicate (L, edge count) arrays in replicate order."""
    master = as_seed(seed).master
    out = parallel_replicates(_rep_model, (spec, master, max_edges), reps, workers)
    arr = np.asarray(out, dtype=np.int64)
    return arr[:, 0], arr[:, 1]


def estimate_L_stats(
    spec: ModelSpec,
    reps: int,
    seed: Seed | int,
    workers: int = 1,
    max_edges: int | None = None,
    quantiles: Sequence[float] = DEFAULT_QUANTILES,
) -> SampleStats:
    """Monte Carlo summary of L over independent replicates."""
    lengths, _ = collect_L(spec, reps, seed, workers, max_edges)
    return SampleStats.from_values(lengths, quantiles)


def edge_stats_empirical(
    spec: ModelSpec,
    reps: int,
    seed: Seed | int,
    workers: int = 1,
    max_edges: int | None = None,
) -> dict:
    """Empirical means and SEs of |E| and |E'| for checking closed forms."""
    master = as_seed(seed).master
    out = parallel_replicates(_rep_edge_counts, (spec, master, max_edges), reps, workers)
    arr = np.asarray(out, dtype=np.float64)
    e, ep = arr[:, 0], arr[:, 1]
    return {
        "reps": reps,
        "mean_E": float(e.mean()),
        "se_E": float(e.std(ddof=1) / math.sqrt(reps)),
        "mean_Eprime": float(ep.mean()),
        "se_Eprime": float(ep.std(ddof=1) / math.sqrt(reps)),
    }


# --------------------------------------------------------------------------
# convergence sweeps


@dataclass
class SweepRow:
    param: float
    dims: tuple[int, ...]
    reps: int
    seed: int
    mean_L: float
    normalized: float
    ci_half: float
    skipped: bool = False
    warning: str | None = None


@dataclass
class ConvergenceReport:
    """One row per grid point: the normalized statistic mean_L * t^lambda / N
    with a 95% CI half-width, each row carrying its own seed for replay.

    ``theta`` is the model's balance exponent (the companion of lambda in
    the size conditions the normalization comes from); None for the kinds
    with no value on record.
    """

    kind: str
    lam: float
    scale: float
    rows: list[SweepRow]
    theta: float | None = None

    CSV_COLUMNS = ("t_or_k", "dims", "reps", "normalized", "ci_half")

    def to_csv(self) -> str:
        lines = [",".join(self.CSV_COLUMNS)]
        for row in self.rows:
            dims = "x".join(str(n) for n in row.dims)
            lines.append(
                f"{row.param:g},{dims},{row.reps},{row.normalized:.6f},{row.ci_half:.6f}"
            )
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "lambda": self.lam,
            "theta": self.theta,
            "scale": self.scale,
            "rows": [
                {
                    "t_or_k": r.param,
                    "dims": list(r.dims),
                    "reps": r.reps,
                    "seed": r.seed,
                    "mean_L": r.mean_L,
                    "normalized": r.normalized,
                    "ci_half": r.ci_half,
                    "skipped": r.skipped,
                    "warning": r.warning,
                }
                for r in self.rows
            ],
        }


def internal_parameter(kind: str, value: float) -> float:
    """The internal parameter t: 1/p for Bernoulli-type models, k for words."""
    return float(value) if kind == "word" else 1.0 / float(value)


def sweep_constant(
    kind: str,
    grid: Sequence[float],
    dims_rule: Callable[[float], int],
    reps: int,
    seed: Seed | int,
    d: int = 2,
    workers: int = 1,
    scale: float = 20.0,
    max_edges: int | None = None,
) -> ConvergenceReport:
    """Normalized-constant sweep over a grid of p (or k) values.

    ``dims_rule(param)`` gives the square class size n for a grid point.
    Grid points whose n falls below scale * t^lambda violate the size
    rule and are skipped with a warning row (nan statistic).  The
    normalization mean_L * t^lambda / N tends to the models' limiting
    constant as t grows.
    """
    if kind not in MODEL_LAMBDA:
        raise ContractViolation(f"no sweep normalization for kind {kind!r}")
    lam = MODEL_LAMBDA[kind](d)
    base = as_seed(seed)
    rows: list[SweepRow] = []
    for i, param in enumerate(grid):
        row_seed = base.derive(i)
        n = int(dims_rule(param))
        if kind == "binomial":
            spec = ModelSpec.binomial((n,) * d, float(param))
        elif kind == "word":
            spec = ModelSpec.word((n,) * d, int(param))
        elif kind == "symmetric":
            spec = ModelSpec.symmetric(n, float(param))
        elif kind == "antisymmetric":
            spec = ModelSpec.antisymmetric(n, float(param))
        else:
            spec = ModelSpec.oriented(n, float(param))
        t = internal_parameter(kind, param)
        n_mean = spec.geometric_mean
        if n_mean < scale * t**lam:
            rows.append(
                SweepRow(
                    param=float(param),
                    dims=spec.dims,
                    reps=0,
                    seed=row_seed.master,
                    mean_L=float("nan"),
                    normalized=float("nan"),
                    ci_half=float("nan"),
                    skipped=True,
                    warning=f"dims rule violated: N={n_mean:.3g} < {scale:g} * t^{lam:.3g}",
                )
            )
            continue
        st = estimate_L_stats(spec, reps, row_seed, workers, max_edges)
        factor = t**lam / n_mean
        rows.append(
            SweepRow(
                param=float(param),
                dims=spec.dims,
                reps=reps,
                seed=row_seed.master,
                mean_L=st.mean,
                normalized=st.mean * factor,
                ci_half=1.96 * st.std_error * factor,
            )
        )
    theta = MODEL_THETA[kind](d) if kind in MODEL_THETA else None
    return ConvergenceReport(kind, lam, scale, rows, theta)


# --------------------------------------------------------------------------
# chain-constant estimators


def estimate_ulam(
    d: int,
    n: int,
    reps: int,
    seed: Seed | int,
    workers: int = 1,
    quantiles: Sequence[float] = DEFAULT_QUANTILES,
) -> SampleStats:
    """Longest chain of n uniform points in [0, 1]^d, normalized by n^(1/d)."""
    if d < 1:
        raise ContractViolation(f"need d >= 1, got {d}")
    if d >= 3 and n > CHAIN_DP_POINT_CAP:
        raise ResourceLimitError(
            f"n={n} exceeds the quadratic-DP cap; keep n <= {CHAIN_DP_POINT_CAP} for d >= 3"
        )
    master = as_seed(seed).master
    raw = np.asarray(
        parallel_replicates(_rep_ulam, (d, n, master), reps, workers), dtype=np.int64
    )
    return SampleStats.from_values(raw / n ** (1.0 / d), quantiles, raw_counts=raw)


def estimate_involution(
    m: int,
    reps: int,
    seed: Seed | int,
    workers: int = 1,
    quantiles: Sequence[float] = DEFAULT_QUANTILES,
) -> SampleStats:
    """LIS of uniform fixed-point-free involutions of [2m], normalized by
    sqrt(2m) (the mean sits near 2 for large m)."""
    master = as_seed(seed).master
    raw = np.asarray(
        parallel_replicates(_rep_involution, (m, master), reps, workers), dtype=np.int64
    )
    return SampleStats.from_values(raw / math.sqrt(2 * m), quantiles, raw_counts=raw)


# --------------------------------------------------------------------------
# concentration and coupling checks


@dataclass(frozen=True)
class ConcentrationCheckConfig:
    """Tail-bound check parameters: the model's concentration constant h
    and the deviations s to probe."""

    h: float
    s_grid: tuple[float, ...]
    reps: int

    def __post_init__(self) -> None:
        if self.h <= 0:
            raise ContractViolation("h must be positive")


@dataclass
class ConcentrationRow:
    s: float
    side: str  # "lower" or "upper"
    threshold: float
    count: int
    frequency: float
    conf99: float
    bound: float
    violation: bool
    precondition_ok: bool


def _binomial_upper_conf(count: int, reps: int, level: float = 0.99) -> float:
    """Clopper-Pearson upper confidence limit for a tail probability."""
    if count >= reps:
        return 1.0
    return float(sps.beta.ppf(level, count + 1, reps - count))


def concentration_check(
    spec: ModelSpec,
    cfg: ConcentrationCheckConfig,
    seed: Seed | int,
    workers: int = 1,
    max_edges: int | None = None,
) -> dict:
    """Empirical two-sided tail check against the exponential bounds.

    Med is estimated by the lower sample median; for each s the observed
    tail frequency (with its exact binomial 99% upper confidence limit)
    is compared against 2 exp(-h s^2 Med) below and
    2 exp(-h s^2 Med / (1+s)) above.  Report-only: a violation is a
    finding, not a crash.  Exact binomial limits are used because the
    frequencies in play are tiny.
    """
    lengths, _ = collect_L(spec, cfg.reps, seed, workers, max_edges)
    med = float(np.sort(lengths)[(cfg.reps + 1) // 2 - 1])
    rows: list[ConcentrationRow] = []
    for s in cfg.s_grid:
        for side in ("lower", "upper"):
            if side == "lower":
                threshold = (1.0 - s) * med
                count = int(np.sum(lengths <= threshold))
                bound = 2.0 * math.exp(-cfg.h * s * s * med)
            else:
                threshold = (1.0 + s) * med
                count = int(np.sum(lengths >= threshold))
                bound = 2.0 * math.exp(-cfg.h * s * s * med / (1.0 + s))
            freq = count / cfg.reps
            conf = _binomial_upper_conf(count, cfg.reps)
            rows.append(
                ConcentrationRow(
                    s=float(s),
                    side=side,
                    threshold=threshold,
                    count=count,
                    frequency=freq,
                    conf99=conf,
                    bound=bound,
                    violation=bool(conf > bound),
                    precondition_ok=bool(conf - freq < bound / 2.0),
                )
            )
    return {
        "median": med,
        "reps": cfg.reps,
        "h": cfg.h,
        "rows": rows,
        "violations": [r for r in rows if r.violation],
    }


def superadditivity_check(
    spec: ModelSpec,
    n: int,
    split: tuple[int, int],
    reps: int,
    seed: Seed | int,
    workers: int = 1,
    max_edges: int | None = None,
) -> dict:
    """Check E[L(size n)] >= E[L(size n')] + E[L(size n'')] within 4 pooled
    standard errors, for n = n' + n'' on a square model."""
    n1, n2 = split
    if n1 + n2 != n:
        raise ContractViolation(f"split {split} does not sum to {n}")
    base = as_seed(seed)
    means = []
    ses = []
    for i, size in enumerate((n, n1, n2)):
        st = estimate_L_stats(spec.with_square_size(size), reps, base.derive(i), workers, max_edges)
        means.append(st.mean)
        ses.append(st.std_error)
    pooled = math.sqrt(sum(se * se for se in ses))
    slack = 4.0 * pooled
    ok = means[0] >= means[1] + means[2] - slack
    return {
        "mean_full": means[0],
        "mean_parts": (means[1], means[2]),
        "pooled_se": pooled,
        "slack": slack,
        "ok": bool(ok),
    }


def _variance_se(values: np.ndarray) -> float:
    """Standard error of the sample variance via the fourth central moment."""
    n = values.shape[0]
    centered = values - values.mean()
    m4 = float(np.mean(centered**4))
    v = float(values.var(ddof=1))
    return math.sqrt(max(m4 - v * v, 0.0) / n)


def equidistribution_check(
    n: int,
    p: float,
    reps: int,
    seed: Seed | int,
    workers: int = 1,
    max_edges: int | None = None,
) -> dict:
    """Compare L under the symmetric and oriented models at the same (n, p).

    The two are identically distributed; the check compares means and
    variances at 4 pooled SEs and the empirical CDF max distance against
    0.05.
    """
    base = as_seed(seed)
    l_sym, _ = collect_L(ModelSpec.symmetric(n, p), reps, base.derive(0), workers, max_edges)
    l_ori, _ = collect_L(ModelSpec.oriented(n, p), reps, base.derive(1), workers, max_edges)
    mean_diff = float(l_sym.mean() - l_ori.mean())
    pooled = math.sqrt(l_sym.var(ddof=1) / reps + l_ori.var(ddof=1) / reps)
    var_diff = float(l_sym.var(ddof=1) - l_ori.var(ddof=1))
    pooled_var = math.hypot(_variance_se(l_sym.astype(np.float64)), _variance_se(l_ori.astype(np.float64)))
    ks = float(sps.ks_2samp(l_sym, l_ori, method="asymp").statistic)
    return {
        "mean_symmetric": float(l_sym.mean()),
        "mean_oriented": float(l_ori.mean()),
        "mean_diff": mean_diff,
        "pooled_se": pooled,
        "var_diff": var_diff,
        "pooled_var_se": pooled_var,
        "ks_distance": ks,
        "ok_mean": bool(abs(mean_diff) <= 4.0 * pooled),
        "ok_var": bool(abs(var_diff) <= 4.0 * pooled_var),
        "ok_cdf": bool(ks <= 0.05),
    }
