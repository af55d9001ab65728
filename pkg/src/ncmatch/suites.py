"""Named verification suites behind ``ncmatch verify --suite <name>``.

Each suite returns {"suite": name, "ok": bool, ...details}; the CLI exits
nonzero when any requested suite reports ok=False.
"""

from __future__ import annotations

import numpy as np

from . import blocks as bl
from . import estimators as est
from .errors import ContractViolation
from .graphs import HyperGraph
from .samplers import ModelSpec, sample_instance
from .seeds import Seed, as_seed
from .solvers import (
    brute_force_lnm,
    lis_strict_2d,
    longest_chain_dd,
    longest_noncrossing_matching,
)

SUITE_NAMES = (
    "oracle",
    "closedform",
    "blocks",
    "concentration",
    "equidistribution",
    "superadditivity",
)


def random_small_instance(rng: np.random.Generator, max_edges: int = 12) -> HyperGraph:
    """A random sparse instance with d in {2, 3, 4} and few edges."""
    d = int(rng.integers(2, 5))
    dims = tuple(int(rng.integers(2, 7)) for _ in range(d))
    cells = int(np.prod(dims))
    m = int(rng.integers(0, min(max_edges, cells) + 1))
    if m == 0:
        return HyperGraph(dims, np.empty((0, d), dtype=np.int64))
    idx = rng.choice(cells, size=m, replace=False)
    idx.sort()
    coords = np.empty((m, d), dtype=np.int64)
    rest = idx.astype(np.int64)
    for j in range(d - 1, -1, -1):
        coords[:, j] = rest % dims[j] + 1
        rest //= dims[j]
    return HyperGraph(dims, coords)


def suite_oracle(cases: int = 500, seed: Seed | int = 0) -> dict:
    """All solver paths agree with the brute-force oracle on small instances."""
    base = as_seed(seed)
    mismatches = []
    for c in range(cases):
        g = random_small_instance(base.generator(c))
        oracle = brute_force_lnm(g)
        got = {
            "dispatch": longest_noncrossing_matching(g).length,
            "chain_dp": longest_chain_dd(g.edges) if g.num_edges else 0,
        }
        if g.d == 2:
            got["lis"] = lis_strict_2d(g.edges)
        bad = {k: v for k, v in got.items() if v != oracle}
        if bad:
            mismatches.append({"case": c, "oracle": oracle, "got": bad})
    return {"suite": "oracle", "ok": not mismatches, "cases": cases, "mismatches": mismatches}


def suite_closedform(seed: Seed | int = 0, workers: int = 1) -> dict:
    """Empirical |E| and |E'| means against the closed forms, 4 SE gates."""
    base = as_seed(seed)
    checks = []
    plans = [
        (ModelSpec.binomial((10, 10), 0.1), 100_000),
        (ModelSpec.word((20, 20), 4), 10_000),
        (ModelSpec.symmetric(10, 0.1), 10_000),
    ]
    for i, (spec, reps) in enumerate(plans):
        form = est.closed_form_edge_stats(spec)
        emp = est.edge_stats_empirical(spec, reps, base.derive(i), workers)
        ok_e = abs(emp["mean_E"] - form.expected_E) <= 4 * emp["se_E"]
        ok_ep = abs(emp["mean_Eprime"] - form.expected_Eprime) <= 4 * emp["se_Eprime"]
        checks.append(
            {
                "kind": spec.kind,
                "reps": reps,
                "expected_E": form.expected_E,
                "mean_E": emp["mean_E"],
                "se_E": emp["se_E"],
                "expected_Eprime": form.expected_Eprime,
                "mean_Eprime": emp["mean_Eprime"],
                "se_Eprime": emp["se_Eprime"],
                "ok": bool(ok_e and ok_ep),
            }
        )
    return {"suite": "closedform", "ok": all(c["ok"] for c in checks), "checks": checks}


def random_chain(rng: np.random.Generator, d: int, length: int, max_gap: int = 8) -> np.ndarray:
    """A random strict chain: coordinates increase by gaps in [1, max_gap]."""
    gaps = rng.integers(1, max_gap + 1, size=(length, d))
    return np.cumsum(gaps, axis=0).astype(np.int64)


def _check_partition(chain: np.ndarray, s_max: int, span_cap: int) -> list[str]:
    p = bl.partition_matching(chain, s_max, span_cap)
    problems = []
    covered = []
    for lo, hi in p.bounds:
        size = hi - lo + 1
        if size > s_max:
            problems.append(f"block [{lo},{hi}] exceeds edge cap")
        if np.any(chain[hi] - chain[lo] > span_cap):
            problems.append(f"block [{lo},{hi}] exceeds span cap")
        if hi + 1 < chain.shape[0]:
            grew_size = size + 1 <= s_max
            grew_span = bool(np.all(chain[hi + 1] - chain[lo] <= span_cap))
            if grew_size and grew_span:
                problems.append(f"block [{lo},{hi}] is not maximal")
        covered.extend(range(lo, hi + 1))
    if covered != list(range(chain.shape[0])):
        problems.append("blocks do not cover the chain exactly once in order")
    t = bl.partition_type(p)
    if bl.bounds_from_type(t, chain) != p.bounds:
        problems.append("type does not round-trip")
    return problems


def suite_blocks(
    seed: Seed | int = 0,
    partition_cases: int = 300,
    split_cases: int = 200,
    inequality_cases: int = 100_000,
) -> dict:
    """Fuzz the chain partition, split additivity and product inequalities."""
    base = as_seed(seed)
    problems: list[str] = []

    rng = base.generator(0)
    for c in range(partition_cases):
        d = int(rng.integers(2, 5))
        length = int(rng.integers(1, 40))
        chain = random_chain(rng, d, length)
        s_max = int(rng.integers(1, 8))
        span_cap = int(rng.integers(0, 30))
        for msg in _check_partition(chain, s_max, span_cap):
            problems.append(f"partition case {c}: {msg}")

    rng = base.generator(1)
    for c in range(split_cases):
        spec = ModelSpec.binomial(
            (int(rng.integers(4, 13)), int(rng.integers(4, 13))), float(rng.uniform(0.1, 0.6))
        )
        g = sample_instance(spec, rng)
        q = int(rng.integers(1, min(g.dims) + 1))
        split = bl.split_into_blocks(g, q)
        total = sum(longest_noncrossing_matching(b).length for b in split.blocks)
        whole = longest_noncrossing_matching(g).length
        if total > whole:
            problems.append(f"split case {c}: sum of block L {total} > L {whole}")

    rng = base.generator(2)
    # entries kept >= 1: the product inequality is false below 1 for d >= 3
    for c in range(inequality_cases):
        d = int(rng.integers(1, 7))
        x = rng.integers(1, 60, size=d)
        if not bl.product_inequalities_check(x):
            problems.append(f"product inequality failed on {x.tolist()}")
        q = int(rng.integers(1, 5))
        mat = rng.integers(1, 20, size=(q, d if d >= 1 else 1))
        if not bl.product_inequalities_check(mat):
            problems.append(f"hoelder inequality failed on {mat.tolist()}")
        if len(problems) > 20:
            break
    return {
        "suite": "blocks",
        "ok": not problems,
        "partition_cases": partition_cases,
        "split_cases": split_cases,
        "inequality_cases": inequality_cases,
        "problems": problems[:20],
    }


def suite_concentration(seed: Seed | int = 0, workers: int = 1, reps: int = 20_000) -> dict:
    """Tail bounds for the binomial (h = 1/4) and word (h = 1/(4d)) models."""
    base = as_seed(seed)
    s_grid = (0.1, 0.2, 0.3)
    reports = []
    plans = [
        (ModelSpec.binomial((500, 500), 0.04), est.concentration_constant("binomial", 2)),
        (ModelSpec.word((500, 500), 8), est.concentration_constant("word", 2)),
    ]
    for i, (spec, h) in enumerate(plans):
        cfg = est.ConcentrationCheckConfig(h=h, s_grid=s_grid, reps=reps)
        rep = est.concentration_check(spec, cfg, base.derive(i), workers)
        reports.append(
            {
                "kind": spec.kind,
                "h": h,
                "median": rep["median"],
                "violations": [
                    {"s": r.s, "side": r.side, "conf99": r.conf99, "bound": r.bound}
                    for r in rep["violations"]
                ],
            }
        )
    ok = all(not r["violations"] for r in reports)
    return {"suite": "concentration", "ok": ok, "reports": reports}


def suite_equidistribution(seed: Seed | int = 0, workers: int = 1, reps: int = 2000) -> dict:
    rep = est.equidistribution_check(200, 0.1, reps, as_seed(seed), workers)
    return {"suite": "equidistribution", "ok": rep["ok_mean"] and rep["ok_cdf"], **rep}


def suite_superadditivity(seed: Seed | int = 0, workers: int = 1, reps: int = 2000) -> dict:
    rep = est.superadditivity_check(
        ModelSpec.binomial((400, 400), 0.1), 400, (200, 200), reps, as_seed(seed), workers
    )
    return {"suite": "superadditivity", "ok": rep["ok"], **rep}


def run_suite(name: str, seed: Seed | int = 0, workers: int = 1, cases: int = 500) -> dict:
    if name == "oracle":
        return suite_oracle(cases=cases, seed=seed)
    if name == "closedform":
        return suite_closedform(seed=seed, workers=workers)
    if name == "blocks":
        return suite_blocks(seed=seed)
    if name == "concentration":
        return suite_concentration(seed=seed, workers=workers)
    if name == "equidistribution":
        return suite_equidistribution(seed=seed, workers=workers)
    if name == "superadditivity":
        return suite_superadditivity(seed=seed, workers=workers)
    raise ContractViolation(f"unknown suite {name!r}; choose from {SUITE_NAMES}")
