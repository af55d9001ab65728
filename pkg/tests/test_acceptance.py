"""Acceptance gate: one test per criterion, one printed PASS/FAIL line each.

All quantitative bands were frozen from pilot runs on 2026-08-10 using the
master seeds recorded below, before being enforced here.  Criterion 6 is a
known red: the final-point band is not attainable at the configured sizes
(the measured plateau is ~1.82; see notes in the assertion message), while
its monotone-trend half holds.
"""

import json
import math
import os
import time
from fractions import Fraction

from ncmatch import estimators as est
from ncmatch import suites
from ncmatch.cli import main
from ncmatch.samplers import ModelSpec
from ncmatch.seeds import Seed

WORKERS = min(8, os.cpu_count() or 1)

# pilot seeds, recorded 2026-08-10
SEED_LATTICE = 20260810
SEED_PERMUTATION = 20260811
SEED_ULAM_D2 = 20260812
SEED_ULAM_D3 = 20260813
SEED_ULAM_D4 = 20260814
SEED_WORD_TREND = 20260816
SEED_SYMMETRIC = 20260817
SEED_ANTISYMMETRIC = 20260818
SEED_EQUIDISTRIBUTION = 20260819
SEED_CLOSED_FORM = 20260820
SEED_CONCENTRATION = 20260821
SEED_BLOCKS = 20260822
SEED_EXACTNESS = 20260823
SEED_ORACLE = 1001


def report(name: str, ok: bool, detail: str, t0: float) -> None:
    line = f"{'PASS' if ok else 'FAIL'} {name}: {detail} [{time.perf_counter() - t0:.1f}s]"
    print(line)
    assert ok, line


def test_criterion_01_oracle_equivalence():
    t0 = time.perf_counter()
    res = suites.suite_oracle(cases=500, seed=Seed(SEED_ORACLE))
    report(
        "criterion-01 oracle equivalence",
        res["ok"],
        f"{res['cases']} random instances (d in 2..4, <=12 edges), "
        f"{len(res['mismatches'])} mismatches",
        t0,
    )


def test_criterion_02_lattice_constant():
    t0 = time.perf_counter()
    p, n, reps = 0.09, 2000, 50
    target = 2 * math.sqrt(p) / (1 + math.sqrt(p))
    st = est.estimate_L_stats(ModelSpec.binomial((n, n), p), reps, Seed(SEED_LATTICE), WORKERS)
    value = st.mean / n
    ok = abs(value - target) <= 0.05 * target
    report(
        "criterion-02 lattice constant",
        ok,
        f"mean L/n = {value:.5f}, target {target:.5f} +-5%",
        t0,
    )


def test_criterion_03_permutation_constant():
    t0 = time.perf_counter()
    n, reps = 10_000, 100
    st = est.estimate_L_stats(ModelSpec.permutation(n), reps, Seed(SEED_PERMUTATION), WORKERS)
    value = st.mean / math.sqrt(n)
    ok = 1.90 <= value <= 2.00
    report(
        "criterion-03 permutation LIS constant",
        ok,
        f"mean/sqrt(n) = {value:.4f}, band [1.90, 2.00] (frozen by pilot)",
        t0,
    )


def test_criterion_04_chain_constant_monotonicity():
    t0 = time.perf_counter()
    c2 = est.estimate_ulam(2, 10_000, 40, Seed(SEED_ULAM_D2), WORKERS)
    c3 = est.estimate_ulam(3, 20_000, 24, Seed(SEED_ULAM_D3), WORKERS)
    c4 = est.estimate_ulam(4, 20_000, 24, Seed(SEED_ULAM_D4), WORKERS)
    se23 = math.hypot(c2.std_error, c3.std_error)
    se34 = math.hypot(c3.std_error, c4.std_error)
    ok = (
        c2.mean <= c3.mean + 2 * se23
        and c3.mean <= c4.mean + 2 * se34
        and c4.mean < 2.718
    )
    report(
        "criterion-04 chain constants ordered",
        ok,
        f"c2={c2.mean:.4f} <= c3={c3.mean:.4f} <= c4={c4.mean:.4f} < 2.718 "
        f"(2-sigma overlap allowed)",
        t0,
    )


def test_criterion_05_word_model_trend():
    t0 = time.perf_counter()
    grid = [2, 4, 16, 64]
    rep = est.sweep_constant(
        "word", grid, lambda k: int(round(400 * math.sqrt(k))), 200,
        Seed(SEED_WORD_TREND), workers=WORKERS,
    )
    values = [r.normalized for r in rep.rows]
    increasing = all(a < b for a, b in zip(values, values[1:]))
    bounded = all(v <= 2.05 for v in values)
    report(
        "criterion-05 word-model trend",
        increasing and bounded,
        "sqrt(k) * mean L / n = " + ", ".join(f"{v:.4f}" for v in values)
        + " (strictly increasing, <= 2.05)",
        t0,
    )


def test_criterion_06_symmetric_limit():
    t0 = time.perf_counter()
    grid = [0.04, 0.01, 0.0025]
    rep = est.sweep_constant(
        "symmetric", grid, lambda p: int(round(200 / math.sqrt(p))), 400,
        Seed(SEED_SYMMETRIC), workers=WORKERS,
    )
    values = [r.normalized for r in rep.rows]
    increasing = all(a < b for a, b in zip(values, values[1:]))
    final_in_band = 1.85 <= values[-1] <= 2.02
    # Known red: at n = 200/sqrt(p) the final point plateaus near 1.82
    # (stable across seeds; the sampler is enumeration-validated and the
    # same statistic passes at doubled sizes), so the [1.85, 2.02] band is
    # not attainable at these sizes.  The monotone half holds.
    report(
        "criterion-06 symmetric limit",
        increasing and final_in_band,
        "mean L / (n sqrt(p)) = " + ", ".join(f"{v:.4f}" for v in values)
        + f" (increasing={increasing}, final in [1.85, 2.02]={final_in_band})",
        t0,
    )


def test_criterion_07_antisymmetric_limit():
    t0 = time.perf_counter()
    grid = [0.04, 0.01, 0.0025]
    rep = est.sweep_constant(
        "antisymmetric", grid, lambda p: int(round(200 / math.sqrt(p))), 400,
        Seed(SEED_ANTISYMMETRIC), workers=WORKERS,
    )
    values = [r.normalized for r in rep.rows]  # normalized by 2n * sqrt(p)
    increasing = all(a < b for a, b in zip(values, values[1:]))
    final_in_band = 1.85 <= values[-1] <= 2.02
    report(
        "criterion-07 anti-symmetric limit",
        increasing and final_in_band,
        "mean L / (2n sqrt(p)) = " + ", ".join(f"{v:.4f}" for v in values)
        + " (increasing, final in [1.85, 2.02])",
        t0,
    )


def test_criterion_08_equidistribution():
    t0 = time.perf_counter()
    rep = est.equidistribution_check(200, 0.1, 2000, Seed(SEED_EQUIDISTRIBUTION), WORKERS)
    report(
        "criterion-08 symmetric/oriented equidistribution",
        rep["ok_mean"] and rep["ok_cdf"],
        f"mean diff {rep['mean_diff']:+.3f} ({abs(rep['mean_diff']) / rep['pooled_se']:.1f} pooled SE, "
        f"gate 4), KS distance {rep['ks_distance']:.4f} (gate 0.05)",
        t0,
    )


def test_criterion_09_closed_form_edge_stats():
    t0 = time.perf_counter()
    res = suites.suite_closedform(seed=Seed(SEED_CLOSED_FORM), workers=WORKERS)
    binom = next(c for c in res["checks"] if c["kind"] == "binomial")
    # arbitration of the isolated-edge exponent: the empirical mean must
    # single out the exact exponent (18 here) over the off-by-one one (19)
    exact = 10 * 0.9**18
    off_by_one = 10 * 0.9**19
    arbitration = abs(binom["mean_Eprime"] - exact) < abs(binom["mean_Eprime"] - off_by_one)
    detail = "; ".join(
        f"{c['kind']}: |E| {c['mean_E']:.3f}~{c['expected_E']:.3f}, "
        f"|E'| {c['mean_Eprime']:.4f}~{c['expected_Eprime']:.4f}"
        for c in res["checks"]
    )
    report(
        "criterion-09 closed-form edge stats",
        res["ok"] and arbitration,
        detail + f"; exponent arbitration -> exact ({binom['mean_Eprime']:.4f} vs {exact:.4f}, "
        f"off-by-one {off_by_one:.4f})",
        t0,
    )


def test_criterion_10_concentration_sanity():
    t0 = time.perf_counter()
    res = suites.suite_concentration(seed=Seed(SEED_CONCENTRATION), workers=WORKERS, reps=20_000)
    detail = "; ".join(
        f"{r['kind']} (h={r['h']:.3g}, Med={r['median']:.0f}): {len(r['violations'])} violations"
        for r in res["reports"]
    )
    report("criterion-10 concentration sanity", res["ok"], detail + " at s in {0.1, 0.2, 0.3}", t0)


def test_criterion_11_block_partition_invariants():
    t0 = time.perf_counter()
    res = suites.suite_blocks(
        seed=Seed(SEED_BLOCKS), partition_cases=300, split_cases=200, inequality_cases=100_000
    )
    report(
        "criterion-11 block-partition invariants",
        res["ok"],
        f"{res['partition_cases']} partitions fuzzed, {res['split_cases']} split-additivity "
        f"instances, {res['inequality_cases']} inequality inputs; "
        f"problems: {res['problems'] or 'none'}",
        t0,
    )


def test_criterion_12_determinism(tmp_path):
    t0 = time.perf_counter()
    stats_blobs, rep_bytes = [], []
    for workers in (1, 4, 16):
        out = tmp_path / f"sum-{workers}.json"
        reps = tmp_path / f"reps-{workers}.jsonl"
        code = main(
            ["estimate", "--model", "binomial", "--dims", "3,3", "--p", "0.5",
             "--reps", "2000", "--seed", "9", "--workers", str(workers),
             "-o", str(out), "--replicates", str(reps)]
        )
        assert code == 0
        rep_bytes.append(reps.read_bytes())
        # the data product must be worker-invariant; the echoed config
        # necessarily records the differing workers flag, so compare stats
        stats_blobs.append(json.dumps(json.loads(out.read_text())["stats"], sort_keys=True))
    ok = all(b == rep_bytes[0] for b in rep_bytes) and all(s == stats_blobs[0] for s in stats_blobs)
    report(
        "criterion-12 determinism across workers",
        ok,
        f"replicate JSONL byte-identical for workers in {{1, 4, 16}} "
        f"({len(rep_bytes[0])} bytes), stats identical",
        t0,
    )


def _chain_length_oracle(edges: list) -> int:
    """Independent exhaustive chain search used only by the enumeration."""
    edges = sorted(edges)
    best = 0

    def extend(last: int, depth: int) -> None:
        nonlocal best
        best = max(best, depth)
        for nxt in range(last + 1, len(edges)):
            if edges[last][0] < edges[nxt][0] and edges[last][1] < edges[nxt][1]:
                extend(nxt, depth + 1)

    for start in range(len(edges)):
        extend(start, 1)
    return best


def test_criterion_13_small_instance_exactness():
    t0 = time.perf_counter()
    cells = [(i, j) for i in (1, 2, 3) for j in (1, 2, 3)]
    total = Fraction(0)
    for mask in range(512):
        picked = [cells[b] for b in range(9) if mask >> b & 1]
        total += _chain_length_oracle(picked)
    exact = total / 512
    assert exact == Fraction(983, 512)  # frozen from the enumeration oracle
    st = est.estimate_L_stats(
        ModelSpec.binomial((3, 3), 0.5), 100_000, Seed(SEED_EXACTNESS), WORKERS
    )
    ok = abs(st.mean - float(exact)) <= 4 * st.std_error
    report(
        "criterion-13 small-instance exactness",
        ok,
        f"MC mean {st.mean:.5f} vs exact {float(exact):.5f} (= 983/512), "
        f"gate 4 SE = {4 * st.std_error:.5f}",
        t0,
    )
