"""Acceptance suite.

One test per acceptance criterion; each prints a single PASS/FAIL line
(visible with ``pytest -s``) and then asserts.  Stated runtime budgets are
asserted with wall-clock timers; JIT compilation is excluded by the
session-wide warmup fixture.
"""

import math
import time

import numpy as np

import polygamy_lab as pl
from polygamy_lab.audit import audit_csv

from oracles import grid_oracle_eoa

W_ENTROPY = math.log2(3.0) - 2.0 / 3.0


def _report(index: int, description: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    suffix = f" [{detail}]" if detail else ""
    line = f"ACCEPTANCE {index}: {status} - {description}{suffix}"
    print(line, flush=True)
    assert ok, line


def test_criterion_1_wstate_fixture():
    start = time.perf_counter()
    w = pl.w_state(3)
    lhs = pl.pure_entanglement(w, (0,))
    values = []
    for j in (1, 2):
        rho = w.reduced((0, j))
        values.append(pl.assisted_measure(rho, "entropy", pl.OptimizerOptions(seed=j)).value)
    elapsed = time.perf_counter() - start
    ok = (
        abs(lhs - W_ENTROPY) <= 1e-9
        and all(abs(v - 2.0 / 3.0) <= 1e-3 for v in values)
        and elapsed < 10.0
    )
    _report(
        1,
        "W fixture: one-vs-rest entropy and pairwise assisted values",
        ok,
        f"lhs={lhs:.9f}, E=({values[0]:.6f}, {values[1]:.6f}), {elapsed:.2f}s",
    )


def test_criterion_2_wstate_gaps():
    report = pl.wstate_case(0.5)
    ok = abs(report.gap_thm1 - 0.19642) <= 5e-4 and abs(report.gap_kim - 0.26647) <= 5e-4
    _report(
        2,
        "W-state gap reproduction at beta=1/2 (thm1 ~0.196, recomputed Kim ~0.266)",
        ok,
        f"gap_thm1={report.gap_thm1:.5f}, gap_kim={report.gap_kim:.5f}",
    )


def test_criterion_3_beta_sweep_chain():
    start = time.perf_counter()
    rows = pl.beta_sweep(np.linspace(0.0, 1.0, 101))
    elapsed = time.perf_counter() - start
    ok = len(rows) == 101 and elapsed < 1.0
    for row in rows:
        ok = ok and row.lhs_pow <= row.bound_thm1 + 1e-12
        ok = ok and row.bound_thm1 <= row.bound_kim + 1e-12
        if 0.0 < row.beta < 1.0:
            ok = ok and row.bound_thm1 < row.bound_kim
        else:
            ok = ok and abs(row.bound_thm1 - row.bound_kim) <= 1e-12
    _report(3, "beta sweep: chain ordering over 101 grid points", ok, f"{elapsed * 1e3:.0f}ms")


def test_criterion_4_lemma_grid():
    start = time.perf_counter()
    worst = pl.lemma_grid_audit(50)
    elapsed = time.perf_counter() - start
    ok = worst >= -1e-12 and elapsed < 5.0
    _report(4, "scalar inequality on the 50^3 grid", ok, f"min_residual={worst:.2e}, {elapsed:.2f}s")


def test_criterion_5_bound_order_properties():
    start = time.perf_counter()
    rng = np.random.default_rng(90210)
    betas = np.linspace(0.0, 1.0, 11)
    ok = True

    for trial in range(10_000):
        n = 2 + trial % 5
        values = np.sort(rng.uniform(0.0, 1.0, n))[::-1]
        k = pl.optimal_k_thm1(values)
        ok = ok and k is not None and pl.check_condition_thm1(values, k)
        total = float(values.sum())
        for beta in betas:
            sum_pow = pl.powb(total, beta)
            t1 = pl.thm1_bound(values, beta, k)
            ok = ok and sum_pow <= t1 + 1e-12
            ok = ok and t1 <= pl.kim_bound(values, beta) + 1e-12
        if not ok:
            break

    for trial in range(10_000):
        n = 2 + trial % 5
        tail_first = [float(rng.uniform(0.0, 1.0))]
        for _ in range(n - 1):
            tail = sum(tail_first)
            tail_first.append(tail * (1.0 + float(rng.uniform(0.0, 1.0))))
        values = np.array(tail_first[::-1])
        ok = ok and pl.check_condition_thm2(values, 1.0)
        k = pl.optimal_k_thm2(values)
        ok = ok and k is not None
        for beta in betas:
            ok = ok and pl.thm2_bound(values, beta, k) <= pl.thm1_bound(values, beta, k) + 1e-12
        if not ok:
            break

    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 30.0
    _report(5, "bound ordering on 2x10^4 random profiles, 11 betas", ok, f"{elapsed:.1f}s")


def test_criterion_6_optimizer_vs_grid_oracle():
    start = time.perf_counter()
    worst = 0.0
    for i in range(50):
        rho = pl.random_mixed(pl.SystemLayout((2, 2)), 2, 3000 + i)
        oracle = grid_oracle_eoa(np.asarray(rho.matrix))
        estimate = pl.assisted_measure(rho, "entropy", pl.OptimizerOptions(seed=i)).value
        worst = max(worst, abs(estimate - oracle))
    elapsed = time.perf_counter() - start
    ok = worst <= 5e-3 and elapsed < 300.0
    _report(
        6,
        "roof optimizer vs brute-force grid oracle on 50 rank-2 states",
        ok,
        f"max|diff|={worst:.2e}, {elapsed:.0f}s",
    )


def test_criterion_7_random_audit_soundness():
    start = time.perf_counter()
    betas = (0.3, 0.5, 0.8)
    ok = True
    detail = []

    all_records = []
    for dims, trials in (((2, 2, 2), 200), ((2, 2, 3), 100)):
        config = pl.AuditConfig(dims=dims, trials=trials, betas=betas, master_seed=42, threads=1)
        records, summary = pl.random_audit(config)
        all_records.append((config, records, summary))

        ok = ok and summary.verified + summary.inconclusive + summary.not_applicable == trials
        ok = ok and summary.max_chain_residual <= 1e-12
        for record in records:
            ok = ok and record.verdict in (pl.VERIFIED, pl.INCONCLUSIVE, pl.NOT_APPLICABLE)
        for b_index, beta in enumerate(betas):
            rate = sum(
                1 for r in records if r.reports[b_index].verdict == pl.VERIFIED
            ) / trials
            ok = ok and rate >= 0.95
            detail.append(f"{'x'.join(map(str, dims))}@{beta}:{rate:.0%}")

        # byte-identical CSV across a rerun and across thread counts
        n_terms = len(dims) - 1
        baseline = audit_csv(records, n_terms)
        rerun, _ = pl.random_audit(config)
        threaded, _ = pl.random_audit(
            pl.AuditConfig(dims=dims, trials=trials, betas=betas, master_seed=42, threads=4)
        )
        ok = ok and audit_csv(rerun, n_terms) == baseline
        ok = ok and audit_csv(threaded, n_terms) == baseline

    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 900.0
    _report(
        7,
        "random audit: 200 three-qubit + 100 qudit states, soundness + determinism",
        ok,
        f"{', '.join(detail)}, {elapsed:.0f}s",
    )


def test_criterion_8_tangle_polygamy():
    start = time.perf_counter()
    w_record = pl.tangle_check(pl.w_state(3), pl.OptimizerOptions(), master_seed=42)
    ok = w_record.verdict == pl.VERIFIED
    ok = ok and abs(w_record.lhs - 8.0 / 9.0) <= 1e-12
    ok = ok and sum(w_record.estimates) >= 8.0 / 9.0 - 1e-3

    records, summary = pl.tangle_audit(100, master_seed=42)
    rate = summary.verified / 100.0
    ok = ok and rate >= 0.95
    ok = ok and summary.verified + summary.inconclusive == 100
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 600.0
    _report(
        8,
        "tangle polygamy at desk scale (W fixture + 100 random states)",
        ok,
        f"verified={rate:.0%}, W lhs={w_record.lhs:.6f}, {elapsed:.0f}s",
    )
