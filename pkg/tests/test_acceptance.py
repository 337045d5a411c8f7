"""Acceptance suite: one test per criterion, each at its stated tolerance.

Every test prints a single ``[acceptance] criterion N: PASS`` line once its
assertions hold (run with ``pytest -s`` to see them inline). Criterion 9 is
trend-level: a seeded instance that violates it is reported as a documented
deviation instead of passing silently.
"""

import time

import numpy as np
import pytest

from groupprox import (
    ExperimentConfig,
    ScalarPenalty,
    candidate_for_support,
    grid_min,
    magnitude_at_threshold,
    objective_J,
    prox_l1q,
    prox_l2q,
    prox_scalar,
    run_convergence,
    run_sweep,
    sort_signed,
    support_table,
    t_tilde,
    threshold_c,
    zero_region_scan,
)

PEN_HALF = ScalarPenalty(1.0, 0.5)
PEN_23 = ScalarPenalty(1.0, 2.0 / 3.0)


def _report(n, detail):
    print(f"\n[acceptance] criterion {n}: PASS — {detail}")


def test_criterion_1_example1_regression():
    y = np.array([5.0 / 3.0, 1.0 / 3.0])
    ps = prox_l1q(y, PEN_HALF)
    assert len(ps.minimizers) == 1
    np.testing.assert_allclose(ps.minimizers[0], [1.2126, 0.0], atol=1e-3)
    assert ps.objective == pytest.approx(1.2598, abs=1e-3)
    rival = objective_J(y, np.array([7.0 / 6.0, -1.0 / 6.0]), PEN_HALF)
    assert rival == pytest.approx(1.405, abs=1e-3)
    assert rival > ps.objective
    assert objective_J(y, np.zeros(2), PEN_HALF) == pytest.approx(13.0 / 9.0, rel=1e-12)

    prox_l1q(y, PEN_HALF)  # warm
    best = float("inf")
    for _ in range(5):
        t0 = time.perf_counter()
        prox_l1q(y, PEN_HALF)
        best = min(best, time.perf_counter() - t0)
    assert best < 1e-3
    _report(1, f"counterexample 1 reproduced; prox runtime {best * 1e6:.0f} us")


def test_criterion_2_example2_regression():
    y = np.array([1.5, 0.7])
    ps = prox_l1q(y, PEN_23)
    assert len(ps.minimizers) == 1
    np.testing.assert_allclose(ps.minimizers[0], [0.774, 0.0], atol=1e-3)
    table = support_table(sort_signed(y), PEN_23)
    assert table[0]["c"] == pytest.approx(0.726, abs=1e-3)
    assert table[1]["c"] == pytest.approx(0.753, abs=1e-3)
    j_zero = objective_J(y, np.zeros(2), PEN_23)
    assert ps.objective == pytest.approx(1.3515, abs=1e-3)
    assert j_zero == pytest.approx(1.37, abs=1e-3)
    assert ps.objective < j_zero
    _report(2, "counterexample 2 reproduced with c_1/c_2 diagnostics")


def test_criterion_3_boundary_multivaluedness():
    cases = [
        (np.array([1.5, 0.2]), [1.0, 0.0]),
        (np.array([1.5, 0.5]), [1.0, 0.0]),
        (
            np.array([3.0 / 2.0 ** (4.0 / 3.0)] * 2),
            [2.0 ** (-1.0 / 3.0)] * 2,
        ),
    ]
    for y, nonzero in cases:
        ps = prox_l1q(y, PEN_HALF)
        assert len(ps.minimizers) == 2, f"expected two minimizers at {y}"
        assert not np.any(ps.minimizers[0])
        np.testing.assert_allclose(ps.minimizers[1], nonzero, atol=1e-9)
        j0 = objective_J(y, ps.minimizers[0], PEN_HALF)
        j1 = objective_J(y, ps.minimizers[1], PEN_HALF)
        assert abs(j0 - j1) <= 1e-9
    _report(3, "three tie anchors give exactly {0, u} with |dJ| <= 1e-9")


def test_criterion_4_scalar_thresholds():
    assert threshold_c(PEN_HALF) == pytest.approx(1.5, abs=1e-3)
    assert magnitude_at_threshold(PEN_HALF) == pytest.approx(1.0, abs=1e-3)
    assert threshold_c(PEN_23) == pytest.approx(2.0 * (2.0 / 3.0) ** 0.75, abs=1e-3)
    assert t_tilde(PEN_HALF, 1) == pytest.approx(1.1906, abs=1e-3)
    assert t_tilde(PEN_HALF, 2) == pytest.approx(1.8899, abs=1e-3)
    assert t_tilde(PEN_23, 1) == pytest.approx(1.2946, abs=1e-3)
    assert t_tilde(PEN_23, 2) == pytest.approx(2.1773, abs=1e-3)
    _report(4, "closed-form thresholds and root-existence bounds match")


def test_criterion_5_oracle_equivalence():
    rng = np.random.default_rng(20250809)
    t_start = time.perf_counter()
    support_matches = 0
    for _ in range(1000):
        n = int(rng.integers(1, 4))
        nu = float(rng.uniform(0.25, 4.0))
        q = float(rng.choice([0.3, 0.5, 2.0 / 3.0, 0.8]))
        p = int(rng.choice([1, 2]))
        y = rng.uniform(0.0, 3.0, n) * rng.choice([-1.0, 1.0], n)
        pen = ScalarPenalty(nu, q)
        exact = prox_l1q(y, pen) if p == 1 else prox_l2q(y, pen)
        oracle = grid_min(y, pen, p=p, levels=3)
        assert exact.objective <= oracle.objective + 1e-4
        for m in exact.minimizers:
            if np.array_equal(m != 0, oracle.minimizer != 0):
                support_matches += 1
                np.testing.assert_allclose(
                    m, oracle.minimizer, atol=2.0 * oracle.grid_resolution + 1e-12
                )
                break
    elapsed = time.perf_counter() - t_start
    assert elapsed < 60.0
    _report(
        5,
        f"1000 instances certified in {elapsed:.1f}s; "
        f"{support_matches} oracle support matches",
    )


def test_criterion_6_property_suite():
    rng = np.random.default_rng(424242)
    q_grid = [0.3, 0.5, 2.0 / 3.0, 0.8]

    # stationarity residual <= 1e-8 on nonzero minimizers
    for _ in range(200):
        n = int(rng.integers(1, 6))
        pen = ScalarPenalty(float(rng.uniform(0.25, 3.0)), float(rng.choice(q_grid)))
        y = rng.normal(0.0, 1.5, n)
        for m in prox_l1q(y, pen).minimizers:
            mass = float(np.abs(m).sum())
            if mass == 0.0:
                continue
            on = m != 0
            resid = y[on] - m[on] - pen.nu * pen.q * mass ** (pen.q - 1.0) * np.sign(m[on])
            assert np.max(np.abs(resid)) <= 1e-8

    # signed-permutation equivariance, exact up to ordering
    for _ in range(150):
        n = int(rng.integers(1, 6))
        pen = ScalarPenalty(float(rng.uniform(0.25, 3.0)), float(rng.choice(q_grid)))
        y = rng.normal(0.0, 1.5, n)
        perm = rng.permutation(n)
        signs = rng.choice([-1.0, 1.0], n)
        base = prox_l1q(y, pen)
        mapped = prox_l1q(signs * y[perm], pen)
        assert len(base.minimizers) == len(mapped.minimizers)
        expect = sorted(tuple(signs * m[perm]) for m in base.minimizers)
        got = sorted(tuple(m) for m in mapped.minimizers)
        for e, g in zip(expect, got):
            np.testing.assert_array_equal(e, g)

    # scaling identity and odd symmetry of the scalar operator
    for _ in range(300):
        q = float(rng.choice(q_grid))
        nu = float(rng.uniform(0.1, 5.0))
        alpha = float(rng.uniform(0.1, 10.0))
        tau = float(rng.uniform(-8.0, 8.0))
        left = prox_scalar(ScalarPenalty(nu * alpha, q), alpha * tau)
        right = prox_scalar(ScalarPenalty(nu * alpha ** (q - 1.0), q), tau)
        assert len(left.values) == len(right.values)
        for lv, rv in zip(left.values, right.values):
            assert lv == pytest.approx(alpha * rv, rel=1e-9, abs=1e-12)
        neg = prox_scalar(ScalarPenalty(nu, q), -tau)
        pos = prox_scalar(ScalarPenalty(nu, q), tau)
        assert tuple(-v for v in pos.values) == neg.values

    # zero-region downward closure on a 0.02-step scan of [0, 2]^2
    step = 0.02
    axis = step * np.arange(int(round(2.0 / step)) + 1)
    member = np.empty((axis.size, axis.size), dtype=bool)
    for i, y1 in enumerate(axis):
        for j, y2 in enumerate(axis):
            ps = prox_l1q(np.array([y1, y2]), PEN_HALF)
            member[i, j] = any(not np.any(m) for m in ps.minimizers)
    prefix = np.logical_and.accumulate(np.logical_and.accumulate(member, 0), 1)
    assert not (member[1:, 1:] & ~prefix[:-1, :-1]).any()

    # max-support consistency whenever its hypotheses are met
    activations = 0
    for _ in range(2000):
        n = int(rng.integers(2, 6))
        pen = ScalarPenalty(float(rng.uniform(0.25, 2.0)), float(rng.choice(q_grid)))
        y = rng.uniform(0.0, 2.2, n)
        view = sort_signed(y)
        if view.z[0] <= threshold_c(pen):
            continue
        cands = [
            c
            for s in range(1, n + 1)
            if (c := candidate_for_support(view, s, pen)) is not None
        ]
        if len(cands) < 2:
            continue
        activations += 1
        ps = prox_l1q(y, pen)
        best = max(cands, key=lambda c: c.s)
        assert best.objective <= ps.objective + 1e-10 * (1.0 + ps.objective)
    _report(6, f"all property families clean (max-support cases hit: {activations})")


def test_criterion_7_region_geometry():
    step = 0.02
    # keep-or-kill penalty: the zero region is the open disk of radius sqrt(2)
    axis, grid0 = zero_region_scan(0.0, 2.0, step, ScalarPenalty(1.0, 0.0))
    radius = np.sqrt(2.0)
    for i, y1 in enumerate(axis):
        inside = grid0[i]
        col_norms = np.hypot(y1, axis)
        scan_boundary = axis[inside].max() if inside.any() else None
        analytic = np.sqrt(radius**2 - y1**2) if y1 <= radius else None
        if analytic is None:
            assert scan_boundary is None or scan_boundary == 0.0 and y1 < radius
        else:
            assert scan_boundary is not None or analytic <= step
            if scan_boundary is not None:
                assert abs(scan_boundary - analytic) <= step + 1e-12
        # classification is exact off the boundary band
        assert np.all(inside[col_norms <= radius - step])
        assert not np.any(inside[col_norms >= radius + step])

    # soft-threshold penalty: the zero region is the closed unit square
    axis, grid1 = zero_region_scan(0.0, 2.0, step, ScalarPenalty(1.0, 1.0))
    for i, y1 in enumerate(axis):
        inside = grid1[i]
        scan_boundary = axis[inside].max() if inside.any() else None
        if y1 <= 1.0 + 1e-12:
            assert scan_boundary is not None
            assert abs(scan_boundary - 1.0) <= step + 1e-12
        else:
            assert scan_boundary is None
    _report(7, "q=0 disk and q=1 square boundaries within one grid step")


# shared by criteria 8 and the sweep CSV shape check
DESK_CONFIG = ExperimentConfig(
    m=64,
    l=256,
    r=32,
    k=1,
    sigma=0.001,
    trials=20,
    seed=42,
    lambda_scale=3e-4,
    variants=((2, 1.0), (2, 2.0 / 3.0), (2, 0.5), (1, 2.0 / 3.0), (1, 0.5), (1, 1.0)),
    max_iter=2000,
    rel_tol=1e-7,
)


def test_criterion_8_recovery_experiment():
    t0 = time.perf_counter()
    result = run_sweep(DESK_CONFIG, [1, 2, 3, 4, 5, 6])
    elapsed = time.perf_counter() - t0
    assert elapsed < 600.0

    rates = {}
    for row in result.rows:
        rates[(round(row.sparsity_level * DESK_CONFIG.r), row.p, row.q)] = row.success_rate

    # (a) lowest level: every variant recovers every trial
    for p, q in DESK_CONFIG.variants:
        assert rates[(1, p, q)] == 1.0, f"variant ({p},{q}) failed at k=1"

    # (b) some mid-range level puts q=1/2 at or above q=1 for both p
    mid_ok = [
        k
        for k in (2, 3, 4, 5, 6)
        if rates[(k, 1, 0.5)] >= rates[(k, 1, 1.0)]
        and rates[(k, 2, 0.5)] >= rates[(k, 2, 1.0)]
    ]
    assert mid_ok, "no mid-range level with q=1/2 matching q=1"
    # and the comparison is non-vacuous somewhere
    assert any(
        rates[(k, 1, 0.5)] > 0.0 or rates[(k, 2, 0.5)] > 0.0 for k in mid_ok
    )
    _report(
        8,
        f"desk-scale sweep in {elapsed:.0f}s; k=1 all-ones; "
        f"q=1/2 >= q=1 at k in {mid_ok}",
    )


def test_criterion_9_convergence_trend():
    config = ExperimentConfig(
        m=128,
        l=500,
        r=100,
        k=1,
        sigma=0.001,
        trials=1,
        seed=7,
        lambda_scale=3e-4,
        variants=((1, 0.5), (2, 0.5)),
        max_iter=60,
        rel_tol=0.0,
    )
    result = run_convergence(config, 0.01, max_iter=60)
    it1, rel1 = result.series(1, 0.5)
    it2, rel2 = result.series(2, 0.5)
    common = min(len(rel1), len(rel2))
    wins = [
        k for k in range(common) if it1[k] <= 50 and rel1[k] < rel2[k]
    ]
    if not wins:
        pytest.xfail(
            "documented deviation: the seeded 1%-sparsity instance does not "
            "show the l1q-below-l2q trend within 50 iterations (trend-level "
            "claim only)"
        )
    _report(9, f"(1, 1/2) below (2, 1/2) at {len(wins)} of the first 50 iterations")


def test_criterion_10_paper_scale_smoke(tmp_path):
    config = ExperimentConfig(
        m=256,
        l=1024,
        r=128,
        k=1,
        sigma=0.001,
        trials=100,
        seed=20250809,
        lambda_scale=3e-4,
        max_iter=250,
        rel_tol=1e-5,
    )
    result = run_sweep(config, [1])
    out = tmp_path / "paper_scale_sweep.csv"
    result.to_csv(out)
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "sparsity_level,p,q,success_rate,trials"
    assert len(lines) == 1 + len(config.variants)
    for line in lines[1:]:
        level, p, q, rate, trials = line.split(",")
        assert trials == "100"
        assert 0.0 <= float(rate) <= 1.0
        assert float(level) == pytest.approx(1.0 / 128.0)
    _report(10, "paper-scale 100-trial sweep completed; CSV well-formed")
