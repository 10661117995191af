"""
End-to-end acceptance checks.

Each test records a one-line verdict in ``RESULTS``; ``conftest.py`` prints
them in the terminal summary.  Run alone with::

    pytest tests/test_acceptance.py -v
"""
import json

import numpy as np
import pytest

from ricean_mimo.channel import ArrayGeometry, ula_los
from ricean_mimo.interference import alignment_profile, mean_interference, quadratic_form, ritz_bounds
from ricean_mimo.harness import (
    parse_config,
    run_cdf_experiment,
    run_gram_experiment,
    run_saturation_sweep,
    run_scaling_experiment,
    run_term_validation,
)
from ricean_mimo.harness.cli import main as cli_main
from ricean_mimo.scenarios import build_scenario_3, scenario_4_angle

from conftest import random_los, random_psd

pytestmark = pytest.mark.slow

RESULTS: list[str] = []


def report(number, ok, detail):
    RESULTS.append(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_criterion_01_closed_form_matches_monte_carlo():
    worst = 0.0
    for g in range(20):
        cfg = parse_config(dict(
            experiment="terms", m=64, l=4, k_factor_mode="uniform", k_bounds=[0, 2],
            delta_deg=10.0 if g % 2 == 0 else 60.0, large_scale="unit", trials=200_000, seed=1000 + g,
        ))
        worst = max(worst, max(abs(p.z) for p in run_term_validation(cfg)))
    report(1, worst <= 4.0, f"max |z| over 20 geometries x 6 pairs = {worst:.3f} (limit 4)")


def test_criterion_02_aligned_los_term_is_quarter():
    errs = []
    for m in (16, 100, 1024):
        u1, u2 = build_scenario_3(m, theta=0.3, k_factors=(1.0, 1.0))
        errs.append(abs(mean_interference(u1, u2).term3 / m**2 - 0.25))
    report(2, max(errs) <= 1e-12, f"max |term3/M^2 - 0.25| = {max(errs):.2e} (limit 1e-12)")


def test_criterion_03_near_aligned_limit():
    m = 100_000
    geom = ArrayGeometry(m)
    theta_k = 0.0
    theta_l = scenario_4_angle(theta_k, 1.0, m)
    overlap = np.vdot(ula_los(geom, theta_l), ula_los(geom, theta_k))
    metric = abs(overlap) ** 2 / m**2
    err = abs(metric - 4 / np.pi**2)
    cfg = parse_config(dict(experiment="scaling", m=[64, 128, 256, 512, 1024], l=2,
                            scenario={"kind": "LosNearAligned", "gamma": 1.0, "theta_deg": 0.0}))
    cls = run_scaling_experiment(cfg).classification()["c3"]
    report(3, err <= 1e-3 and cls == "non-vanishing",
           f"|metric(1e5) - 4/pi^2| = {err:.2e} (limit 1e-3), c3 class = {cls}")


def test_criterion_04_trace_product_scaling():
    grid = [64, 128, 256, 512, 1024]
    iid = run_scaling_experiment(parse_config(dict(experiment="scaling", m=grid, l=2)))
    exact = np.all(iid.c2 == 1.0 / np.asarray(grid))
    slope = np.polyfit(np.log(grid), np.log(iid.c2), 1)[0]
    spiked = run_scaling_experiment(parse_config(dict(
        experiment="scaling", m=grid, l=2, scenario={"kind": "SharedSpikedCovariance"})))
    rel = abs(spiked.c2[-1] - 0.25) / 0.25
    cls = spiked.classification()["c2"]
    ok = exact and abs(slope + 1) <= 0.01 and rel <= 0.02 and cls == "non-vanishing"
    report(4, ok, f"iid c2 == 1/M: {exact}, slope = {slope:.4f}; spiked c2(1024) rel err = {rel:.4f}, class = {cls}")


def test_criterion_05_gram_concentration():
    rows = run_gram_experiment(parse_config(dict(experiment="gram", m=[64, 128, 256], l=4, trials=10_000, seed=5)))
    s3_exact = all(r.s3_var == 1.0 / r.m for r in rows)
    z = [abs(r.max_entry_msd - 1.0 / r.m) / r.max_entry_se for r in rows]
    ratios = [b.max_entry_msd / a.max_entry_msd for a, b in zip(rows, rows[1:])]
    ok = s3_exact and max(z) <= 4 and all(0.4 <= q <= 0.6 for q in ratios)
    report(5, ok, f"s3 == 1/M: {s3_exact}, max z = {max(z):.2f}, ratios = {[round(q, 3) for q in ratios]}")


def test_criterion_06_eigenbasis_identity():
    rng = np.random.default_rng(6)
    m = 128
    err_q = err_b = 0.0
    for _ in range(100):
        h, r = random_los(rng, m), random_psd(rng, m, rank=int(rng.integers(1, m + 1)))
        prof = alignment_profile(h, r)
        err_q = max(err_q, abs(quadratic_form(h, r) / m**2 - prof.normalized_quadratic_form()))
        err_b = max(err_b, abs(np.sum(np.abs(prof.betas) ** 2) - 1))
    report(6, err_q <= 1e-9 and err_b <= 1e-9, f"quadratic-form err = {err_q:.2e}, |sum beta^2 - 1| = {err_b:.2e}")


def test_criterion_07_rayleigh_ritz_sandwich():
    rng = np.random.default_rng(7)
    violations = 0
    for m in (16, 64):
        for _ in range(1000):
            h, r = random_los(rng, m), random_psd(rng, m, rank=int(rng.integers(1, m + 1)))
            lo, hi = ritz_bounds(h, r)
            q = quadratic_form(h, r) / m**2
            tol = 1e-12 * max(hi, 1.0)
            violations += not (lo - tol <= q <= hi + tol and hi <= 1 + 1e-12)
    report(7, violations == 0, f"{violations} violations in 2000 instances")


def test_criterion_08_capacity_cdf_properties():
    base = dict(experiment="cdf", m=100, l=10, k_factor_mode="zero", trials=1000, seed=0)
    case1 = run_cdf_experiment(parse_config(base))
    case2 = run_cdf_experiment(parse_config(dict(base, delta_deg=10.0)))
    dropped = run_cdf_experiment(parse_config(dict(base, delta_deg=10.0, drop_count=2)))
    case1_same_users = run_cdf_experiment(parse_config(base), retained=dropped.retained)
    gap = case1.percentile(5) - case2.percentile(5)
    gap_dropped = case1_same_users.percentile(5) - dropped.percentile(5)
    shrink = 1 - gap_dropped / gap
    rel_std = np.std(case1.per_trial_values) / case1.mean
    ok = gap > 0 and shrink >= 0.5 and rel_std < 0.1
    report(8, ok, f"(i) P5 gap = {gap:.4f} > 0; (ii) shrink after dropping 2 = {shrink:.3f} (need >= 0.5); "
                  f"(iii) case-1 std/mean = {rel_std:.4f}")


def test_criterion_09_saturation():
    grid = [32, 64, 128, 256, 512]
    common = dict(experiment="saturation", m=grid, l=2, delta_deg=60.0, k_factor_mode="fixed",
                  k_factor=1.0, large_scale=[0.749, 0.546], trials=200, seed=9)
    gains, final = {}, {}
    for kind in ("EigenAligned", "SharedSpikedCovariance", "LosAligned"):
        rows = run_saturation_sweep(parse_config(dict(common, scenario={"kind": kind})))
        gains[kind] = rows[3].mean_se - rows[2].mean_se
        final[kind] = rows[4].mean_se
    base = run_saturation_sweep(parse_config(dict(common, delta_deg=None, k_factor_mode="zero")))
    base_gain = base[3].mean_se - base[2].mean_se
    saturating = all(g < 0.1 for g in gains.values())
    lowest = min(final, key=final.get) == "LosAligned"
    ok = saturating and base_gain > 0.5 and lowest
    detail = ", ".join(f"{k} gain {v:+.3f}" for k, v in gains.items())
    report(9, ok, f"{detail}; baseline gain {base_gain:+.3f}; aligned-LoS lowest at 512: {lowest}")


def test_criterion_10_thread_count_determinism(tmp_path):
    configs = {
        "terms": dict(m=32, l=3, k_factor_mode="uniform", delta_deg=10.0, trials=5000),
        "cdf": dict(m=32, l=6, delta_deg=10.0, drop_count=1, trials=40),
        "saturation": dict(m=[16, 32], l=2, delta_deg=60.0, k_factor_mode="fixed", trials=20,
                           scenario={"kind": "EigenAligned"}),
        "gram": dict(m=[16, 32], l=3, trials=3000),
        "scaling": dict(m=[16, 32, 64, 128], l=2, delta_deg=10.0),
    }
    same = []
    for name, doc in configs.items():
        cfg = tmp_path / f"{name}.json"
        cfg.write_text(json.dumps(dict(doc, seed=42)))
        outs = []
        for threads in (1, 4):
            out = tmp_path / f"{name}-{threads}.csv"
            assert cli_main([name, "--config", str(cfg), "--out", str(out), "--threads", str(threads)]) == 0
            outs.append(out.read_bytes())
        same.append(outs[0] == outs[1])
    report(10, all(same), f"byte-identical across 1 and 4 threads: {dict(zip(configs, same))}")
