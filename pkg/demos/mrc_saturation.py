"""
MRC spectral efficiency against array size
==========================================

Two users with the published large-scale gains.  A benign pair gains
about a bit per doubling of M; an aligned-LoS pair flattens out early.
"""

from ricean_mimo.harness import parse_config, run_saturation_sweep

grid = [32, 64, 128, 256]
common = dict(experiment="saturation", m=grid, l=2, trials=50, seed=2)
runs = {
    "i.i.d. baseline": dict(common),
    "aligned LoS, K=1, 60 deg": dict(common, delta_deg=60.0, k_factor_mode="fixed",
                                     scenario={"kind": "LosAligned"}),
}
for name, doc in runs.items():
    rows = run_saturation_sweep(parse_config(doc))
    print(name)
    for r in rows:
        print(f"  M={r.m:4d}  SE={r.mean_se:.3f} +/- {r.se_stderr:.3f}")
