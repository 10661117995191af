"""
Which favorable-propagation condition breaks?
=============================================

Sweeps the antenna count and fits log-log slopes of the three normalized
cross terms.  A slope near -1 means the term vanishes; a flat curve means
it does not.
"""

from ricean_mimo.harness import parse_config, run_scaling_experiment

grid = [64, 128, 256, 512, 1024]
cases = {
    "i.i.d. Rayleigh": {},
    "one-ring, 10 deg": {"delta_deg": 10.0, "k_factor_mode": "fixed"},
    "shared spiked covariance": {"scenario": {"kind": "SharedSpikedCovariance"}},
    "near-aligned LoS": {"scenario": {"kind": "LosNearAligned", "gamma": 1.0}},
}
for name, extra in cases.items():
    cfg = parse_config(dict(experiment="scaling", m=grid, l=2, seed=4, **extra))
    rep = run_scaling_experiment(cfg)
    slopes = ", ".join(f"{s:6.2f}" for s in rep.slopes)
    print(f"{name:26s} slopes = [{slopes}]  {rep.classification()}")
