"""
Mean interference between two users
===================================

Splits the average interference power into its four contributions and
compares the total against a Monte-Carlo estimate.
"""

import numpy as np

from ricean_mimo import ArrayGeometry, RngStream, mean_interference, one_ring_user
from ricean_mimo.harness import monte_carlo_interference

geom = ArrayGeometry(64)
users = [
    one_ring_user(geom, 0.5, np.deg2rad(10.0), np.deg2rad(30.0)),
    one_ring_user(geom, 1.5, np.deg2rad(60.0), np.deg2rad(35.0)),
]

br = mean_interference(*users)
names = ("LoS x diffuse", "diffuse x diffuse", "LoS x LoS", "diffuse x LoS")
for name, value in zip(names, br.as_tuple()):
    print(f"{name:18s} {value:10.3f}")
print(f"{'closed-form total':18s} {br.total:10.3f}")

_, mc, se = monte_carlo_interference(users, 50_000, RngStream(seed=3))
print(f"{'Monte Carlo':18s} {mc[0]:10.3f} +/- {se[0]:.3f}")
