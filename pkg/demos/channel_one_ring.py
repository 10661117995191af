"""
One-ring covariance and Ricean channel draws
============================================

Builds a correlated covariance for a user seen under a narrow angular
spread, looks at how its energy piles into a few eigen-directions, and
draws channel realizations around the line-of-sight mean.
"""

import numpy as np

from ricean_mimo import ArrayGeometry, RngStream, one_ring_user, sample_channels
from ricean_mimo.linalg import hermitian_eig

geom = ArrayGeometry(128)

# Narrow and wide spreads around broadside + 20 degrees
for spread_deg in (5.0, 60.0):
    user = one_ring_user(geom, k_factor=1.0, delta=np.deg2rad(spread_deg), phi0=np.deg2rad(20.0))
    lam = hermitian_eig(user.covariance).eigenvalues
    share = np.cumsum(lam) / lam.sum()
    print(f"spread {spread_deg:4.1f} deg: top eigenvalue / M = {lam[0] / geom.m:.3f}, "
          f"eigenvalues for 90% energy = {np.searchsorted(share, 0.9) + 1}")

# Sample mean converges to the weighted LoS vector sqrt(K/(K+1)) h
g = sample_channels(user, RngStream(seed=1).generator(), 20_000)
err = np.linalg.norm(g.mean(axis=1) - user.mean()) / np.sqrt(geom.m)
print(f"per-antenna error of the sample mean: {err:.4f}")

# Sample covariance of the fluctuation matches (1/(K+1)) R
dev = g - user.mean()[:, None]
r_hat = dev @ dev.conj().T / g.shape[1]
rel = np.linalg.norm(r_hat - user.diffuse_weight * user.covariance) / np.linalg.norm(user.covariance)
print(f"relative covariance error: {rel:.3f}")
