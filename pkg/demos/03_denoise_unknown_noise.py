"""Denoising a low-rank matrix when the noise level is unknown.

Run: python demos/03_denoise_unknown_noise.py
"""

import numpy as np

from svshrink.denoise import denoise, denoise_optimal
from svshrink.shrinkers import hard_threshold_shrinker
from svshrink.spike_model import SpikeModel

rng = np.random.default_rng(7)
m, n, sigma = 300, 600, 0.8

# %% A rank-3 signal whose singular values sit at 4, 2.5 and 1.2 noise units
U, _ = np.linalg.qr(rng.normal(size=(m, 3)))
V, _ = np.linalg.qr(rng.normal(size=(n, 3)))
X = np.sqrt(n) * sigma * (U * [4.0, 2.5, 1.2]) @ V.T
Y = X + sigma * rng.normal(size=(m, n))

# %% Estimate sigma from the median singular value, then shrink
Xhat, rep = denoise_optimal(Y, "frobenius")
print(f"sigma estimate {rep.sigma_used:.4f} (true {sigma}), kept {rep.effective_rank} components")
print("rescaled singular values in :", np.round(rep.singular_values_in[:5], 3))
print("rescaled singular values out:", np.round(rep.singular_values_out[:5], 3))

# %% Compare with keeping every component above the bulk edge untouched
Xhard, _ = denoise(Y, hard_threshold_shrinker(SpikeModel(m / n)), sigma=rep.sigma_used)
err = lambda A: np.sum((A - X) ** 2) / np.sum(X**2)
print(f"relative squared error: optimal {err(Xhat):.4f}, hard threshold {err(Xhard):.4f}, raw {err(Y):.4f}")
