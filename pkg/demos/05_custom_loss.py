"""Tabulating the optimal shrinker for a loss with no closed form.

The Schatten-4 loss sum(sigma_i^4) of the error is decomposable as a sum, so
the 2x2 reduction applies and the optimum can be found numerically.
Run: python demos/05_custom_loss.py
"""

import numpy as np

from svshrink.losses import Decomposability, LossFamily, delta_stats
from svshrink.shrinkers import optimal_shrinker
from svshrink.solver import build_optimal_shrinker
from svshrink.spike_model import SpikeModel


def schatten4(A, B):
    _, _, sp, sm = delta_stats(A, B)
    return sp**4 + sm**4


loss = LossFamily("schatten4", Decomposability.SUM, schatten4, lambda a, b: (a - b) ** 4)
model = SpikeModel(0.5)

# %% Tabulate on 256 knots; the midpoint check reports the interpolation error.
# Here it comes from the first knot interval, only 1e-8 wide: this shrinker
# rises steeply out of zero, faster than a square root.
tab = build_optimal_shrinker(loss, model, y_max=10.0, n_knots=256)
print(f"crossing spike {tab.crossing_x:.4f}, threshold {tab.threshold_y:.4f}")
print(f"max midpoint error {tab.max_midpoint_error:.2e}, proper constant {tab.proper_constant:.4f}")

# %% It lands between the Frobenius and operator shrinkers
fro, op = optimal_shrinker("frobenius", model), optimal_shrinker("operator", model)
for y in np.array([1.8, 2.0, 3.0, 6.0]):
    print(f"y={y:.1f}  frobenius {fro.eval(y):.4f}  schatten4 {tab.eval(y):.4f}  operator {op.eval(y):.4f}")
