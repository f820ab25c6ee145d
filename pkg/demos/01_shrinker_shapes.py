"""How the three optimal shrinkers bend the data singular values.

Run: python demos/01_shrinker_shapes.py
"""

import numpy as np

from svshrink.shrinkers import hard_threshold_shrinker, optimal_shrinker
from svshrink.spike_model import SpikeModel

# %% A wide matrix with m/n = 0.5: noise singular values fill [0, 1 + sqrt(0.5)]
model = SpikeModel(0.5)
print(f"bulk edge {model.bulk_edge:.4f}, critical spike {model.critical_x:.4f}")

shrinkers = {name: optimal_shrinker(name, model) for name in ("frobenius", "operator", "nuclear")}
shrinkers["hard"] = hard_threshold_shrinker(model)

# %% Everything inside the bulk is set to zero. The nuclear shrinker waits a
# little longer before it lets anything through.
for name, sh in shrinkers.items():
    print(f"{name:>9}: threshold {sh.threshold_y:.4f}")

ys = np.array([1.5, 1.72, 1.8, 2.0, 2.5, 3.0, 5.0, 10.0])
print("\n     y " + "".join(f"{name:>11}" for name in shrinkers))
for y in ys:
    print(f"{y:6.2f} " + "".join(f"{sh.eval(y):11.4f}" for sh in shrinkers.values()))

# %% Far from the bulk every optimal shrinker approaches the identity
print("\neta(100) / 100:", {k: round(v.eval(100.0) / 100.0, 5) for k, v in shrinkers.items()})
