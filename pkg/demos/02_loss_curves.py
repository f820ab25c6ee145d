"""Asymptotic loss of one spike as its strength grows.

Writes loss_curves.csv next to the working directory; plot it with any tool.
Run: python demos/02_loss_curves.py
"""

import numpy as np

from svshrink.losses import get_loss
from svshrink.shrinkers import resolve_shrinker
from svshrink.solver import loss_curve
from svshrink.spike_model import SpikeModel

model = SpikeModel(1.0)
xs = np.linspace(0.2, 4.0, 39)
ids = ["optimal", "hard", "zero", "frobenius"]

# %% Operator loss at beta = 1: the optimum is flat at 1 above the critical
# spike, while hard thresholding pays more just past the transition.
loss = get_loss("operator")
curves = {sid: loss_curve(loss, model, resolve_shrinker(sid, loss.name, model), xs, sid) for sid in ids}

rows = np.column_stack([xs] + [[v for _, v in c.samples] for c in curves.values()])
np.savetxt("loss_curves.csv", rows, delimiter=",", header="x," + ",".join(ids), comments="", fmt="%.10g")

for x, *vals in rows[::4]:
    print(f"x={x:4.2f}  " + "  ".join(f"{sid}={v:.4f}" for sid, v in zip(ids, vals)))
