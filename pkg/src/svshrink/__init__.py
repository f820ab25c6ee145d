"""Optimal singular value shrinkage for low-rank matrix denoising."""

__version__ = "0.1.0"

from .denoise import DenoiseReport, denoise, denoise_optimal, svd
from .exceptions import CrossingError, DomainError, MinimizerError, SVDConvergenceError
from .losses import FROBENIUS, NUCLEAR, OPERATOR, Decomposability, LossFamily, builtin_losses, get_loss
from .noise import MpDistribution, mp_median, sigma_hat
from .shrinkers import (
    Shrinker,
    baseline_shrinkers,
    frobenius_shrinker,
    nuclear_shrinker,
    operator_shrinker,
    optimal_shrinker,
    recalibrate,
)
from .solver import asymptotic_loss, build_optimal_shrinker, crossing_point, eta_star_star
from .spike_model import SpikeCosines, SpikeModel
