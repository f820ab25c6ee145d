"""Matrix denoising by singular value shrinkage.

A shrinker calibrated for ``Y = X + Z/sqrt(n)`` is applied to data from
``Y = X + sigma Z`` by rescaling: ``Xhat = sqrt(n) sigma * Xhat_eta(Y / (sqrt(n) sigma))``.
When ``sigma`` is unknown it is replaced by the median-based estimate
:func:`svshrink.noise.sigma_hat`. Wide and tall inputs are handled alike; the
rank reduction always runs on the orientation with ``m <= n``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .exceptions import DomainError, SVDConvergenceError
from .noise import median_singular_value, mp_median, sigma_hat
from .shrinkers import Shrinker, optimal_shrinker
from .spike_model import SpikeModel


def svd(A, full_matrices: bool = True):
    """SVD ``A = U diag(d) V'`` with ``d`` descending.

    ``U`` is m x m and ``V`` is n x n unless ``full_matrices`` is False.
    LAPACK non-convergence is re-raised as :class:`SVDConvergenceError`.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    try:
        U, d, Vt = np.linalg.svd(A, full_matrices=full_matrices)
    except np.linalg.LinAlgError as exc:
        raise SVDConvergenceError(str(exc)) from exc
    return U, d, Vt.T


class SigmaSource(enum.Enum):
    KNOWN = "known"
    ESTIMATED = "estimated"


@dataclass
class DenoiseReport:
    """What was done to one matrix; singular values are in natural units."""

    sigma_used: float
    sigma_source: SigmaSource
    beta: float
    singular_values_in: np.ndarray
    singular_values_out: np.ndarray
    effective_rank: int
    loss_id: str
    transposed: bool = False
    mu_beta: float | None = None
    y_med: float | None = None
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["sigma_source"] = self.sigma_source.value
        out["singular_values_in"] = [float(v) for v in self.singular_values_in]
        out["singular_values_out"] = [float(v) for v in self.singular_values_out]
        return out


def denoise(Y, sh: Shrinker, sigma: float | None = None, loss_id: str = ""):
    """Shrink the singular values of ``Y``; returns ``(Xhat, report)``.

    ``sh`` must be calibrated for the natural noise level (``calibration_sigma
    == 1``). With ``sigma=None`` the noise level is estimated from the median
    singular value.
    """
    Y = np.asarray(Y, dtype=float)
    if Y.ndim != 2 or 0 in Y.shape:
        raise ValueError(f"expected a non-empty 2-d matrix, got shape {Y.shape}")
    if sh.calibration_sigma != 1.0:
        raise DomainError(
            "denoise expects a shrinker in natural calibration; got "
            f"calibration_sigma={sh.calibration_sigma!r}"
        )
    transposed = Y.shape[0] > Y.shape[1]
    W = Y.T if transposed else Y
    m, n = W.shape
    beta = m / n
    notes = []
    if m == 1:
        notes.append("single-row input: beta = 1/n lies outside the asymptotic theory")

    U, d, V = svd(W, full_matrices=False)
    mu = y_med = None
    if sigma is None:
        source = SigmaSource.ESTIMATED
        mu = mp_median(beta, 1e-10)
        y_med = median_singular_value(d)
        s = sigma_hat(d, n, beta)
    else:
        source = SigmaSource.KNOWN
        s = float(sigma)
    if not (math.isfinite(s) and s > 0):
        raise DomainError(f"noise level must be positive and finite, got {s!r}")

    scale = math.sqrt(n) * s
    y = d / scale
    eta = np.asarray(sh(y), dtype=float)
    keep = eta > 0
    Xhat = scale * (U[:, keep] * eta[keep]) @ V[:, keep].T
    if transposed:
        Xhat = Xhat.T
    report = DenoiseReport(
        sigma_used=s,
        sigma_source=source,
        beta=beta,
        singular_values_in=y,
        singular_values_out=eta,
        effective_rank=int(np.count_nonzero(keep)),
        loss_id=loss_id or sh.source,
        transposed=transposed,
        mu_beta=mu,
        y_med=y_med,
        warnings=notes,
    )
    return Xhat, report


def aspect_ratio(Y) -> float:
    m, n = np.shape(Y)
    return min(m, n) / max(m, n)


def denoise_optimal(Y, loss_id: str, sigma: float | None = None):
    """:func:`denoise` with the closed-form optimal shrinker for ``loss_id``."""
    sh = optimal_shrinker(loss_id, SpikeModel(aspect_ratio(Y)))
    return denoise(Y, sh, sigma=sigma, loss_id=loss_id)
