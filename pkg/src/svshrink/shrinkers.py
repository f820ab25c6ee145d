"""Singular value shrinkers: closed-form optima, baselines, recalibration.

All shrinkers here are calibrated for the natural noise level ``1/sqrt(n)``,
i.e. they act on singular values of ``Y = X + Z/sqrt(n)``. Use
:func:`recalibrate` (or :func:`svshrink.denoise.denoise`) for other scales.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .exceptions import DomainError
from .spike_model import SpikeModel, x_of_y, y_of_x


class Provenance(enum.Enum):
    CLOSED_FORM = "closed-form"
    TABULATED = "tabulated"
    BASELINE = "baseline"


@dataclass(frozen=True)
class Shrinker:
    """A scalar nonlinearity applied to each data singular value.

    ``fn`` maps one float to one float; calling the shrinker also accepts
    arrays. Values at or below ``threshold_y`` are mapped to zero.
    ``proper`` is False for shrinkers that do not collapse the noise bulk
    (the identity), which have no asymptotic loss.
    """

    name: str
    fn: Callable[[float], float] = field(repr=False)
    threshold_y: float
    provenance: Provenance
    source: str
    calibration_sigma: float = 1.0
    proper: bool = True

    def eval(self, y: float) -> float:
        if y <= self.threshold_y:
            return 0.0
        return self.fn(y)

    def __call__(self, y):
        if np.ndim(y) == 0:
            return self.eval(float(y))
        arr = np.asarray(y, dtype=float)
        return np.array([self.eval(v) for v in arr.ravel()]).reshape(arr.shape)


def frobenius_shrinker(model: SpikeModel) -> Shrinker:
    beta = model.beta

    def fn(y):
        a = y * y - beta - 1.0
        return math.sqrt(max(a * a - 4.0 * beta, 0.0)) / y

    return Shrinker("frobenius", fn, model.bulk_edge, Provenance.CLOSED_FORM, "frobenius")


def operator_shrinker(model: SpikeModel) -> Shrinker:
    """Operator-norm optimum ``x * c_tilde(x) / c(x)`` with ``x = x(y)``.

    Minimizes the largest singular value of the 2x2 error block; the minimum
    is ``x * s_tilde(x)``. For ``beta = 1`` the two cosines agree and the rule
    reduces to ``eta(y) = x(y)``; for ``beta < 1`` it shrinks strictly below
    ``x(y)``. Jumps from 0 to ``sqrt(beta)`` just above the bulk edge.
    """
    beta = model.beta

    def fn(y):
        x = x_of_y(model, y)
        x2 = x * x
        return x * math.sqrt((x2 + beta) / (x2 + 1.0))

    return Shrinker("operator", fn, model.bulk_edge, Provenance.CLOSED_FORM, "operator")


def signal_level_shrinker(model: SpikeModel) -> Shrinker:
    """Shrink each data singular value back to its signal level ``x(y)``.

    Operator-norm optimal only for square matrices (``beta = 1``).
    """
    return Shrinker(
        "signal-level",
        lambda y: x_of_y(model, y),
        model.bulk_edge,
        Provenance.BASELINE,
        "signal-level",
    )


def nuclear_threshold_x(model: SpikeModel, tol: float = 1e-12) -> float:
    """Spike strength where the nuclear-loss optimum leaves zero.

    Root of ``x**4 - beta - sqrt(beta)*x*y(x)`` on ``[beta**0.25, 2]``, where
    the function is increasing; equivalently ``c*c_tilde == s*s_tilde``.
    """
    beta = model.beta
    rb = math.sqrt(beta)

    def g(x):
        return x ** 4 - beta - rb * x * y_of_x(model, x)

    lo, hi = model.critical_x, 2.0
    if g(lo) >= 0.0:
        return lo
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if g(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def nuclear_shrinker(model: SpikeModel) -> Shrinker:
    beta = model.beta
    rb = math.sqrt(beta)
    threshold = y_of_x(model, nuclear_threshold_x(model))

    def fn(y):
        x = x_of_y(model, y)
        return max((x ** 4 - beta) / (x * x * y) - rb / x, 0.0)

    return Shrinker("nuclear", fn, threshold, Provenance.CLOSED_FORM, "nuclear")


_OPTIMAL = {
    "frobenius": frobenius_shrinker,
    "operator": operator_shrinker,
    "nuclear": nuclear_shrinker,
}


def optimal_shrinker(loss_name: str, model: SpikeModel) -> Shrinker:
    try:
        return _OPTIMAL[loss_name](model)
    except KeyError:
        raise KeyError(
            f"no closed-form shrinker for loss {loss_name!r}; "
            f"expected one of {sorted(_OPTIMAL)}"
        ) from None


def hard_threshold_shrinker(model: SpikeModel) -> Shrinker:
    return Shrinker("hard", lambda y: y, model.bulk_edge, Provenance.BASELINE, "hard")


def identity_shrinker() -> Shrinker:
    return Shrinker(
        "identity", lambda y: y, -math.inf, Provenance.BASELINE, "identity", proper=False
    )


def zero_shrinker() -> Shrinker:
    return Shrinker("zero", lambda y: 0.0, math.inf, Provenance.BASELINE, "zero")


def baseline_shrinkers(model: SpikeModel) -> list[Shrinker]:
    """Hard threshold at the bulk edge, identity (not proper) and zero."""
    return [hard_threshold_shrinker(model), identity_shrinker(), zero_shrinker()]


def recalibrate(sh: Shrinker, c: float) -> Shrinker:
    """Return ``y -> c * sh(y / c)``, the shrinker for noise scaled by ``c``."""
    if not c > 0 or not math.isfinite(c):
        raise DomainError(f"recalibration scale must be positive, got {c!r}")
    if c == 1.0:
        return sh
    fn = sh.fn
    return replace(
        sh,
        fn=lambda y: c * fn(y / c),
        threshold_y=c * sh.threshold_y,
        calibration_sigma=c * sh.calibration_sigma,
    )


SHRINKER_IDS = (
    "optimal", "frobenius", "operator", "nuclear",
    "hard", "zero", "identity", "signal-level", "tabulated",
)


def resolve_shrinker(shrinker_id: str, loss_name: str, model: SpikeModel) -> Shrinker:
    """Look up a shrinker by id; ``optimal`` means the closed form for ``loss_name``.

    ``tabulated`` builds the optimum numerically for ``loss_name``.
    """
    if shrinker_id == "optimal":
        return optimal_shrinker(loss_name, model)
    if shrinker_id in _OPTIMAL:
        return optimal_shrinker(shrinker_id, model)
    if shrinker_id == "hard":
        return hard_threshold_shrinker(model)
    if shrinker_id == "zero":
        return zero_shrinker()
    if shrinker_id == "identity":
        return identity_shrinker()
    if shrinker_id == "signal-level":
        return signal_level_shrinker(model)
    if shrinker_id == "tabulated":
        from .losses import get_loss
        from .solver import build_optimal_shrinker

        return build_optimal_shrinker(get_loss(loss_name), model).as_shrinker()
    raise KeyError(f"unknown shrinker {shrinker_id!r}; expected one of {SHRINKER_IDS}")

