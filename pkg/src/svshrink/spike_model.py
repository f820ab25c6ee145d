"""Asymptotic spectrum of a rank-r signal observed in white noise.

For a signal singular value ``x`` and aspect ratio ``beta = m/n`` the data
singular value settles at ``y(x)`` and the signal/data singular vectors meet
at angles with cosines ``c(x)`` (left) and ``c_tilde(x)`` (right). Below the
critical strength ``beta**0.25`` the spike is swallowed by the noise bulk.

Repeated spike values are not treated specially: cosines are computed per
``x`` even though the angle limits are only established for spikes that
appear once.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

from .exceptions import DomainError

# rounding slack allowed in the discriminant near the bulk edge
_DISCRIMINANT_SLACK = 1e-9
_EDGE_ULPS = 8


@dataclass(frozen=True)
class SpikeModel:
    beta: float

    def __post_init__(self):
        if not (0.0 < self.beta <= 1.0) or not math.isfinite(self.beta):
            raise DomainError(f"beta must lie in (0, 1], got {self.beta!r}")

    @property
    def bulk_edge(self) -> float:
        return 1.0 + math.sqrt(self.beta)

    @property
    def critical_x(self) -> float:
        return math.exp(math.log(self.beta) / 4.0)

    def y_of_x(self, x: float) -> float:
        return y_of_x(self, x)

    def x_of_y(self, y: float) -> float:
        return x_of_y(self, y)

    def cosines(self, x: float) -> "SpikeCosines":
        return cosines(self, x)


@dataclass(frozen=True)
class SpikeCosines:
    c: float
    s: float
    c_tilde: float
    s_tilde: float


def _check_supercritical(model: SpikeModel, x: float) -> None:
    if not x > 0 or x < model.critical_x:
        raise DomainError(
            f"spike strength {x!r} is below the critical value "
            f"beta**0.25 = {model.critical_x!r}"
        )


def y_of_x(model: SpikeModel, x: float) -> float:
    """Limiting location of the data singular value produced by spike ``x``."""
    _check_supercritical(model, x)
    return math.sqrt((x + 1.0 / x) * (x + model.beta / x))


def x_of_y(model: SpikeModel, y: float) -> float:
    """Inverse of :func:`y_of_x` on ``y >= 1 + sqrt(beta)``."""
    beta = model.beta
    edge = model.bulk_edge
    # y(x) is flat at the critical point, so an ulp of rounding in y would
    # move x by ~1e-8; values that close to the edge map to the critical x
    if abs(y - edge) <= _EDGE_ULPS * sys.float_info.epsilon * edge:
        return model.critical_x
    if not y >= edge:
        raise DomainError(f"y={y!r} is below the bulk edge {edge!r}")
    a = y * y - beta - 1.0
    disc = a * a - 4.0 * beta
    if disc < 0.0:
        if disc < -_DISCRIMINANT_SLACK:
            raise DomainError(f"negative discriminant {disc!r} at y={y!r}")
        disc = 0.0
    return math.sqrt((a + math.sqrt(disc)) / 2.0)


def cosines(model: SpikeModel, x: float) -> SpikeCosines:
    """Asymptotic cosines between signal and data singular vectors."""
    _check_supercritical(model, x)
    beta = model.beta
    x2 = x * x
    x4 = x2 * x2
    num = max(x4 - beta, 0.0)
    c2 = num / (x4 + beta * x2)
    ct2 = num / (x4 + x2)
    # 1 - c^2 written out to avoid cancellation for large x
    s2 = beta * (x2 + 1.0) / (x4 + beta * x2)
    st2 = (x2 + beta) / (x4 + x2)
    return SpikeCosines(
        c=math.sqrt(c2),
        s=math.sqrt(min(s2, 1.0)),
        c_tilde=math.sqrt(ct2),
        s_tilde=math.sqrt(min(st2, 1.0)),
    )
