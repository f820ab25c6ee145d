"""Noise-level estimation from the median singular value.

The squared singular values of ``Z/sqrt(n)`` (``Z`` white, ``m/n -> beta``)
follow the Marchenko-Pastur law on ``[(1 - sqrt(beta))**2, (1 + sqrt(beta))**2]``
with density ``sqrt((b - t)(t - a)) / (2 pi beta t)``. Its median ``mu_beta``
turns the median singular value of ``Y = X + sigma Z`` into a consistent
estimate of ``sigma`` as long as the signal rank is small.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .exceptions import DomainError

_QUAD_TOL = 1e-13
_median_cache: dict[tuple[float, float], float] = {}
_cache_lock = threading.Lock()


def _check_beta(beta: float) -> None:
    if not (0.0 < beta <= 1.0):
        raise DomainError(f"beta must lie in (0, 1], got {beta!r}")


@dataclass(frozen=True)
class MpDistribution:
    """Marchenko-Pastur law of squared noise singular values."""

    beta: float

    def __post_init__(self):
        _check_beta(self.beta)

    @property
    def support(self) -> tuple[float, float]:
        r = math.sqrt(self.beta)
        return (1.0 - r) ** 2, (1.0 + r) ** 2

    def pdf(self, t):
        a, b = self.support
        t = np.asarray(t, dtype=float)
        inside = (t > a) & (t < b)
        out = np.zeros_like(t)
        ti = t[inside]
        out[inside] = np.sqrt((b - ti) * (ti - a)) / (2.0 * math.pi * self.beta * ti)
        return out if out.ndim else float(out)

    def _angle_integrand(self, theta: float) -> float:
        # t = a + (b - a) sin^2(theta) removes both square-root endpoints
        a, b = self.support
        sc = math.sin(theta) * math.cos(theta)
        t = a + (b - a) * math.sin(theta) ** 2
        if t <= 0.0:
            # beta = 1, theta = 0: the integrand's limit is (b - a) / (pi beta)
            return (b - a) / (math.pi * self.beta)
        return (b - a) ** 2 * sc * sc / (math.pi * self.beta * t)

    def _angle(self, t: float) -> float:
        a, b = self.support
        return math.asin(math.sqrt(min(max((t - a) / (b - a), 0.0), 1.0)))

    def cdf(self, t: float) -> float:
        a, b = self.support
        if t <= a:
            return 0.0
        if t >= b:
            return 1.0
        val, _ = integrate.quad(
            self._angle_integrand, 0.0, self._angle(t), epsabs=_QUAD_TOL, epsrel=_QUAD_TOL, limit=200
        )
        return val

    def total_mass(self) -> float:
        val, _ = integrate.quad(
            self._angle_integrand, 0.0, math.pi / 2, epsabs=_QUAD_TOL, epsrel=_QUAD_TOL, limit=200
        )
        return val

    def median(self, tol: float = 1e-12) -> float:
        return mp_median(self.beta, tol)


def mp_median(beta: float, tol: float = 1e-12) -> float:
    """Median of the Marchenko-Pastur law, by bisection on the quadrature CDF.

    Results are memoized per ``(beta, tol)``.
    """
    _check_beta(beta)
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    key = (float(beta), float(tol))
    cached = _median_cache.get(key)
    if cached is not None:
        return cached
    dist = MpDistribution(beta)
    lo, hi = dist.support
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if dist.cdf(mid) < 0.5:
            lo = mid
        else:
            hi = mid
    mu = 0.5 * (lo + hi)
    with _cache_lock:
        _median_cache.setdefault(key, mu)
    return mu


def median_singular_value(singular_values) -> float:
    d = np.asarray(singular_values, dtype=float)
    if d.size == 0:
        raise ValueError("need at least one singular value")
    return float(np.median(d))


def sigma_hat(singular_values, n: int, beta: float) -> float:
    """Estimate the noise level ``sigma`` of ``Y = X + sigma Z``.

    ``singular_values`` are those of ``Y`` (m <= n of them) and ``n`` is the
    larger dimension.
    """
    d = np.asarray(singular_values, dtype=float)
    if d.size == 0:
        raise ValueError("need at least one singular value")
    if n < d.size:
        raise ValueError(f"n={n} is smaller than the number of singular values {d.size}")
    return median_singular_value(d) / math.sqrt(n * mp_median(beta, 1e-10))
