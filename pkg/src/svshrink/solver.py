"""Numerical construction of optimal shrinkers for decomposable losses.

For a spike ``x`` above the critical strength the asymptotic loss of a
shrinker reduces to ``F(eta, x) = l22(A(x), B(eta, x))``. Minimizing ``F`` over
``eta`` gives the best value ``eta_ss(x)``; below the crossing point ``x0``
the zero shrinker is at least as good. Gluing zero and ``eta_ss`` at ``x0``
and composing with ``x(y)`` yields the optimal shrinker, tabulated here on a
grid of data singular values.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .exceptions import CrossingError, DomainError, MinimizerError
from .losses import Decomposability, LossFamily, block_A, block_B
from .shrinkers import Provenance, Shrinker
from .spike_model import SpikeModel, cosines, x_of_y, y_of_x

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

COARSE_POINTS = 64
ETA_TOL = 1e-10
CROSSING_TOL = 1e-10
CROSSING_X_MAX = 10.0


class NonUniqueMinimizerWarning(RuntimeWarning):
    pass


def golden_section(f: Callable[[float], float], lo: float, hi: float, tol: float = ETA_TOL,
                   max_iter: int = 500) -> tuple[float, float]:
    """Minimize a unimodal ``f`` on ``[lo, hi]``; returns ``(argmin, min)``."""
    a, b = lo, hi
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
    if f1 <= f2:
        return x1, f1
    return x2, f2


def _reduced_loss(loss: LossFamily, model: SpikeModel, x: float) -> Callable[[float], float]:
    """``eta -> F(eta, x)`` with the x-dependent pieces computed once."""
    if x >= model.critical_x:
        A = block_A(x)
        cos = cosines(model, x)
        l22 = loss.l22
        return lambda eta: l22(A, block_B(eta, cos))
    signal = loss.l11(x, 0.0)
    l11 = loss.l11
    if loss.decomposability is Decomposability.SUM:
        return lambda eta: signal + l11(0.0, eta)
    return lambda eta: max(signal, l11(0.0, eta))


def F(loss: LossFamily, model: SpikeModel, eta: float, x: float) -> float:
    """Reduced 2x2 loss of shrinking spike ``x``'s data singular value to ``eta``.

    Subcritical spikes leave signal and estimate on orthogonal directions, so
    their losses combine through the 1x1 evaluator.
    """
    if eta < 0 or x < 0:
        raise DomainError("eta and x must be nonnegative")
    return _reduced_loss(loss, model, x)(eta)


def _runs(mask: np.ndarray) -> int:
    """Number of contiguous runs of True in ``mask``."""
    m = mask.astype(np.int8)
    return int(m[0] + np.count_nonzero(np.diff(m) == 1))


def eta_star_star(loss: LossFamily, model: SpikeModel, x: float) -> float:
    """Minimizer over ``eta >= 0`` of ``F(eta, x)``, searched on ``[0, 3x]``.

    A coarse scan locates the basin and golden-section search refines it. A
    :class:`NonUniqueMinimizerWarning` is issued when the scan sees two
    separated basins with nearly equal minima.
    """
    if x < model.critical_x:
        raise DomainError(f"x={x!r} is below the critical strength {model.critical_x!r}")
    f = _reduced_loss(loss, model, x)
    upper = 3.0 * x
    grid = np.linspace(0.0, upper, COARSE_POINTS)
    vals = np.array([f(e) for e in grid])
    i = int(np.argmin(vals))
    fmin = vals[i]
    near = vals <= fmin + 1e-8 * max(1.0, abs(fmin))
    if _runs(near) > 1:
        warnings.warn(
            f"{loss.name}: F(., {x:g}) has separated near-minimal basins; "
            "minimizer may not be unique",
            NonUniqueMinimizerWarning,
            stacklevel=2,
        )
    if i == COARSE_POINTS - 1:
        raise MinimizerError(
            f"{loss.name}: minimizer of F(., {x:g}) is not interior to [0, 3x]"
        )
    lo = grid[max(i - 1, 0)]
    hi = grid[i + 1]
    eta, val = golden_section(f, lo, hi)
    if lo == 0.0 and f(0.0) <= val:
        return 0.0
    return eta


def _beats_zero(loss: LossFamily, model: SpikeModel, x: float) -> bool:
    """True when some ``eta > 0`` strictly improves on the zero shrinker at ``x``.

    The slope test resolves tangential crossings, where the loss gap only
    grows quadratically; a negative slope at zero already implies the gap.
    """
    f = _reduced_loss(loss, model, x)
    f0 = f(0.0)
    scale = max(1.0, abs(f0))
    eps = 1e-6 * max(x, 1e-3)
    slope = 2.0 * (f(eps) - f0) / eps - (f(2.0 * eps) - f0) / (2.0 * eps)
    if slope < -1e-8 * scale:
        return True
    gap = loss.l11(x, 0.0) - f(eta_star_star(loss, model, x))
    return gap > 1e-12 * max(1.0, loss.l11(x, 0.0))


def crossing_point(loss: LossFamily, model: SpikeModel, x_max: float = CROSSING_X_MAX,
                   tol: float = CROSSING_TOL) -> float:
    """Spike strength ``x0`` where ``eta_ss`` starts to beat the zero shrinker.

    Returns ``beta**0.25`` when ``eta_ss`` wins arbitrarily close to it.
    Raises :class:`CrossingError` if the zero shrinker is never beaten on
    ``[beta**0.25, x_max]``.
    """
    x_crit = model.critical_x
    grid = np.concatenate([[x_crit], np.geomspace(x_crit * (1 + 1e-6), x_max, 200)])
    flags = [_beats_zero(loss, model, float(x)) for x in grid]
    if not any(flags):
        raise CrossingError(
            f"{loss.name}: zero shrinker is never beaten on [{x_crit:g}, {x_max:g}]"
        )
    j = flags.index(True)
    if not all(flags[j:]):
        warnings.warn(
            f"{loss.name}: zero shrinker regains the lead beyond the first crossing",
            RuntimeWarning,
            stacklevel=2,
        )
    if j == 0:
        return x_crit
    lo, hi = float(grid[j - 1]), float(grid[j])
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _beats_zero(loss, model, mid):
            hi = mid
        else:
            lo = mid
    # crossings closer to the critical point than the slope test can resolve
    if hi - x_crit <= 1e-8 * max(1.0, x_crit):
        return x_crit
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class TabulatedShrinker:
    """Optimal shrinker sampled on a grid of data singular values.

    Linear interpolation between knots, zero at or below ``threshold_y`` and
    slope-one extrapolation beyond the last knot.
    """

    loss_name: str
    beta: float
    ys: np.ndarray = field(repr=False)
    etas: np.ndarray = field(repr=False)
    threshold_y: float
    crossing_x: float
    proper_constant: float
    max_midpoint_error: float | None = None

    def eval(self, y: float) -> float:
        if y <= self.threshold_y:
            return 0.0
        if y >= self.ys[-1]:
            return float(self.etas[-1] + (y - self.ys[-1]))
        return float(np.interp(y, self.ys, self.etas))

    def __call__(self, y):
        if np.ndim(y) == 0:
            return self.eval(float(y))
        arr = np.asarray(y, dtype=float)
        return np.array([self.eval(v) for v in arr.ravel()]).reshape(arr.shape)

    def as_shrinker(self) -> Shrinker:
        return Shrinker(
            f"tabulated-{self.loss_name}",
            self.eval,
            self.threshold_y,
            Provenance.TABULATED,
            self.loss_name,
        )

    def to_csv(self, fh=None) -> str | None:
        """Write ``y,eta`` rows (12 significant digits) to ``fh`` or return them."""
        buf = io.StringIO() if fh is None else fh
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["y", "eta"])
        for y, e in zip(self.ys, self.etas):
            w.writerow([format_number(y), format_number(e)])
        return buf.getvalue() if fh is None else None


def format_number(v: float) -> str:
    s = f"{float(v):.12g}"
    return "0" if s == "-0" else s


def build_optimal_shrinker(loss: LossFamily, model: SpikeModel, y_max: float = 10.0,
                           n_knots: int = 512, check_midpoints: bool = True) -> TabulatedShrinker:
    """Tabulate the optimal shrinker for ``loss`` on ``[threshold, y_max]``.

    Knot offsets above the threshold are geometrically spaced from 1e-8, which
    resolves the square-root onset typical just above the threshold. The
    first knot holds the limit from above, which matters for shrinkers that
    jump there.
    """
    if not y_max > model.bulk_edge:
        raise DomainError(f"y_max={y_max!r} must exceed the bulk edge {model.bulk_edge!r}")
    if n_knots < 16:
        raise DomainError("n_knots must be at least 16")
    x0 = crossing_point(loss, model)
    threshold = y_of_x(model, x0)
    if not y_max > threshold:
        raise DomainError(f"y_max={y_max!r} must exceed the threshold {threshold!r}")
    ys = threshold + np.concatenate([[0.0], np.geomspace(1e-8, y_max - threshold, n_knots - 1)])
    xs = [x0 * (1.0 + 1e-9)] + [x_of_y(model, float(y)) for y in ys[1:]]
    etas = np.array([eta_star_star(loss, model, x) for x in xs])
    ratio = float(np.max(etas / ys))
    tab = TabulatedShrinker(
        loss_name=loss.name,
        beta=model.beta,
        ys=ys,
        etas=etas,
        threshold_y=threshold,
        crossing_x=x0,
        proper_constant=max(ratio, 1.0),
    )
    if not check_midpoints:
        return tab
    mids = 0.5 * (ys[:-1] + ys[1:])
    fresh = np.array([eta_star_star(loss, model, x_of_y(model, float(y))) for y in mids])
    err = float(np.max(np.abs(np.interp(mids, ys, etas) - fresh)))
    return TabulatedShrinker(**{**tab.__dict__, "max_midpoint_error": err})


def asymptotic_loss(loss: LossFamily, model: SpikeModel, sh, spikes: Sequence[float]) -> float:
    """Limiting loss of shrinker ``sh`` at signal singular values ``spikes``.

    ``sh`` may be a :class:`Shrinker` or :class:`TabulatedShrinker`; it must
    collapse the noise bulk, otherwise the limit formula does not apply.
    """
    if not getattr(sh, "proper", True) or sh.threshold_y < model.bulk_edge - 1e-12:
        raise DomainError(
            f"shrinker {getattr(sh, 'name', sh)!r} does not collapse the bulk; "
            "asymptotic loss formula invalid"
        )
    spikes = [float(x) for x in spikes]
    if any(x <= 0 for x in spikes):
        raise DomainError("spikes must be positive")
    if any(a < b for a, b in zip(spikes, spikes[1:])):
        raise DomainError("spikes must be sorted in descending order")
    return loss.decomposability.combine(
        _spike_term(loss, model, sh, x) for x in spikes
    )


def _spike_term(loss, model, sh, x):
    if x >= model.critical_x:
        eta = sh.eval(y_of_x(model, x))
        return loss.l22(block_A(x), block_B(eta, cosines(model, x)))
    eta = sh.eval(model.bulk_edge)
    return _reduced_loss(loss, model, x)(eta)


@dataclass(frozen=True)
class AsymptoticLossCurve:
    loss_id: str
    beta: float
    shrinker_id: str
    samples: tuple[tuple[float, float], ...]

    def __post_init__(self):
        xs = [x for x, _ in self.samples]
        if any(a >= b for a, b in zip(xs, xs[1:])):
            raise DomainError("curve x values must be strictly increasing")
        if any(not (math.isfinite(v) and v >= 0) for _, v in self.samples):
            raise DomainError("curve losses must be finite and nonnegative")


def loss_curve(loss: LossFamily, model: SpikeModel, sh, xs: Sequence[float],
               shrinker_id: str | None = None) -> AsymptoticLossCurve:
    """Single-spike asymptotic loss of ``sh`` at each x in ``xs``."""
    samples = tuple((float(x), asymptotic_loss(loss, model, sh, [x])) for x in xs)
    name = shrinker_id or getattr(sh, "name", "custom")
    return AsymptoticLossCurve(loss.name, model.beta, name, samples)
