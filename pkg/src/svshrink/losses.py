"""Orthogonally invariant, decomposable losses and their 2x2 reduction.

A decomposable loss on block-diagonal pairs splits into a sum (or a max) of
losses on the blocks. Under singular value shrinkage each signal spike
contributes one 2x2 block pair ``(A(x), B(eta, x))``, so a loss family is fully
described here by its 2x2 evaluator ``l22``, its 1x1 evaluator ``l11`` and the
way blocks combine.

The Frobenius family is the *squared* Frobenius norm. The 1x1 evaluators of
the operator and nuclear families are ``|a - b|``, the scalar case of both
norms.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .spike_model import SpikeCosines


class Decomposability(enum.Enum):
    SUM = "sum"
    MAX = "max"

    def combine(self, terms):
        terms = list(terms)
        if not terms:
            return 0.0
        if self is Decomposability.SUM:
            return math.fsum(terms)
        return max(terms)


@dataclass(frozen=True)
class LossFamily:
    """A decomposable loss given by its 2x2 and 1x1 evaluators.

    Custom losses are accepted as long as they are orthogonally invariant;
    regularity is assumed, not checked. ``l22`` receives two 2x2 arrays and
    ``l11`` two floats; both must be free of side effects.
    """

    name: str
    decomposability: Decomposability
    l22: Callable[[np.ndarray, np.ndarray], float]
    l11: Callable[[float, float], float]

    def matrix_loss(self, X: np.ndarray, Xhat: np.ndarray) -> float:
        """Evaluate the loss on full matrices (built-in families only)."""
        try:
            fn = _MATRIX_LOSSES[self.name]
        except KeyError:
            raise NotImplementedError(
                f"no full-matrix evaluator for custom loss {self.name!r}"
            ) from None
        return fn(np.asarray(X, dtype=float) - np.asarray(Xhat, dtype=float))


def block_A(x: float) -> np.ndarray:
    return np.array([[x, 0.0], [0.0, 0.0]])


def block_B(eta: float, cos: SpikeCosines) -> np.ndarray:
    c, s, ct, st = cos.c, cos.s, cos.c_tilde, cos.s_tilde
    return eta * np.array([[c * ct, c * st], [ct * s, s * st]])


def delta_stats(A: np.ndarray, B: np.ndarray) -> tuple[float, float, float, float]:
    """Squared norm, determinant and singular values of ``B - A``.

    Returns ``(t, d, sigma_plus, sigma_minus)`` with ``t = ||B - A||_F^2`` and
    ``d = det(B - A)``; the singular values follow from the roots of the
    characteristic polynomial of ``D'D``.
    """
    d00 = float(B[0, 0] - A[0, 0])
    d01 = float(B[0, 1] - A[0, 1])
    d10 = float(B[1, 0] - A[1, 0])
    d11 = float(B[1, 1] - A[1, 1])
    t = d00 * d00 + d01 * d01 + d10 * d10 + d11 * d11
    d = d00 * d11 - d01 * d10
    return (t, d) + _sigma_pm(t, d)


def _sigma_pm(t: float, d: float) -> tuple[float, float]:
    disc = t * t - 4.0 * d * d
    if disc < 0.0:
        # only rounding can push the discriminant negative
        disc = 0.0
    r_hat = math.sqrt(disc)
    sp = math.sqrt(max(t + r_hat, 0.0) / 2.0)
    # sigma_minus = |d| / sigma_plus avoids cancellation in t - r_hat
    sm = abs(d) / sp if sp > 0.0 else 0.0
    return sp, min(sm, sp)


def _fro22(A, B):
    t, _, _, _ = delta_stats(A, B)
    return t


def _op22(A, B):
    return delta_stats(A, B)[2]


def _nuc22(A, B):
    _, _, sp, sm = delta_stats(A, B)
    return sp + sm


def _sq11(a, b):
    return (a - b) ** 2


def _abs11(a, b):
    return abs(a - b)


FROBENIUS = LossFamily("frobenius", Decomposability.SUM, _fro22, _sq11)
OPERATOR = LossFamily("operator", Decomposability.MAX, _op22, _abs11)
NUCLEAR = LossFamily("nuclear", Decomposability.SUM, _nuc22, _abs11)

_BUILTINS = {loss.name: loss for loss in (FROBENIUS, OPERATOR, NUCLEAR)}

_MATRIX_LOSSES = {
    "frobenius": lambda D: float(np.sum(D * D)),
    "operator": lambda D: float(np.linalg.norm(D, 2)) if D.size else 0.0,
    "nuclear": lambda D: float(np.linalg.svd(D, compute_uv=False).sum()) if D.size else 0.0,
}


def builtin_losses() -> list[LossFamily]:
    return list(_BUILTINS.values())


def get_loss(name: str) -> LossFamily:
    try:
        return _BUILTINS[name]
    except KeyError:
        raise KeyError(
            f"unknown loss {name!r}; expected one of {sorted(_BUILTINS)}"
        ) from None
