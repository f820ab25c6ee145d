"""Finite-n simulation of the spiked model ``Y = X + Z/sqrt(n)``.

Signal singular vectors are Haar distributed, noise entries are i.i.d. with
zero mean and unit variance. Each replicate draws from its own stream,
``PCG64(SeedSequence([seed, rep]))``, so results do not depend on how
replicates are scheduled across threads.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .denoise import svd
from .exceptions import DomainError, SVDConvergenceError
from .losses import get_loss
from .shrinkers import resolve_shrinker
from .solver import asymptotic_loss
from .spike_model import SpikeModel, cosines, y_of_x


class NoiseKind(enum.Enum):
    GAUSSIAN = "gaussian"
    RADEMACHER = "rademacher"
    UNIFORM_SYM = "uniform"


@dataclass(frozen=True)
class SimConfig:
    n: int
    beta: float
    spikes: tuple[float, ...] = ()
    noise_kind: NoiseKind = NoiseKind.GAUSSIAN
    loss_id: str = "frobenius"
    shrinker_id: str = "optimal"
    reps: int = 20
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "spikes", tuple(float(x) for x in self.spikes))
        object.__setattr__(self, "noise_kind", NoiseKind(self.noise_kind))
        if self.reps < 1:
            raise DomainError("reps must be at least 1")
        if not (0.0 < self.beta <= 1.0):
            raise DomainError(f"beta must lie in (0, 1], got {self.beta!r}")
        if any(x <= 0 for x in self.spikes):
            raise DomainError("spikes must be positive")
        if any(a <= b for a, b in zip(self.spikes, self.spikes[1:])):
            raise DomainError("spikes must be strictly decreasing")
        if self.m < len(self.spikes) or self.m < 1:
            raise DomainError(f"m={self.m} rows cannot hold {len(self.spikes)} spikes")

    @property
    def m(self) -> int:
        return int(round(self.beta * self.n))

    @property
    def rank(self) -> int:
        return len(self.spikes)


def replicate_rng(seed: int, rep_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, rep_index])))


def _haar_columns(dim: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """First ``k`` columns of a Haar orthogonal matrix."""
    G = rng.standard_normal((dim, k))
    Q, R = np.linalg.qr(G)
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return Q * signs


def haar_orthogonal(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed ``dim x dim`` orthogonal matrix (QR with sign fix)."""
    if dim < 1:
        raise DomainError("dim must be at least 1")
    return _haar_columns(dim, dim, rng)


def sample_noise(kind: NoiseKind, shape, rng: np.random.Generator) -> np.ndarray:
    kind = NoiseKind(kind)
    if kind is NoiseKind.GAUSSIAN:
        return rng.standard_normal(shape)
    if kind is NoiseKind.RADEMACHER:
        return 2.0 * rng.integers(0, 2, size=shape).astype(float) - 1.0
    r3 = math.sqrt(3.0)
    return rng.uniform(-r3, r3, size=shape)


def generate(cfg: SimConfig, rep_index: int, *, return_vectors: bool = False):
    """Draw ``(X, Y)`` for one replicate; optionally also the signal vectors."""
    rng = replicate_rng(cfg.seed, rep_index)
    m, n, r = cfg.m, cfg.n, cfg.rank
    U = _haar_columns(m, r, rng) if r else np.zeros((m, 0))
    V = _haar_columns(n, r, rng) if r else np.zeros((n, 0))
    X = (U * np.asarray(cfg.spikes)) @ V.T
    Y = X + sample_noise(cfg.noise_kind, (m, n), rng) / math.sqrt(n)
    if return_vectors:
        return X, Y, U, V
    return X, Y


@dataclass
class SimSummary:
    """Replicate means, standard errors and the matching asymptotic values.

    Per-spike lists follow the order of ``cfg.spikes``. Standard errors are
    zero when only one replicate completed.
    """

    config: dict
    reps_completed: int
    reps_failed: int
    y_mean: list[float]
    y_se: list[float]
    cos_left_mean: list[float]
    cos_left_se: list[float]
    cos_right_mean: list[float]
    cos_right_se: list[float]
    bulk_edge_mean: float | None
    bulk_edge_se: float | None
    loss_mean: float
    loss_se: float
    residual_mean: float
    residual_se: float
    y_theory: list[float]
    cos_left_theory: list[float]
    cos_right_theory: list[float]
    bulk_edge_theory: float
    loss_theory: float | None
    losses: list[float] = field(repr=False, default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def _one_replicate(cfg, rep, sh, loss):
    X, Y, U, V = generate(cfg, rep, return_vectors=True)
    r = cfg.rank
    Ud, d, Vd = svd(Y, full_matrices=False)
    eta = np.asarray(sh(d), dtype=float)
    Xhat = (Ud * eta) @ Vd.T
    top = np.full(r + 1, np.nan)
    k = min(r + 1, d.size)
    top[:k] = d[:k]
    cl = np.abs(np.sum(U * Ud[:, :r], axis=0))
    cr = np.abs(np.sum(V * Vd[:, :r], axis=0))
    residual = float(np.sum(eta[r:] ** 2))
    return top, cl, cr, loss.matrix_loss(X, Xhat), residual


def _threads() -> int:
    env = os.environ.get("SVSHRINK_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _mean_se(a: np.ndarray, axis=0):
    mean = np.mean(a, axis=axis)
    if a.shape[axis] < 2:
        return mean, np.zeros_like(mean)
    return mean, np.std(a, axis=axis, ddof=1) / math.sqrt(a.shape[axis])


def run(cfg: SimConfig, threads: int | None = None) -> SimSummary:
    """Simulate ``cfg.reps`` replicates and summarize them against theory."""
    model = SpikeModel(cfg.m / cfg.n)
    loss = get_loss(cfg.loss_id)
    sh = resolve_shrinker(cfg.shrinker_id, cfg.loss_id, model)
    workers = threads or _threads()

    def task(rep):
        try:
            return _one_replicate(cfg, rep, sh, loss)
        except SVDConvergenceError:
            return None

    if workers > 1 and cfg.reps > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(task, range(cfg.reps)))
    else:
        results = [task(rep) for rep in range(cfg.reps)]
    done = [res for res in results if res is not None]
    if not done:
        raise SVDConvergenceError("every replicate failed")
    r = cfg.rank
    tops = np.array([res[0] for res in done])
    cl = np.array([res[1] for res in done]).reshape(len(done), r)
    cr = np.array([res[2] for res in done]).reshape(len(done), r)
    losses = np.array([res[3] for res in done])
    resid = np.array([res[4] for res in done])

    y_mean, y_se = _mean_se(tops)
    cl_mean, cl_se = _mean_se(cl)
    cr_mean, cr_se = _mean_se(cr)
    loss_mean, loss_se = _mean_se(losses)
    res_mean, res_se = _mean_se(resid)

    y_th, c_th, ct_th = [], [], []
    for x in cfg.spikes:
        if x >= model.critical_x:
            cos = cosines(model, x)
            y_th.append(y_of_x(model, x))
            c_th.append(cos.c)
            ct_th.append(cos.c_tilde)
        else:
            y_th.append(model.bulk_edge)
            c_th.append(0.0)
            ct_th.append(0.0)
    loss_th = None
    if sh.proper and cfg.spikes:
        loss_th = asymptotic_loss(loss, model, sh, cfg.spikes)
    elif sh.proper:
        loss_th = 0.0

    edge_ok = not np.isnan(tops[0, r])
    return SimSummary(
        config={**asdict(cfg), "noise_kind": cfg.noise_kind.value, "spikes": list(cfg.spikes), "m": cfg.m},
        reps_completed=len(done),
        reps_failed=cfg.reps - len(done),
        y_mean=[float(v) for v in y_mean[:r]],
        y_se=[float(v) for v in y_se[:r]],
        cos_left_mean=[float(v) for v in cl_mean],
        cos_left_se=[float(v) for v in cl_se],
        cos_right_mean=[float(v) for v in cr_mean],
        cos_right_se=[float(v) for v in cr_se],
        bulk_edge_mean=float(y_mean[r]) if edge_ok else None,
        bulk_edge_se=float(y_se[r]) if edge_ok else None,
        loss_mean=float(loss_mean),
        loss_se=float(loss_se),
        residual_mean=float(res_mean),
        residual_se=float(res_se),
        y_theory=y_th,
        cos_left_theory=c_th,
        cos_right_theory=ct_th,
        bulk_edge_theory=model.bulk_edge,
        loss_theory=loss_th,
        losses=[float(v) for v in losses],
    )
