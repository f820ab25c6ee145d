"""Acceptance gate: one check per criterion, each at its stated tolerance.

Every check prints a single ``criterion N: PASS|FAIL ...`` line. Run with
``pytest tests/test_acceptance.py`` (lines are repeated in the summary) or
directly with ``python tests/test_acceptance.py``.
"""

import math
import time

import numpy as np
import pytest

from svshrink.losses import builtin_losses, get_loss
from svshrink.montecarlo import SimConfig, generate, run
from svshrink.noise import MpDistribution, mp_median, sigma_hat
from svshrink.shrinkers import optimal_shrinker, resolve_shrinker
from svshrink.solver import asymptotic_loss, eta_star_star
from svshrink.spike_model import SpikeModel, x_of_y, y_of_x

import oracles

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

MC_BASE = dict(n=400, beta=0.5, spikes=(3.0, 2.0), reps=20, seed=42)


def report(num, ok, detail):
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


def criterion_1():
    t0 = time.perf_counter()
    worst = {}
    for loss in builtin_losses():
        err = 0.0
        for beta in [round(0.1 * k, 1) for k in range(1, 11)]:
            m = SpikeModel(beta)
            sh = optimal_shrinker(loss.name, m)
            for y in np.linspace(sh.threshold_y, 10.0, 101)[1:]:
                err = max(err, abs(sh.eval(y) - eta_star_star(loss, m, x_of_y(m, y))))
        worst[loss.name] = err
    elapsed = time.perf_counter() - t0
    ok = max(worst.values()) <= 1e-6 and elapsed < 30
    detail = ", ".join(f"{k} {v:.2e}" for k, v in worst.items())
    return report(1, ok, f"max |closed form - minimizer|: {detail} (tol 1e-6), {elapsed:.1f}s (< 30s)")


def criterion_2():
    m = SpikeModel(1.0)
    got = {
        "frobenius(3)": (optimal_shrinker("frobenius", m).eval(3.0), 2.236068),
        "operator(3)": (optimal_shrinker("operator", m).eval(3.0), 2.618034),
        "nuclear(3)": (optimal_shrinker("nuclear", m).eval(3.0), 1.854102),
        "nuclear y0": (optimal_shrinker("nuclear", m).threshold_y, 2.121320),
    }
    ok = all(abs(v - ref) <= 1e-6 for v, ref in got.values())
    detail = ", ".join(f"{k}={v:.7f}" for k, (v, _) in got.items())
    return report(2, ok, f"{detail} (tol 1e-6)")


def criterion_3():
    inv = 0.0
    for beta in [round(0.05 * k, 2) for k in range(1, 21)]:
        m = SpikeModel(beta)
        for x in np.geomspace(m.critical_x, 100.0, 200):
            inv = max(inv, abs(x_of_y(m, y_of_x(m, x)) - x) / max(1.0, x))
    ratios = [
        optimal_shrinker(name, SpikeModel(beta)).eval(100.0) / 100.0
        for beta in (0.25, 1.0) for name in ("frobenius", "operator", "nuclear")
    ]
    ok = inv <= 1e-10 and all(0.999 <= r <= 1.001 for r in ratios)
    return report(3, ok, f"inverse map error {inv:.1e} (tol 1e-10), eta(100)/100 in [{min(ratios):.6f}, {max(ratios):.6f}]")


def criterion_4():
    mu_star = oracles.mp_median_beta1()
    err = abs(mp_median(1.0) - mu_star)
    cdf_err = max(abs(MpDistribution(b).cdf(mp_median(b)) - 0.5) for b in (0.1, 0.5, 1.0))
    ok = err <= 1e-6 and cdf_err <= 1e-9
    return report(4, ok, f"|mu(1) - {mu_star:.10f}| = {err:.1e} (tol 1e-6), max |CDF(mu) - 1/2| = {cdf_err:.1e} (tol 1e-9)")


def criterion_5():
    t0 = time.perf_counter()
    n, beta = 1000, 0.5
    est = []
    for seed in range(10):
        _, Y = generate(SimConfig(n=n, beta=beta, seed=seed, reps=1), 0)
        d = np.linalg.svd(2.0 * Y, compute_uv=False)
        est.append(math.sqrt(n) * sigma_hat(d, n, beta))
    med = float(np.median(est))
    elapsed = time.perf_counter() - t0
    ok = abs(med / 2.0 - 1.0) <= 0.02 and elapsed < 60
    return report(5, ok, f"median sqrt(n) sigma_hat = {med:.4f} (2 +- 2%), {elapsed:.1f}s (< 60s)")


def _within(value, ref, rel):
    return abs(value / ref - 1.0) <= rel


def criterion_6():
    t0 = time.perf_counter()
    parts, ok = [], True
    for noise in ("gaussian", "rademacher"):
        s = run(SimConfig(noise_kind=noise, loss_id="frobenius", shrinker_id="optimal", **MC_BASE))
        checks = [
            _within(s.y_mean[0], 3.2489, 0.02),
            _within(s.y_mean[1], 2.3717, 0.02),
            _within(s.bulk_edge_mean, 1.7071, 0.02),
            _within(s.cos_left_mean[0], 0.9703, 0.05),
            _within(s.cos_right_mean[0], 0.9458, 0.05),
            _within(s.loss_mean, 2.7513, 0.10),
        ]
        ok &= all(checks)
        parts.append(
            f"{noise}: y=({s.y_mean[0]:.4f}, {s.y_mean[1]:.4f}, {s.bulk_edge_mean:.4f}) "
            f"cos=({s.cos_left_mean[0]:.4f}, {s.cos_right_mean[0]:.4f}) loss={s.loss_mean:.4f}"
        )
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 120
    return report(6, ok, "; ".join(parts) + f"; {elapsed:.1f}s (< 120s)")


def criterion_7():
    def mc(loss_id, shrinker_id):
        s = run(SimConfig(loss_id=loss_id, shrinker_id=shrinker_id, **MC_BASE))
        return s.loss_mean, s.loss_se

    parts, ok = [], True
    fro_opt = mc("frobenius", "optimal")
    hard = mc("frobenius", "hard")
    joint = math.hypot(fro_opt[1], hard[1])
    sep = hard[0] - fro_opt[0]
    ok &= sep > joint
    parts.append(f"frobenius: optimal {fro_opt[0]:.4f} vs hard {hard[0]:.4f} (gap {sep:.3f} > joint SE {joint:.3f})")
    for rival in ("nuclear", "operator"):
        r = mc("frobenius", rival)
        ok &= fro_opt[0] <= r[0]
        parts.append(f"<= {rival} {r[0]:.4f}")
    for loss_id in ("operator", "nuclear"):
        best, rival = mc(loss_id, "optimal"), mc(loss_id, "frobenius")
        ok &= best[0] <= rival[0]
        parts.append(f"{loss_id}: optimal {best[0]:.4f} <= frobenius shrinker {rival[0]:.4f}")
    return report(7, ok, "; ".join(parts))


def criterion_8():
    parts, ok = [], True
    for beta in (0.5, 1.0):
        for name in ("frobenius", "operator", "nuclear"):
            s = run(SimConfig(n=800, beta=beta, spikes=(), loss_id=name, shrinker_id="optimal", reps=10, seed=42))
            ok &= s.residual_mean <= 1e-3
            parts.append(f"beta={beta} {name} {s.residual_mean:.2e}")
    return report(8, ok, "mean null residual (tol 1e-3): " + ", ".join(parts))


def criterion_9():
    m = SpikeModel(1.0)
    loss = get_loss("operator")
    sh = optimal_shrinker("operator", m)
    vals = [asymptotic_loss(loss, m, sh, [x]) for x in (1.5, 2.618034, 10.0)]
    ok = all(abs(v - 1.0) <= 1e-9 for v in vals)
    return report(9, ok, "operator asymptotic loss at x=1.5, 2.618034, 10: " + ", ".join(f"{v:.12f}" for v in vals))


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("check", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 10)])
def test_criterion(check):
    assert check()


if __name__ == "__main__":
    results = [check() for check in CRITERIA]
    raise SystemExit(0 if all(results) else 1)
