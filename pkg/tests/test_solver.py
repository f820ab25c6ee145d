import io
import math
from fractions import Fraction

import numpy as np
import pytest

from svshrink.exceptions import DomainError
from svshrink.losses import FROBENIUS, NUCLEAR, OPERATOR, builtin_losses
from svshrink.shrinkers import baseline_shrinkers, optimal_shrinker
from svshrink.solver import (
    F, asymptotic_loss, build_optimal_shrinker, crossing_point, eta_star_star, format_number, golden_section,
    loss_curve,
)
from svshrink.spike_model import SpikeModel, cosines, y_of_x

import oracles

B1, BQ, BH = SpikeModel(1.0), SpikeModel(0.25), SpikeModel(0.5)
GOLD = 2.618033988749895


def test_golden_section_quadratic():
    arg, val = golden_section(lambda e: (e - 1.234) ** 2, 0.0, 5.0, 1e-12)
    assert arg == pytest.approx(1.234, abs=1e-9) and val <= 1e-18


def test_F_examples():
    assert F(FROBENIUS, B1, math.sqrt(5), GOLD) == pytest.approx(1.854102, abs=1e-6)
    for loss in builtin_losses():
        assert F(loss, BH, 0.0, 2.0) == pytest.approx(loss.l11(2.0, 0.0), abs=1e-12)
    assert F(FROBENIUS, B1, 0.3, 0.5) == pytest.approx(0.34, abs=1e-12)
    assert F(OPERATOR, B1, 0.3, 0.5) == pytest.approx(0.5, abs=1e-12)


def test_eta_star_star_examples():
    assert eta_star_star(FROBENIUS, B1, GOLD) == pytest.approx(math.sqrt(5), abs=1e-6)
    assert eta_star_star(NUCLEAR, B1, GOLD) == pytest.approx(1.854102, abs=1e-6)
    cos = cosines(BQ, 2.0)
    assert eta_star_star(OPERATOR, BQ, 2.0) == pytest.approx(2.0 * cos.c_tilde / cos.c, abs=1e-6)


def test_eta_star_star_matches_generic_minimizer():
    rng = np.random.default_rng(3)
    for _ in range(60):
        beta = rng.uniform(0.05, 1.0)
        m = SpikeModel(beta)
        x = m.critical_x + rng.uniform(0.05, 6.0)
        for loss in builtin_losses():
            _, fmin = oracles.eta_by_minimize(loss.name, beta, x)
            assert F(loss, m, eta_star_star(loss, m, x), x) <= fmin + 1e-9


@pytest.mark.parametrize("beta", [0.1, 0.25, 0.5, 0.75, 1.0])
def test_crossing_points(beta):
    m = SpikeModel(beta)
    assert crossing_point(FROBENIUS, m) == m.critical_x
    assert crossing_point(OPERATOR, m) == m.critical_x
    x0 = crossing_point(NUCLEAR, m)
    cos = cosines(m, x0)
    assert cos.c * cos.c_tilde == pytest.approx(cos.s * cos.s_tilde, abs=1e-7)


def test_nuclear_crossing_beta_one():
    assert crossing_point(NUCLEAR, B1) == pytest.approx(math.sqrt(2), abs=1e-7)


def test_build_examples():
    fro = build_optimal_shrinker(FROBENIUS, B1)
    closed = optimal_shrinker("frobenius", B1)
    assert np.max(np.abs(fro.etas[1:] - closed(fro.ys[1:]))) <= 1e-6
    assert fro.max_midpoint_error <= 1e-3
    nuc = build_optimal_shrinker(NUCLEAR, B1)
    assert nuc.threshold_y == pytest.approx(3 / math.sqrt(2), abs=1e-6)
    op = build_optimal_shrinker(OPERATOR, BQ)
    assert op.threshold_y == pytest.approx(1.5, abs=1e-12)
    cos = cosines(BQ, 2.0)
    assert op.eval(y_of_x(BQ, 2.0)) == pytest.approx(2.0 * cos.c_tilde / cos.c, abs=1e-4)
    assert op.eval(1.5) == 0.0 and op.eval(1.0) == 0.0
    assert op.eval(20.0) == pytest.approx(op.etas[-1] + 10.0)
    assert np.all(op.etas >= 0) and op.proper_constant >= 1.0


def test_build_rejects_bad_arguments():
    with pytest.raises(DomainError):
        build_optimal_shrinker(FROBENIUS, B1, y_max=1.5)
    with pytest.raises(DomainError):
        build_optimal_shrinker(FROBENIUS, B1, n_knots=8)


def test_tabulated_csv():
    tab = build_optimal_shrinker(FROBENIUS, B1, n_knots=16, check_midpoints=False)
    text = tab.to_csv()
    lines = text.splitlines()
    assert lines[0] == "y,eta" and len(lines) == 17
    assert lines[-1].startswith("10,")
    buf = io.StringIO()
    tab.to_csv(buf)
    assert buf.getvalue() == text


def test_format_number():
    assert format_number(3.0) == "3"
    assert format_number(math.sqrt(5)) == "2.2360679775"
    assert format_number(-0.0) == "0"


def test_asymptotic_loss_examples():
    # sum of x^2 (1 - c^2 ct^2) in exact rational arithmetic at beta = 1/2
    b = Fraction(1, 2)
    exact = sum(x * x * (1 - (x**4 - b) ** 2 / ((x**4 + b * x * x) * (x**4 + x * x))) for x in (Fraction(3), Fraction(2)))
    fro = optimal_shrinker("frobenius", BH)
    assert asymptotic_loss(FROBENIUS, BH, fro, [3.0, 2.0]) == pytest.approx(float(exact), abs=1e-12)
    assert float(exact) == pytest.approx(2.751316, abs=1e-6)
    op = optimal_shrinker("operator", B1)
    assert asymptotic_loss(OPERATOR, B1, op, [GOLD]) == pytest.approx(1.0, abs=1e-9)
    zero = baseline_shrinkers(B1)[2]
    assert asymptotic_loss(FROBENIUS, B1, zero, [1.7]) == pytest.approx(1.7**2)


def test_asymptotic_loss_errors():
    ident = baseline_shrinkers(B1)[1]
    with pytest.raises(DomainError):
        asymptotic_loss(FROBENIUS, B1, ident, [2.0])
    fro = optimal_shrinker("frobenius", B1)
    with pytest.raises(DomainError):
        asymptotic_loss(FROBENIUS, B1, fro, [1.0, 2.0])
    with pytest.raises(DomainError):
        asymptotic_loss(FROBENIUS, B1, fro, [-1.0])


@pytest.mark.parametrize("beta", [0.25, 0.5, 1.0])
@pytest.mark.parametrize("loss", builtin_losses(), ids=lambda l: l.name)
def test_dominance_of_tabulated_optimum(beta, loss):
    m = SpikeModel(beta)
    tab = build_optimal_shrinker(loss, m, n_knots=256, check_midpoints=False)
    hard, _, zero = baseline_shrinkers(m)
    rivals = [hard, zero] + [optimal_shrinker(n, m) for n in ("frobenius", "operator", "nuclear") if n != loss.name]
    for x in np.linspace(0.2, 6.0, 50):
        best = asymptotic_loss(loss, m, tab, [x])
        for sh in rivals:
            # tabulation error is O(1e-5) in eta, so losses agree to ~1e-8 scaled
            assert best <= asymptotic_loss(loss, m, sh, [x]) + 1e-8 * max(1.0, x * x) + 2e-6


def test_continuity_at_threshold():
    for beta in [0.25, 1.0]:
        m = SpikeModel(beta)
        for name in ("frobenius", "nuclear"):
            sh = optimal_shrinker(name, m)
            assert sh.eval(sh.threshold_y * (1 + 1e-14)) <= 1e-6
        op = optimal_shrinker("operator", m)
        x0 = m.critical_x
        below = asymptotic_loss(OPERATOR, m, op, [x0 * (1 - 1e-9)])
        above = asymptotic_loss(OPERATOR, m, op, [x0 * (1 + 1e-9)])
        assert abs(below - above) <= 1e-6


def test_sum_and_max_decomposition():
    for loss in builtin_losses():
        sh = optimal_shrinker(loss.name, BH)
        a, b = asymptotic_loss(loss, BH, sh, [3.0]), asymptotic_loss(loss, BH, sh, [1.2])
        both = asymptotic_loss(loss, BH, sh, [3.0, 1.2])
        assert both == pytest.approx(a + b if loss is not OPERATOR else max(a, b), abs=1e-12)


def test_loss_curve():
    curve = loss_curve(FROBENIUS, B1, optimal_shrinker("frobenius", B1), [0.5, 1.0, 2.0], "optimal")
    assert curve.shrinker_id == "optimal" and curve.loss_id == "frobenius"
    assert curve.samples[0] == (0.5, pytest.approx(0.25))
    with pytest.raises(DomainError):
        loss_curve(FROBENIUS, B1, optimal_shrinker("frobenius", B1), [2.0, 1.0])
