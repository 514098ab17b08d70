import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from celldim import moments as mo
from celldim import thresholds as th
from celldim.errors import DegenerateFunctional

from conftest import desk, toy_scenario, users_to_intensity


def _table(weights_per_class, probabilities):
    rows = tuple(th.ClassThresholds(len(w), np.zeros(len(w) + 1), np.asarray(w, float))
                 for w in weights_per_class)
    return th.ThresholdTable(rows, tuple(probabilities))


def test_two_level_moments():
    table = _table([[math.pi / 3, 2 * math.pi / 3]], [1.0])
    assert mo.raw_moment(table, [1.0], 1) == pytest.approx(5 * math.pi / 3, rel=1e-15)
    assert mo.raw_moment(table, [1.0], 2) == pytest.approx(3 * math.pi, rel=1e-15)
    assert mo.raw_moment(table, [1.0], 3) == pytest.approx(17 * math.pi / 3, rel=1e-15)


def test_empty_cell():
    table = _table([[0.0, 0.0, 0.0]], [1.0])
    assert all(mo.raw_moment(table, [1.0], p) == 0.0 for p in range(1, 6))


@given(st.floats(0.0, 1.0), st.floats(0.0, 1e6))
def test_single_level(tau, c):
    table = _table([[c]], [tau])
    for p in range(1, 6):
        assert mo.raw_moment(table, [tau], p) == pytest.approx(tau * c, rel=1e-15)


def test_normalized_third_moment():
    ms = mo.MomentSet((5 * math.pi / 3, 3 * math.pi, 17 * math.pi / 3, 0.0, 0.0), 1 / math.pi)
    mpmath.mp.dps = 40
    pi = mpmath.pi
    expected = float((17 * pi / 3) * (3 * pi) ** mpmath.mpf(-1.5) * mpmath.sqrt(pi))
    assert mo.normalized_moment(ms, 3) == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(1.0905, abs=1e-4)


def test_normalized_second_moment_is_one():
    ms = mo.MomentSet((1.0, 2.5, 7.0, 20.0, 70.0), 1.0)
    assert mo.normalized_moment(ms, 2, 1.0) == pytest.approx(1.0, rel=1e-15)


def test_degenerate_functional():
    ms = mo.MomentSet((0.0,) * 5, 1.0)
    with pytest.raises(DegenerateFunctional):
        mo.normalized_moment(ms, 3)
    with pytest.raises(DegenerateFunctional):
        mo.standardized_threshold(ms, 1.0, 5)


def test_standardized_threshold():
    ms = mo.MomentSet((5 * math.pi / 3, 3 * math.pi, 0.0, 0.0, 0.0), 1 / math.pi)
    assert mo.standardized_threshold(ms, None, ms.mean_demand) == pytest.approx(0.0, abs=1e-15)
    assert mo.standardized_threshold(ms, None, 5) == pytest.approx((5 - 5 / 3) / math.sqrt(3),
                                                                    rel=1e-14)
    assert (5 - 5 / 3) / math.sqrt(3) == pytest.approx(1.92450, abs=5e-6)


@pytest.mark.parametrize("p", [3, 4, 5])
def test_scaling_law(p):
    s = desk(3.8)
    table = th.build_table(s)
    values = []
    for lam in (1e-4, 1e-3, 1e-2):
        ms = mo.moment_set(table, s.classes, lam)
        values.append(mo.normalized_moment(ms, p) * lam ** (p / 2 - 1))
    np.testing.assert_allclose(values, values[0], rtol=1e-12)


@pytest.mark.parametrize("gamma", [3.0, 3.8, 4.4])
def test_log_convexity(gamma):
    s = desk(gamma)
    ms = mo.moment_set(th.build_table(s), s.classes, s.intensity)
    for p in range(2, 5):
        assert ms.M(p) ** 2 <= ms.M(p - 1) * ms.M(p + 1) * (1 + 1e-14)


def test_moments_against_simulation():
    from celldim import montecarlo as mc
    s = desk(3.8)
    ms = mo.moment_set(th.build_table(s, "quadrature"), s.classes, s.intensity)
    sample = mc.simulate_demand(s, mc.SimConfig(trials=10 ** 6, master_seed=3, workers=4))
    x = sample.totals.astype(float)
    n = x.size
    se_mean = x.std() / math.sqrt(n)
    assert abs(x.mean() - ms.mean_demand) < 4 * se_mean
    centered = (x - x.mean()) ** 2
    se_var = centered.std() / math.sqrt(n)
    assert abs(x.var(ddof=1) - ms.variance) < 4 * se_var
