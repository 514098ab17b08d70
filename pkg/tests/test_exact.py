import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from celldim import exact as ex
from celldim import thresholds as th
from celldim.errors import CapacityError

from conftest import desk, toy_scenario
from oracles import compound_poisson_dense, poisson_upper_tail

HALF = ex.CompoundPoissonSpec(np.array([1 / 3, 2 / 3]))


def test_merge_rates_single_class():
    s = toy_scenario(rates=(500.0,), intensity=1 / math.pi)
    table = th.build_table(s)
    spec = ex.merge_rates(table, s.classes, s.intensity)
    np.testing.assert_allclose(spec.rates, [1 / 3, 2 / 3], rtol=1e-14)
    assert np.all(ex.merge_rates(table, s.classes, 0.0).rates == 0)


def test_merge_rates_level_sets():
    # class 0 stops at level 1, class 1 reaches level 2
    s = toy_scenario(rates=(200.0, 500.0), probabilities=(0.5, 0.5), intensity=1 / math.pi)
    table = th.build_table(s)
    assert [c.max_level for c in table.classes] == [1, 2]
    spec = ex.merge_rates(table, s.classes, s.intensity)
    assert spec.rates[1] == pytest.approx(0.5 * table.classes[1].weights[1] / math.pi, rel=1e-14)


def test_chernoff_bound_value():
    assert ex.poisson_chernoff(10, 20) == pytest.approx(math.exp(-10 * (2 * math.log(2) - 1)),
                                                        rel=1e-14)
    assert ex.poisson_chernoff(10, 20) == pytest.approx(0.0210, abs=1e-5)
    assert ex.truncation_point(10, 0.022) <= 20
    assert ex.truncation_point(0.0, 1e-12) == 0


@pytest.mark.parametrize("theta, eps", [(10, 1e-12), (0.3, 1e-9), (250.0, 1e-14), (3.0, 0.5)])
def test_truncation_point_matches_scan(theta, eps):
    q = ex.truncation_point(theta, eps)
    scan = math.ceil(theta)
    while ex.poisson_chernoff(theta, scan) > eps:
        scan += 1
    assert q == scan
    assert poisson_upper_tail(theta, q) <= eps


def test_two_component_pmf():
    pmf = ex.demand_pmf(HALF)
    assert pmf.probabilities[0] == pytest.approx(math.exp(-1), rel=1e-14)
    expected = 1 - math.exp(-1) * (1 + 1 / 3)
    assert pmf.sf(2) == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(0.509494, abs=1e-6)


@pytest.mark.parametrize("theta", [0.1, 2.0, 37.5])
def test_single_weight_is_poisson(theta):
    pmf = ex.demand_pmf(ex.CompoundPoissonSpec(np.array([theta])))
    n = np.arange(pmf.probabilities.size)
    np.testing.assert_allclose(pmf.probabilities, stats.poisson.pmf(n, theta), rtol=0, atol=1e-14)


def test_empty_process():
    spec = ex.CompoundPoissonSpec(np.zeros(3))
    pmf = ex.demand_pmf(spec)
    assert pmf.probabilities.tolist() == [1.0] and pmf.tail_bound == 0.0
    assert ex.exact_dimension(spec, 0.1).n_avail == 1


def test_loss_values():
    pmf = ex.demand_pmf(HALF)
    assert ex.exact_loss(pmf, 0).value == 1.0
    est = ex.exact_loss(pmf, 2)
    assert est.lower <= 0.509494 + 1e-6 and 0.509494 - 1e-6 <= est.upper
    assert est.upper - est.value == pytest.approx(pmf.tail_bound, abs=1e-16)
    beyond = ex.exact_loss(pmf, pmf.cap + 1)
    assert beyond.value == 0.0 and beyond.upper == pytest.approx(pmf.tail_bound)


def test_dimension_examples():
    assert ex.exact_dimension(HALF, 0.51).n_avail == 2
    assert ex.exact_dimension(HALF, 0.64).n_avail == 1


def test_capacity_error():
    with pytest.raises(CapacityError):
        ex.demand_pmf(ex.CompoundPoissonSpec(np.array([1e6])), max_entries=1000)


rates_strategy = st.lists(st.floats(0.0, 3.0), min_size=1, max_size=3)


@settings(max_examples=25, deadline=None)
@given(rates_strategy)
def test_against_dense_enumeration(rates):
    pmf = ex.demand_pmf(ex.CompoundPoissonSpec(np.array(rates)))
    oracle = compound_poisson_dense(rates)
    size = max(oracle.size, pmf.probabilities.size)
    a = np.pad(pmf.probabilities, (0, size - pmf.probabilities.size))
    b = np.pad(oracle, (0, size - oracle.size))
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0.0, 40.0), min_size=1, max_size=8))
def test_mass_and_monotonicity(rates):
    spec = ex.CompoundPoissonSpec(np.array(rates))
    pmf = ex.demand_pmf(spec)
    mass = pmf.probabilities.sum()
    assert 1 - 1e-12 <= mass + pmf.tail_bound and mass <= 1 + 1e-12
    assert np.all(np.diff(pmf.sf_array()) <= 1e-15)
    assert pmf.mean() == pytest.approx(spec.mean, rel=1e-9, abs=1e-9)
    assert pmf.variance() == pytest.approx(spec.variance, rel=1e-8, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0.01, 20.0), min_size=1, max_size=6),
       st.floats(1e-6, 0.5), st.floats(1.0, 3.0), st.floats(1.0, 3.0))
def test_dimension_monotone(rates, eps, eps_factor, lam_factor):
    spec = ex.CompoundPoissonSpec(np.array(rates))
    n = ex.exact_dimension(spec, eps).n_avail
    assert ex.exact_dimension(spec, min(eps * eps_factor, 0.99)).n_avail <= n
    assert ex.exact_dimension(ex.CompoundPoissonSpec(spec.rates * lam_factor), eps).n_avail >= n


@pytest.mark.parametrize("eps", [1e-2, 1e-4])
def test_dimension_minimal_on_desk(eps):
    s = desk(3.8)
    spec = ex.merge_rates(th.build_table(s), s.classes, s.intensity, eps / 100)
    res = ex.exact_dimension(spec, eps)
    pmf = ex.demand_pmf(spec)
    assert ex.exact_loss(pmf, res.n_avail).upper <= eps
    assert ex.exact_loss(pmf, res.n_avail - 1).upper > eps
    assert res.guarantee and res.method == "exact"


def test_moments_match_table():
    from celldim import moments as mo
    s = desk(4.0, users=28)
    table = th.build_table(s)
    ms = mo.moment_set(table, s.classes, s.intensity)
    pmf = ex.demand_pmf(ex.merge_rates(table, s.classes, s.intensity))
    assert pmf.mean() == pytest.approx(ms.mean_demand, rel=1e-10)
    assert pmf.variance() == pytest.approx(ms.variance, rel=1e-9)
