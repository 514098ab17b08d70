import json
import math
from dataclasses import replace

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from celldim import scenario as sc
from celldim.errors import ScenarioError

from conftest import desk, toy_scenario


def test_reference_is_valid(reference):
    assert sc.validate(reference) == []


def test_probabilities_must_sum_to_one():
    s = toy_scenario(rates=(500.0, 400.0), probabilities=(0.5, 0.4))
    assert "class probabilities sum to 0.9" in sc.validate(s)
    with pytest.raises(ScenarioError):
        sc.check(s)


def test_exponent_boundary():
    s = desk().with_gamma(2.0)
    assert "pathloss_exponent must exceed 2" in sc.validate(s)


def test_validate_has_no_side_effects(reference):
    first = sc.validate(reference)
    assert sc.validate(reference) == first
    assert sc.check(reference) is reference


@pytest.mark.parametrize("field, value", [
    ("radius_m", 0.0), ("intensity", -1.0), ("max_subchannels_per_user", 0),
])
def test_rejects_bad_cell(field, value, reference):
    assert sc.validate(replace(reference, **{field: value}))


def test_explicit_attenuation_passthrough():
    radio = sc.RadioParams(1.0, 1.0, None, 1.0, 3.0, 180.0, 1.0, explicit_attenuation_constant=1.0)
    assert sc.attenuation_constant(radio) == 1.0


def test_attenuation_unit_case():
    f = sc.SPEED_OF_LIGHT / (4 * math.pi)
    radio = sc.RadioParams(1.0, 1.0, f, 1.0, 3.0, 180.0, 1.0)
    assert sc.attenuation_constant(radio) == pytest.approx(1.0, rel=1e-15)


def test_attenuation_against_high_precision():
    radio = desk().radio
    mpmath.mp.dps = 40
    a = mpmath.mpf(299792458) / (4 * mpmath.pi * mpmath.mpf("2.6e9") * 10)
    expected = float(a ** 2 * mpmath.mpf(10) ** mpmath.mpf("3.8"))
    assert sc.attenuation_constant(radio) == pytest.approx(expected, rel=1e-12)


@given(st.floats(2.05, 7.9), st.floats(0.01, 0.09))
def test_attenuation_monotone_in_exponent(gamma, step):
    for d_ref, sign in ((10.0, 1), (0.5, -1)):
        radio = sc.RadioParams(1.0, 1.0, 2.6e9, d_ref, gamma, 180.0, 1.0)
        a = sc.attenuation_constant(radio)
        b = sc.attenuation_constant(replace(radio, pathloss_exponent=gamma + step))
        assert sign * (b - a) > 0


def test_shadowing_moment_degenerate():
    assert sc.shadowing_fractional_moment(sc.ShadowingParams(0.0, 0.0), 3.3) == 1.0
    assert sc.shadowing_fractional_moment(sc.ShadowingParams(5.0, 0.0), 2.0) == \
        pytest.approx(10 ** 0.5, rel=1e-14)


def test_shadowing_moment_closed_form_and_sampling():
    value = sc.shadowing_fractional_moment(sc.ShadowingParams(0.0, 10.0), 4.0)
    assert value == pytest.approx(10 ** ((10 * math.log(10) / 40) / 20), rel=1e-14)
    assert value == pytest.approx(1.0685, abs=5e-5)
    rng = np.random.default_rng(12345)
    samples = np.concatenate([10 ** (rng.normal(0, math.sqrt(10), 10 ** 6) / 20)
                              for _ in range(10)])
    se = samples.std() / math.sqrt(samples.size)
    assert abs(samples.mean() - value) < 3 * se


@given(st.floats(-10, 10), st.floats(0, 100), st.floats(2.05, 8))
def test_shadowing_moment_jensen(mean, var, gamma):
    value = sc.shadowing_fractional_moment(sc.ShadowingParams(mean, var), gamma)
    floor = 10 ** (mean / (5 * gamma))
    if var == 0:
        assert value == pytest.approx(floor, rel=1e-14)
    else:
        assert value >= floor * (1 - 1e-15)


def test_json_roundtrip(tmp_path, reference):
    path = tmp_path / "s.json"
    sc.save_scenario(reference, path)
    assert sc.load_scenario(path) == reference


def test_json_rejects_unknown_keys(tmp_path, reference):
    data = sc.scenario_to_dict(reference)
    data["radio"]["antenna_gain"] = 3.0
    path = tmp_path / "s.json"
    path.write_text(json.dumps(data))
    with pytest.raises(ScenarioError, match="unknown keys"):
        sc.load_scenario(path)


def test_json_needs_attenuation_source(reference):
    data = sc.scenario_to_dict(reference)
    del data["radio"]["carrier_frequency_hz"]
    with pytest.raises(ScenarioError):
        sc.scenario_from_dict(data)
