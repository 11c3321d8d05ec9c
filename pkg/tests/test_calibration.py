import logging

import numpy as np
import pytest

from Controllers.Calibration import binomial_interval, calibration_run
from Models.Errors import DomainError, NumericalError
from Models.Scm import MODERATE_EFFECT, ScmSpec
from Models.TestOutcome import TestId, TestOutcome


def uniform_member(x, y, z, config):
    p = float(np.random.default_rng(config.seed).uniform())
    return TestOutcome(TestId.chsic, 0.0, p, len(x), config.seed, '{}')


def flaky_member(x, y, z, config):
    if config.seed % 4 == 0:
        raise NumericalError('singular system')
    return uniform_member(x, y, z, config)


def test_binomial_interval():
    low, high = binomial_interval(10, 200)

    assert low == pytest.approx(0.05 - 1.959964 * np.sqrt(0.05 * 0.95 / 200), abs=1e-6)
    assert high == pytest.approx(0.05 + 1.959964 * np.sqrt(0.05 * 0.95 / 200), abs=1e-6)
    assert binomial_interval(0, 10) == (0.0, 0.0)
    assert binomial_interval(0, 0) == (0.0, 1.0)


def test_uniform_p_values_reject_at_alpha():
    report = calibration_run(['chsic'], ScmSpec(n=60), 200, 0.05, registry={TestId.chsic: uniform_member})
    rate = report.rate(TestId.chsic)

    assert rate.completed == 200
    assert rate.rate <= 0.12
    assert rate.ks_p_value > 0.001
    assert report.to_dict()['tests']['chsic']['rejections'] == rate.rejections


def test_failures_are_recorded_not_raised():
    report = calibration_run(['chsic'], ScmSpec(n=60), 60, 0.05, registry={TestId.chsic: flaky_member})
    rate = report.rate('chsic')

    assert rate.failures
    assert rate.completed + len(rate.failures) == 60
    assert all('singular system' in failure for failure in rate.failures)


def test_few_trials_warn(caplog):
    with caplog.at_level(logging.WARNING):
        calibration_run(['chsic'], ScmSpec(n=60), 5, 0.05, registry={TestId.chsic: uniform_member})

    assert 'below the recommended' in caplog.text


def test_invalid_runs():
    with pytest.raises(DomainError):
        calibration_run([], ScmSpec(), 10, 0.05)
    with pytest.raises(DomainError):
        calibration_run(['rcot'], ScmSpec(), 10, 1.5)
    with pytest.raises(DomainError):
        calibration_run(['rcot'], ScmSpec(), 0, 0.05)


def test_zero_effect_matches_the_null():
    null = calibration_run(['rcot'], ScmSpec(kind='null', n=120, seed=1), 5, 0.05)
    flat = calibration_run(['rcot'], ScmSpec(kind='direct', n=120, effect_size=0.0, seed=1), 5, 0.05)

    assert null.rate('rcot').p_values == flat.rate('rcot').p_values


def test_parallel_trials_match_serial():
    spec = ScmSpec(kind='direct', n=80, seed=2)
    serial = calibration_run(['rcot'], spec, 6, 0.05, B=30, jobs=1)
    parallel = calibration_run(['rcot'], spec, 6, 0.05, B=30, jobs=3)

    assert serial.rate('rcot') == parallel.rate('rcot')


def test_null_smoke():
    report = calibration_run(list(TestId), ScmSpec(kind='null', n=200), 50, 0.05, B=99)
    rates = [report.rate(test_id) for test_id in TestId]

    # 50 trials per test leave a wide binomial spread, so the band is checked on all members together
    pooled = sum(rate.rejections for rate in rates) / sum(rate.completed for rate in rates)
    assert 0.02 <= pooled <= 0.10
    for rate in rates:
        assert rate.completed == 50
        assert rate.rate <= 0.16
        assert rate.ks_p_value > 0.001


def test_power_grows_with_the_effect():
    rates = {}
    for effect in (0.2, 0.5, 0.8):
        report = calibration_run(list(TestId), ScmSpec(kind='direct', n=150, effect_size=effect), 20, 0.05, B=49)
        rates[effect] = [report.rate(test_id).rate for test_id in TestId]

    for weak, strong in ((0.2, 0.5), (0.5, 0.8)):
        assert all(a <= b for a, b in zip(rates[weak], rates[strong]))


@pytest.mark.slow
@pytest.mark.parametrize('test_id', list(TestId))
def test_null_rejection_rate_is_controlled(test_id):
    alpha, trials = 0.05, 200
    report = calibration_run([test_id], ScmSpec(kind='null', n=500), trials, alpha)

    rate = report.rate(test_id)
    assert 0.02 <= rate.rate <= 0.10
    assert rate.ks_p_value >= 0.01


@pytest.mark.slow
@pytest.mark.parametrize('test_id', list(TestId))
def test_moderate_effect_is_detected(test_id):
    report = calibration_run([test_id], ScmSpec(kind='direct', n=500, effect_size=MODERATE_EFFECT), 200, 0.05)

    assert report.rate(test_id).rate >= 0.8
