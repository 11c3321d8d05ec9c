import logging
from dataclasses import replace

import numpy as np
from scipy.stats import kstest, norm

from Controllers.Committee import TESTS
from Controllers.Synth import generate_scm_dataset
from Controllers.WorkerPool import WorkerPool
from Models.Configs import DEFAULT_B, AuditConfig
from Models.Errors import AuditError, DomainError
from Models.Scm import CalibrationReport, RejectionRate
from Models.TestOutcome import TestId
from Utils import derive_seed

log = logging.getLogger(__name__)

RECOMMENDED_TRIALS = 50


def binomial_interval(successes, trials, level=0.95):
    """ :returns: normal-approximation confidence interval for a proportion, clipped to [0, 1] """

    if trials == 0:
        return 0.0, 1.0
    rate = successes / trials
    half = norm.ppf(0.5 + level / 2) * np.sqrt(rate * (1 - rate) / trials)
    return max(0.0, rate - half), min(1.0, rate + half)


def trial_seed(seed, trial):
    return derive_seed(seed, 'trial', trial)


def _run_trial(spec, trial, test_ids, config, registry):
    seed = trial_seed(spec.seed, trial)
    sample = generate_scm_dataset(replace(spec, seed=seed))

    results = {}
    for test_id in test_ids:
        member = config.test_config(test_id, derive_seed(seed, test_id.value))
        try:
            results[test_id] = registry[test_id](sample.x, sample.y, sample.z, member).p_value
        except AuditError as e:
            results[test_id] = f'trial {trial}: {e}'
    return results


def calibration_run(test_ids, spec, trials, alpha, B=DEFAULT_B, jobs=1, registry=None):
    """
    rejection rate of each test over seeded trials of one model spec
    :param registry: TestId -> test callable, defaults to the committee members
    :returns: CalibrationReport
    """

    test_ids = tuple(TestId(t) for t in test_ids)
    if not test_ids:
        raise DomainError('at least one test is required')
    if not 0.0 < alpha < 1.0:
        raise DomainError(f'alpha must lie in (0, 1), got {alpha}')
    if trials < 1:
        raise DomainError('at least one trial is required')
    if trials < RECOMMENDED_TRIALS:
        log.warning('%d trials is below the recommended %d; rates will be noisy', trials, RECOMMENDED_TRIALS)

    registry = TESTS if registry is None else registry
    config = AuditConfig(alpha=alpha, tests=test_ids, B=B, seed=spec.seed)
    outcomes = WorkerPool(jobs, 'trials').map(
        lambda trial: _run_trial(spec, trial, test_ids, config, registry), range(trials))

    rates = {}
    for test_id in test_ids:
        p_values = [o[test_id] for o in outcomes if not isinstance(o[test_id], str)]
        failures = [o[test_id] for o in outcomes if isinstance(o[test_id], str)]
        rejections = sum(p < alpha for p in p_values)
        low, high = binomial_interval(rejections, len(p_values))
        ks = kstest(p_values, 'uniform') if p_values else None

        rates[test_id.value] = RejectionRate(
            test_id=test_id.value,
            rejections=rejections,
            completed=len(p_values),
            rate=rejections / len(p_values) if p_values else 0.0,
            ci_low=low,
            ci_high=high,
            ks_statistic=None if ks is None else float(ks.statistic),
            ks_p_value=None if ks is None else float(ks.pvalue),
            p_values=tuple(p_values),
            failures=tuple(failures),
        )
        log.info('%s: %d/%d rejections, %d failures', test_id.value, rejections, len(p_values), len(failures))

    return CalibrationReport(spec, trials, alpha, rates)
