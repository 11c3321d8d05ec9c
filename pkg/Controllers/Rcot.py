"""
randomized conditional correlation test: random Fourier features for x, y and z,
ridge residualization of the x and y features on the z features and the
statistic n * |C_xy|_F^2, whose null is a weighted sum of chi-square(1) terms
"""

import logging

import numpy as np
from scipy import linalg
from scipy.stats import gamma

from Controllers.Cmiknn import LocalPermuter
from Controllers.KernelTests import as_points, bandwidth_or_default, permutation_pvalue
from Models.Configs import RcotConfig, config_echo
from Models.Errors import DomainError, NumericalError
from Models.Kernels import FourierFeatureMap
from Models.TestOutcome import TestId, TestOutcome
from Utils import derive_seed, prepare_inputs, require_samples

log = logging.getLogger(__name__)


def random_fourier_features(points, bandwidth, D, seed=0, rng=None):
    """
    features[i, j] = sqrt(2 / D) cos(w_j . x_i / bandwidth + b_j),
    w_j standard normal and b_j uniform on [0, 2 pi)
    :param rng: generator override; defaults to numpy's default_rng(seed)
    """

    if not bandwidth > 0:
        raise DomainError(f'bandwidth must be positive, got {bandwidth}')
    if D < 1:
        raise DomainError(f'feature count must be at least 1, got {D}')

    pts = as_points(points)
    rng = np.random.default_rng(seed) if rng is None else rng
    frequencies = np.asarray(rng.standard_normal((D, pts.shape[1])), dtype=float)
    phases = np.asarray(rng.uniform(0.0, 2.0 * np.pi, D), dtype=float)

    features = np.sqrt(2.0 / D) * np.cos(pts @ frequencies.T / bandwidth + phases)
    return FourierFeatureMap(features, frequencies, phases, float(bandwidth), seed)


def residualize(f_target, f_cond, ridge):
    """ :returns: centered f_target minus its ridge regression on centered f_cond """

    if not ridge > 0:
        raise DomainError('ridge must be positive')

    target = np.asarray(f_target, dtype=float)
    cond = np.asarray(f_cond, dtype=float)
    if cond.ndim == 1:
        cond = cond.reshape(-1, 1)
    if cond.shape[0] != target.shape[0]:
        raise DomainError(f'row counts differ: {target.shape[0]} and {cond.shape[0]}')

    target = target - target.mean(axis=0)
    if cond.shape[1] == 0:
        return target

    cond = cond - cond.mean(axis=0)
    try:
        beta = linalg.solve(
            cond.T @ cond + ridge * np.eye(cond.shape[1]), cond.T @ target, assume_a='pos')
    except (linalg.LinAlgError, ValueError) as e:
        raise NumericalError(f'ridge solve failed ({e}); try a larger ridge')

    return target - cond @ beta


def rcot_statistic(r_x, r_y):
    """ :returns: n times the squared Frobenius norm of the empirical cross-covariance """

    r_x = np.asarray(r_x, dtype=float)
    r_y = np.asarray(r_y, dtype=float)
    n = r_x.shape[0]
    cross = r_x.T @ r_y / n
    return float(n * np.sum(cross ** 2))


def hbe_pvalue(weights, statistic):
    """
    upper tail of sum(w_i chi2_1) via a gamma matched on mean sum(w)
    and variance 2 sum(w^2)
    """

    weights = np.asarray(weights, dtype=float).reshape(-1)
    weights = weights[weights > 0]
    if weights.size == 0:
        raise DomainError('at least one positive weight is required')
    if statistic <= 0:
        return 1.0

    mean = weights.sum()
    variance = 2.0 * np.sum(weights ** 2)
    p_value = gamma.sf(statistic, a=mean ** 2 / variance, scale=variance / mean)
    return float(min(1.0, max(0.0, p_value)))


def null_weights(r_x, r_y):
    """ :returns: eigenvalues of the second-moment matrix of per-sample residual cross-products """

    n = r_x.shape[0]
    products = (r_x[:, :, None] * r_y[:, None, :]).reshape(n, -1)
    return linalg.eigvalsh(products.T @ products / n)


def rcot_test(x, y, z=None, config=RcotConfig()):

    x = np.asarray(x, dtype=float).reshape(-1)
    n = len(x)
    require_samples(n, config.min_samples)
    x, y, z = prepare_inputs(x, y, z)
    if np.ptp(x) == 0.0 or np.ptp(y) == 0.0:
        # constant features; the residual cross-covariance is rounding noise
        return TestOutcome(TestId.rcot, 0.0, 1.0, n, config.seed, config_echo(config))

    f_x = random_fourier_features(
        x, bandwidth_or_default(x), config.d_x, derive_seed(config.seed, 'x')).features
    f_y = random_fourier_features(
        y, bandwidth_or_default(y), config.d_y, derive_seed(config.seed, 'y')).features
    if z.shape[1]:
        f_z = random_fourier_features(
            z, bandwidth_or_default(z), config.d_z, derive_seed(config.seed, 'z')).features
    else:
        f_z = np.zeros((n, 0))

    r_x = residualize(f_x, f_z, config.ridge)
    r_y = residualize(f_y, f_z, config.ridge)
    statistic = rcot_statistic(r_x, r_y)

    if config.uses_permutation(n):
        # featurizing x[perm] is a row permutation of f_x
        permuter = LocalPermuter(z, config.k_perm)
        streams = np.random.SeedSequence(config.seed).spawn(config.B)
        surrogates = [
            rcot_statistic(residualize(f_x[permuter.draw(stream)], f_z, config.ridge), r_y)
            for stream in streams
        ]
        p_value = permutation_pvalue(statistic, surrogates)
    else:
        weights = null_weights(r_x, r_y)
        if statistic <= 0 or not np.any(weights > 0):
            p_value = 1.0
        else:
            p_value = hbe_pvalue(weights, statistic)

    log.debug('rcot n=%d stat=%.6g p=%.4g', n, statistic, p_value)
    return TestOutcome(TestId.rcot, statistic, p_value, n, config.seed, config_echo(config))
