"""
kernel machinery and the conditional HSIC committee member

statistic: with extended variables xz = (x, z) and yz = (y, z), centered Gram
matrices G and R = G (G + n eps I)^-1,

    Tr[R_xz R_yz - 2 R_xz R_yz R_z + R_xz R_z R_yz R_z]

and Tr[R_x R_y] when z is empty. The null distribution comes from recomputing
the statistic with x shuffled inside z-neighbourhoods.
"""

import logging

import numpy as np
from scipy import linalg
from scipy.spatial.distance import pdist, squareform

from Models.Configs import ChsicConfig, config_echo
from Models.Errors import DegenerateInputError, DomainError, NumericalError
from Models.Kernels import GramMatrix
from Models.TestOutcome import TestId, TestOutcome
from Utils import as_matrix, prepare_inputs, require_samples

log = logging.getLogger(__name__)


def as_points(points):
    arr = np.asarray(points, dtype=float)
    return arr.reshape(-1, 1) if arr.ndim == 1 else arr


def median_heuristic_bandwidth(points):
    """ :returns: median pairwise Euclidean distance over distinct index pairs """

    pts = as_points(points)
    if len(pts) < 2:
        raise DomainError('the median heuristic needs at least two points')

    distances = pdist(pts)
    if not np.any(distances > 0):
        raise DegenerateInputError('all points are identical; no bandwidth can be derived')

    median = float(np.median(distances))
    if median == 0.0:
        # mostly tied data (binary manifestations): use the positive distances
        median = float(np.median(distances[distances > 0]))
    return median


def bandwidth_or_default(points, default=1.0):
    """ median heuristic, falling back to default for constant inputs """
    try:
        return median_heuristic_bandwidth(points)
    except DegenerateInputError:
        return default


def rbf_gram(points, bandwidth):
    """ k(x, y) = exp(-|x - y|^2 / (2 bandwidth^2)) """

    if not bandwidth > 0:
        raise DomainError(f'bandwidth must be positive, got {bandwidth}')

    squared = squareform(pdist(as_points(points), 'sqeuclidean'))
    entries = np.exp(-squared / (2.0 * bandwidth ** 2))
    np.maximum(entries, np.finfo(float).tiny, out=entries)
    return GramMatrix(entries, float(bandwidth))


def center(entries):
    """ :returns: H K H with H = I - (1/n) 1 1^T """
    return entries - entries.mean(axis=0) - entries.mean(axis=1)[:, None] + entries.mean()


def _entries(gram):
    return gram.entries if isinstance(gram, GramMatrix) else np.asarray(gram, dtype=float)


def hsic_statistic(kx, ky):
    """ :returns: (1/n^2) Tr(Kx~ Ky~) for centered Gram matrices """

    a = _entries(kx)
    b = _entries(ky)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise DomainError(f'Gram matrices must be square and equal in size, got {a.shape} and {b.shape}')

    n = a.shape[0]
    return float(np.sum(center(a) * center(b)) / n ** 2)


def regularized_operator(points, epsilon):
    """ :returns: R = G (G + n eps I)^-1 for the centered Gram matrix G of points """

    pts = as_points(points)
    n = len(pts)
    gram = center(rbf_gram(pts, bandwidth_or_default(pts)).entries)

    try:
        # G and (G + n eps I) commute, so solving from the left gives the same R
        return linalg.solve(gram + n * epsilon * np.eye(n), gram, assume_a='pos')
    except (linalg.LinAlgError, ValueError) as e:
        raise NumericalError(f'regularized solve failed ({e}); try a larger epsilon')


class ConditionalHsic:
    """
    conditional HSIC with every term that does not depend on x precomputed,
    so that permutation surrogates only need one solve each
    """

    def __init__(self, y, z, epsilon=1e-3):
        if not epsilon > 0:
            raise DomainError('epsilon must be positive')

        y = np.asarray(y, dtype=float).reshape(-1)
        self.n = len(y)
        self.z = as_matrix(z, self.n)
        self.epsilon = epsilon

        r_yz = regularized_operator(np.column_stack([y, self.z]), epsilon)
        if self.z.shape[1] == 0:
            self.weights = r_yz.T
        else:
            r_z = regularized_operator(self.z, epsilon)
            a = r_yz @ r_z
            # Tr[R_x B] = sum(R_x * B.T), the statistic is linear in R_x
            self.weights = r_yz.T - 2.0 * a.T + (r_z @ a).T

    def statistic(self, x):
        x = np.asarray(x, dtype=float).reshape(-1, 1)
        r_xz = regularized_operator(np.column_stack([x, self.z]), self.epsilon)
        return float(np.sum(r_xz * self.weights))


def chsic_statistic(x, y, z=None, epsilon=1e-3):
    return ConditionalHsic(y, z, epsilon).statistic(x)


def permutation_pvalue(observed, surrogate_statistics):
    """ :returns: (1 + #{surrogate >= observed}) / (B + 1) """

    surrogates = np.asarray(surrogate_statistics, dtype=float).reshape(-1)
    if surrogates.size == 0:
        raise DomainError('at least one surrogate statistic is required')
    return (1 + int(np.sum(surrogates >= observed))) / (surrogates.size + 1)


def chsic_test(x, y, z=None, config=ChsicConfig()):
    from Controllers.Cmiknn import LocalPermuter

    x = np.asarray(x, dtype=float).reshape(-1)
    require_samples(len(x), config.min_samples)
    x, y, z = prepare_inputs(x, y, z)

    model = ConditionalHsic(y, z, config.epsilon)
    observed = model.statistic(x)

    permuter = LocalPermuter(z, config.k_perm)
    streams = np.random.SeedSequence(config.seed).spawn(config.B)
    surrogates = [model.statistic(x[permuter.draw(stream)]) for stream in streams]

    p_value = permutation_pvalue(observed, surrogates)
    log.debug('chsic n=%d stat=%.6g p=%.4g', len(x), observed, p_value)
    return TestOutcome(TestId.chsic, observed, p_value, len(x), config.seed, config_echo(config))
