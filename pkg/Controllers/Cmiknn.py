"""
nearest-neighbour conditional mutual information and the local permutation null

    I(x; y | z) = psi(k) - < psi(n_xz + 1) + psi(n_yz + 1) - psi(n_z + 1) >

with max-norm balls sized by the distance to the k-th neighbour in the joint
space; without z, n_z + 1 = n and the estimator is the plain KSG one.
"""

import logging

import numpy as np
from scipy.spatial.distance import cdist
from scipy.special import digamma
from scipy.stats import norm, rankdata
from sklearn.neighbors import KDTree

from Controllers.KernelTests import permutation_pvalue
from Models.Configs import CmiknnConfig, config_echo
from Models.Errors import DomainError
from Models.TestOutcome import TestId, TestOutcome
from Utils import as_matrix, prepare_inputs, require_samples

log = logging.getLogger(__name__)

# brute-force distance matrices up to this size, KD-tree above
BRUTE_FORCE_LIMIT = 512
JITTER = 1e-10
# separates identical conditioning rows, far below any real spacing of standardized z
TIE_JITTER = 1e-6


def nearest_neighbors(points, k):
    """ :returns: n x k indices of the k max-norm nearest points, self included and first """

    n = len(points)
    k = min(k, n)
    if n > BRUTE_FORCE_LIMIT:
        _, neighbors = KDTree(points, metric='chebyshev').query(points, k=k)
    else:
        distances = cdist(points, points, 'chebyshev')
        neighbors = np.argsort(distances, axis=1, kind='stable')[:, :k]

    for i, row in enumerate(neighbors):
        # duplicated points may push i itself out of its own list
        if row[0] != i:
            others = [j for j in row if j != i]
            neighbors[i] = [i] + others[:k - 1]
    return neighbors


class LocalPermuter:
    """
    draws permutations that only move an index to one of its k_perm nearest
    z-neighbours; the neighbour lists are built once and reused for every draw,
    unless z has repeated rows (one-hot labels), where each draw breaks the
    ties with fresh jitter so that neighbours are random within a tie group
    """

    def __init__(self, z, k_perm=5):
        if k_perm < 1:
            raise DomainError('k_perm must be at least 1')

        self.z = np.asarray(z, dtype=float)
        if self.z.ndim == 1:
            self.z = self.z.reshape(-1, 1)
        self.n = self.z.shape[0]
        self.k_perm = min(k_perm, self.n)
        self.neighbors = None
        self.tied = False
        if self.z.ndim == 2 and self.z.shape[1] > 0 and self.n > 0:
            self.tied = len(np.unique(self.z, axis=0)) < self.n
            if not self.tied:
                self.neighbors = nearest_neighbors(self.z, self.k_perm)

    def _neighbors(self, rng):
        if not self.tied:
            return self.neighbors
        jitter = TIE_JITTER * rng.standard_normal(self.z.shape)
        return nearest_neighbors(self.z + jitter, self.k_perm)

    def draw(self, seed):
        rng = np.random.default_rng(seed)
        if self.neighbors is None and not self.tied:
            return rng.permutation(self.n)

        neighbors = self._neighbors(rng)
        order = np.argsort(rng.random(neighbors.shape), axis=1)
        shuffled = np.take_along_axis(neighbors, order, axis=1)

        permutation = np.empty(self.n, dtype=np.int64)
        used = np.zeros(self.n, dtype=bool)
        for i in rng.permutation(self.n):
            for j in shuffled[i]:
                if not used[j]:
                    break
            else:
                j = self._nearest_unused(i, used)
            permutation[i] = j
            used[j] = True

        return permutation

    def _nearest_unused(self, i, used):
        candidates = np.flatnonzero(~used)
        distances = np.max(np.abs(self.z[candidates] - self.z[i]), axis=1)
        return candidates[np.argmin(distances)]


def local_permutation(z, k_perm, seed):
    return LocalPermuter(z, k_perm).draw(seed)


def _normal_scores(data):
    """ rank-transform each column onto standard-normal quantiles, ties share a rank """
    n = data.shape[0]
    return norm.ppf(rankdata(data, method='average', axis=0) / (n + 1))


def _kth_distance(points, k):
    if len(points) > BRUTE_FORCE_LIMIT:
        distances, _ = KDTree(points, metric='chebyshev').query(points, k=k + 1)
        return distances[:, k]
    distances = cdist(points, points, 'chebyshev')
    return np.partition(distances, k, axis=1)[:, k]


def _count_within(points, radius):
    """ :returns: number of other points strictly closer than radius, per point """

    if len(points) > BRUTE_FORCE_LIMIT:
        tree = KDTree(points, metric='chebyshev')
        counts = tree.query_radius(points, r=np.nextafter(radius, 0), count_only=True)
    else:
        counts = np.sum(cdist(points, points, 'chebyshev') < radius[:, None], axis=1)
    return np.maximum(counts - 1, 0)


def cmi_knn_estimate(x, y, z=None, k=10, seed=0, transform='normal_scores'):
    """ :returns: CMI estimate in nats; may be slightly negative """

    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    n = len(x)
    z = as_matrix(z, n)
    if len(y) != n:
        raise DomainError(f'x has {n} samples but y has {len(y)}')
    if not 1 <= k < n:
        raise DomainError(f'k must satisfy 1 <= k < n, got k={k}, n={n}')

    data = np.column_stack([x, y, z])
    if transform == 'normal_scores':
        data = _normal_scores(data)

    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(data.shape)
    for column in range(data.shape[1]):
        if len(np.unique(data[:, column])) < n:
            data[:, column] += JITTER * noise[:, column]

    dz = z.shape[1]
    z_columns = list(range(2, 2 + dz))
    radius = _kth_distance(data, k)

    n_xz = _count_within(data[:, [0] + z_columns], radius)
    n_yz = _count_within(data[:, [1] + z_columns], radius)
    if dz:
        n_z = _count_within(data[:, z_columns], radius)
    else:
        n_z = np.full(n, n - 1)

    return float(digamma(k) - np.mean(digamma(n_xz + 1) + digamma(n_yz + 1) - digamma(n_z + 1)))


def cmiknn_test(x, y, z=None, config=CmiknnConfig()):

    x = np.asarray(x, dtype=float).reshape(-1)
    n = len(x)
    require_samples(n, config.min_samples)
    x, y, z = prepare_inputs(x, y, z)
    k = min(config.resolve_k(n), n - 1)

    def estimate(values):
        return cmi_knn_estimate(values, y, z, k, seed=config.seed, transform=config.transform)

    observed = estimate(x)
    permuter = LocalPermuter(z, config.k_perm)
    streams = np.random.SeedSequence(config.seed).spawn(config.B)
    surrogates = [estimate(x[permuter.draw(stream)]) for stream in streams]

    p_value = permutation_pvalue(observed, surrogates)
    log.debug('cmiknn n=%d k=%d cmi=%.6g p=%.4g', n, k, observed, p_value)
    return TestOutcome(TestId.cmiknn, observed, p_value, n, config.seed, config_echo(config))
