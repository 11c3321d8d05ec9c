from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """ squared-exponential Gram matrix; symmetric, unit diagonal, entries in (0, 1] """

    entries: np.ndarray
    bandwidth: float

    @property
    def n(self):
        return self.entries.shape[0]

    def __repr__(self):
        return f'<GramMatrix(n={self.n}, bandwidth={self.bandwidth:.4g})>'


@dataclass(frozen=True, eq=False)
class FourierFeatureMap:
    features: np.ndarray
    frequencies: np.ndarray
    phases: np.ndarray
    bandwidth: float
    seed: int

    @property
    def dimension(self):
        return self.features.shape[1]

    def __repr__(self):
        return f'<FourierFeatureMap(n={self.features.shape[0]}, D={self.dimension}, seed={self.seed})>'
