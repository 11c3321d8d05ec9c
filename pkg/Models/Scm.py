from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np

from Models.Dataset import Dataset, Manifest, PropertyKind
from Models.Errors import DomainError

# "moderate" effect: every power figure is pinned to this with unit noise
MODERATE_EFFECT = 0.5


class ScmKind(Enum):
    null_common_cause = 'null_common_cause'
    direct_dependence = 'direct_dependence'
    pipeline_fixture = 'pipeline_fixture'

    @classmethod
    def parse(cls, value):
        aliases = {'null': cls.null_common_cause, 'direct': cls.direct_dependence,
                   'pipeline': cls.pipeline_fixture}
        if isinstance(value, cls):
            return value
        if value in aliases:
            return aliases[value]
        try:
            return cls(value)
        except ValueError:
            raise DomainError(f'unknown model kind {value!r}; expected one of '
                              f'{sorted(aliases) + [k.value for k in cls]}')


@dataclass(frozen=True)
class ScmSpec:
    kind: ScmKind = ScmKind.null_common_cause
    n: int = 500
    effect_size: float = MODERATE_EFFECT
    noise_std: float = 1.0
    property_kind: PropertyKind = PropertyKind.scalar
    classes: int = 7
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'kind', ScmKind.parse(self.kind))
        try:
            object.__setattr__(self, 'property_kind', PropertyKind(self.property_kind))
        except ValueError:
            raise DomainError(f'unknown property kind {self.property_kind!r}')

        if self.n < 50:
            raise DomainError(f'n must be at least 50, got {self.n}')
        if self.effect_size < 0:
            raise DomainError(f'effect size must be non-negative, got {self.effect_size}')
        if not self.noise_std > 0:
            raise DomainError(f'noise std must be positive, got {self.noise_std}')
        if self.kind == ScmKind.pipeline_fixture and self.classes < 2:
            raise DomainError(f'a pipeline fixture needs at least 2 classes, got {self.classes}')

    def to_dict(self):
        return {
            'kind': self.kind.value,
            'n': self.n,
            'effect_size': self.effect_size,
            'noise_std': self.noise_std,
            'property_kind': self.property_kind.value,
            'classes': self.classes,
            'seed': self.seed,
        }


@dataclass(frozen=True)
class GroundTruth:
    """ (property, class) -> whether the generating equations make them dependent """

    cells: Dict[Tuple[str, str], bool]

    def dependent(self, property, class_name):
        return self.cells[(property, class_name)]

    def __len__(self):
        return len(self.cells)

    def to_dict(self):
        return {'cells': [{'property': p, 'class_name': c, 'dependent': d}
                          for (p, c), d in self.cells.items()]}

    @classmethod
    def from_dict(cls, data):
        return cls({(c['property'], c['class_name']): bool(c['dependent']) for c in data['cells']})


@dataclass(frozen=True, eq=False)
class ScmSample:
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    ground_truth: GroundTruth
    spec: ScmSpec


@dataclass(frozen=True, eq=False)
class PipelineFixture:
    dataset: Dataset
    manifest: Manifest
    ground_truth: GroundTruth
    spec: ScmSpec


@dataclass(frozen=True)
class RejectionRate:
    test_id: str
    rejections: int
    completed: int
    rate: float
    ci_low: float
    ci_high: float
    ks_statistic: Optional[float]
    ks_p_value: Optional[float]
    p_values: Tuple[float, ...] = ()
    failures: Tuple[str, ...] = ()

    def to_dict(self):
        return {
            'test_id': self.test_id,
            'rejections': self.rejections,
            'completed': self.completed,
            'rate': self.rate,
            'ci95': [self.ci_low, self.ci_high],
            'ks_statistic': self.ks_statistic,
            'ks_p_value': self.ks_p_value,
            'failures': list(self.failures),
            'p_values': list(self.p_values),
        }


@dataclass(frozen=True)
class CalibrationReport:
    spec: ScmSpec
    trials: int
    alpha: float
    rates: Dict[str, RejectionRate] = field(default_factory=dict)

    def rate(self, test_id):
        return self.rates[getattr(test_id, 'value', test_id)]

    def to_dict(self):
        return {
            'spec': self.spec.to_dict(),
            'trials': self.trials,
            'alpha': self.alpha,
            'tests': {name: rate.to_dict() for name, rate in self.rates.items()},
        }
