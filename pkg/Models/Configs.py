import json
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Optional, Tuple

from Models.Errors import DomainError
from Models.TestOutcome import TestId
from Models.Dataset import DEFAULT_MIN_STRATUM

DEFAULT_B = 500


class NullMethod(Enum):
    hbe = 'hbe'
    permutation = 'permutation'


class Mode(Enum):
    stratify = 'stratify'
    condition_on_label = 'condition_on_label'


class Consensus(Enum):
    majority = 'majority'
    unanimous = 'unanimous'
    any = 'any'


class Correction(Enum):
    none = 'none'
    benjamini_hochberg = 'benjamini_hochberg'


def _plain(value):
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def config_echo(config):
    """ :returns: canonical JSON for a config dataclass """
    return json.dumps({k: _plain(v) for k, v in asdict(config).items()}, sort_keys=True)


@dataclass(frozen=True)
class ChsicConfig:
    B: int = DEFAULT_B
    epsilon: float = 1e-3
    k_perm: int = 5
    seed: int = 0
    min_samples: int = DEFAULT_MIN_STRATUM

    def __post_init__(self):
        if self.B < 1:
            raise DomainError('B must be at least 1')
        if self.epsilon <= 0:
            raise DomainError('epsilon must be positive')
        if self.k_perm < 1:
            raise DomainError('k_perm must be at least 1')


@dataclass(frozen=True)
class RcotConfig:
    d_x: int = 5
    d_y: int = 5
    d_z: int = 25
    ridge: float = 1e-5
    null_method: NullMethod = NullMethod.hbe
    B: int = DEFAULT_B
    seed: int = 0
    min_samples: int = DEFAULT_MIN_STRATUM
    # hbe is asymptotic, small samples fall back to permutations
    permutation_below: int = 100
    k_perm: int = 5

    def __post_init__(self):
        if min(self.d_x, self.d_y, self.d_z) < 1:
            raise DomainError('feature counts must be at least 1')
        if self.ridge <= 0:
            raise DomainError('ridge must be positive')
        if self.B < 1:
            raise DomainError('B must be at least 1')
        object.__setattr__(self, 'null_method', NullMethod(self.null_method))

    def uses_permutation(self, n):
        return self.null_method == NullMethod.permutation or n < self.permutation_below


@dataclass(frozen=True)
class CmiknnConfig:
    # None -> max(5, floor(0.1 n)); a value below 1 is a fraction of n
    k_cmi: Optional[float] = None
    k_perm: int = 5
    B: int = DEFAULT_B
    seed: int = 0
    min_samples: int = DEFAULT_MIN_STRATUM
    transform: str = 'normal_scores'

    def __post_init__(self):
        if self.k_cmi is not None and self.k_cmi <= 0:
            raise DomainError('k_cmi must be positive')
        if self.k_perm < 1:
            raise DomainError('k_perm must be at least 1')
        if self.B < 1:
            raise DomainError('B must be at least 1')
        if self.transform not in ('normal_scores', 'none'):
            raise DomainError(f'unknown transform {self.transform!r}')

    def resolve_k(self, n):
        if self.k_cmi is None:
            return max(5, int(0.1 * n))
        if self.k_cmi < 1:
            return max(1, int(self.k_cmi * n))
        return int(self.k_cmi)


@dataclass(frozen=True)
class AuditConfig:
    alpha: float = 0.01
    mode: Mode = Mode.stratify
    tests: Tuple[TestId, ...] = field(default=(TestId.chsic, TestId.rcot, TestId.cmiknn))
    consensus: Consensus = Consensus.majority
    correction: Correction = Correction.none
    B: int = DEFAULT_B
    seed: int = 0
    min_stratum: int = DEFAULT_MIN_STRATUM

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f'alpha must lie in (0, 1), got {self.alpha}')
        if len(self.tests) == 0:
            raise DomainError('at least one test is required')
        if self.B < 1:
            raise DomainError('B must be at least 1')

        tests = tuple(dict.fromkeys(TestId(t) for t in self.tests))
        object.__setattr__(self, 'tests', tests)
        object.__setattr__(self, 'mode', Mode(self.mode))
        object.__setattr__(self, 'consensus', Consensus(self.consensus))
        object.__setattr__(self, 'correction', Correction(self.correction))

    def test_config(self, test_id, seed):
        """ :returns: the member config for test_id with this audit's shared settings """
        shared = dict(B=self.B, seed=seed, min_samples=self.min_stratum)
        if test_id == TestId.chsic:
            return ChsicConfig(**shared)
        if test_id == TestId.rcot:
            return RcotConfig(**shared)
        return CmiknnConfig(**shared)
