from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional


class TestId(Enum):
    __test__ = False

    chsic = 'chsic'
    rcot = 'rcot'
    cmiknn = 'cmiknn'


@dataclass(frozen=True)
class TestOutcome:
    """ the result of one conditional independence test on one (x, y | z) triple """

    __test__ = False

    test_id: TestId
    statistic: float
    p_value: float
    n_used: int
    seed: int
    config_echo: str
    adjusted_p_value: Optional[float] = None

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f'p-value {self.p_value} outside [0, 1]')

    @property
    def decision_p_value(self):
        """ :returns: adjusted p-value when a correction ran, raw otherwise """
        return self.p_value if self.adjusted_p_value is None else self.adjusted_p_value

    def rejects(self, alpha):
        return self.decision_p_value < alpha

    def with_adjusted(self, adjusted_p_value):
        return replace(self, adjusted_p_value=float(adjusted_p_value))

    def to_dict(self):
        return {
            'test_id': self.test_id.value,
            'statistic': self.statistic,
            'p_value': self.p_value,
            'adjusted_p_value': self.adjusted_p_value,
            'n_used': self.n_used,
            'seed': self.seed,
            'config_echo': self.config_echo,
        }

    @classmethod
    def from_dict(cls, data):
        adjusted = data.get('adjusted_p_value')
        return cls(
            test_id=TestId(data['test_id']),
            statistic=float(data['statistic']),
            p_value=float(data['p_value']),
            n_used=int(data['n_used']),
            seed=int(data['seed']),
            config_echo=str(data['config_echo']),
            adjusted_p_value=None if adjusted is None else float(adjusted),
        )

    def __str__(self):
        return f'<TestOutcome({self.test_id.value}, stat={self.statistic:.6g}, p={self.p_value:.4g})>'
