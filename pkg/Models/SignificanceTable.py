from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Tuple

from Models.TestOutcome import TestOutcome


@dataclass(frozen=True)
class ConsensusCell:
    """ one (property, class) entry of a significance grid """

    property: str
    class_name: str
    outcomes: Tuple[TestOutcome, ...]
    significant: bool
    n_used: int
    skip_reason: Optional[str] = None

    @property
    def skipped(self):
        return self.skip_reason is not None

    @classmethod
    def skip(cls, property, class_name, reason, n_used=0):
        return cls(property, class_name, (), False, n_used, reason)

    def with_outcomes(self, outcomes, significant):
        return replace(self, outcomes=tuple(outcomes), significant=bool(significant))

    def outcome(self, test_id):
        for outcome in self.outcomes:
            if outcome.test_id == test_id:
                return outcome
        return None

    def symbol(self):
        if self.skipped:
            return '-'
        return '✓' if self.significant else '✗'

    def to_dict(self):
        return {
            'property': self.property,
            'class_name': self.class_name,
            'significant': self.significant,
            'n_used': self.n_used,
            'skip_reason': self.skip_reason,
            'outcomes': [o.to_dict() for o in self.outcomes],
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            property=data['property'],
            class_name=data['class_name'],
            outcomes=tuple(TestOutcome.from_dict(o) for o in data.get('outcomes', [])),
            significant=bool(data['significant']),
            n_used=int(data['n_used']),
            skip_reason=data.get('skip_reason'),
        )


def fraction(k, n):
    return f'{k}/{n}'


def percentage(k, n):
    """ :returns: 100 k / n rounded to two decimals, 0.0 for an empty denominator """
    return round(100.0 * k / n, 2) if n else 0.0


@dataclass(frozen=True)
class SignificanceTable:
    """
    property x class grid of consensus decisions for one model run;
    skipped cells are kept in the grid but left out of every count
    """

    run_label: str
    properties: Tuple[str, ...]
    classes: Tuple[str, ...]
    cells: Dict[Tuple[str, str], ConsensusCell]
    alpha: float = 0.01
    config_echo: str = ''

    def __post_init__(self):
        object.__setattr__(self, 'properties', tuple(self.properties))
        object.__setattr__(self, 'classes', tuple(self.classes))
        missing = [(p, c) for p in self.properties for c in self.classes if (p, c) not in self.cells]
        if missing:
            raise ValueError(f'significance table is missing cells {missing}')

    def cell(self, property, class_name):
        return self.cells[(property, class_name)]

    def iter_cells(self):
        """ cells in property-major, class-minor order """
        for p in self.properties:
            for c in self.classes:
                yield self.cells[(p, c)]

    def _count(self, cells):
        tested = [cell for cell in cells if not cell.skipped]
        return sum(cell.significant for cell in tested), len(tested)

    @property
    def per_property_counts(self):
        return {p: self._count(self.cells[(p, c)] for c in self.classes) for p in self.properties}

    @property
    def per_class_counts(self):
        return {c: self._count(self.cells[(p, c)] for p in self.properties) for c in self.classes}

    @property
    def total(self):
        return self._count(self.iter_cells())

    @property
    def skipped_cells(self):
        return [cell for cell in self.iter_cells() if cell.skipped]

    def to_dict(self):
        return {
            'run_label': self.run_label,
            'alpha': self.alpha,
            'config_echo': self.config_echo,
            'properties': list(self.properties),
            'classes': list(self.classes),
            'cells': [cell.to_dict() for cell in self.iter_cells()],
        }

    @classmethod
    def from_dict(cls, data):
        cells = [ConsensusCell.from_dict(c) for c in data['cells']]
        return cls(
            run_label=data['run_label'],
            properties=tuple(data['properties']),
            classes=tuple(data['classes']),
            cells={(cell.property, cell.class_name): cell for cell in cells},
            alpha=float(data.get('alpha', 0.01)),
            config_echo=data.get('config_echo', ''),
        )

    def __eq__(self, other):
        if not isinstance(other, SignificanceTable):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __repr__(self):
        k, n = self.total
        return f'<SignificanceTable({self.run_label!r}, {fraction(k, n)})>'


@dataclass(frozen=True)
class UsageSummary:
    run_label: str
    per_property: Dict[str, str]
    per_class: Dict[str, str]
    significant: int
    tested: int
    skipped: int = 0
    per_property_counts: Dict[str, Tuple[int, int]] = field(default_factory=dict)

    @property
    def total(self):
        return fraction(self.significant, self.tested)

    @property
    def percentage(self):
        return percentage(self.significant, self.tested)

    def to_dict(self):
        return {
            'run_label': self.run_label,
            'per_property': dict(self.per_property),
            'per_class': dict(self.per_class),
            'total': self.total,
            'percentage': self.percentage,
            'skipped': self.skipped,
        }

    def __str__(self):
        return f'{self.run_label}: {self.total} ({self.percentage:.2f}%)'
