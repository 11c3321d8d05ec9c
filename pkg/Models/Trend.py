from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np


@dataclass(frozen=True)
class AccuracyTable:
    """
    per-class accuracy percentages for every combination of grouping
    property values; a (group, class) pair without samples maps to None
    """

    group_by: Tuple[str, ...]
    classes: Tuple[str, ...]
    groups: Tuple[Tuple[float, ...], ...]
    accuracy: Dict[Tuple[Tuple[float, ...], str], Optional[float]]
    counts: Dict[Tuple[Tuple[float, ...], str], int]
    means: Dict[Tuple[float, ...], Optional[float]]

    def value(self, group, class_name):
        return self.accuracy[(tuple(group), class_name)]

    def mean(self, group=()):
        return self.means[tuple(group)]

    def rows(self):
        """ :returns: one dict per group with the grouping values, class accuracies and mean """

        for group in self.groups:
            row = dict(zip(self.group_by, group))
            for name in self.classes:
                row[name] = self.accuracy[(group, name)]
            row['mean'] = self.means[group]
            yield row

    def __repr__(self):
        return f'<AccuracyTable(group_by={list(self.group_by)}, groups={len(self.groups)})>'


@dataclass(frozen=True, eq=False)
class TrendCurve:
    window_centers: np.ndarray
    means: np.ndarray
    stds: np.ndarray
    window_size: int
    stride: int
    # first sorted position of every window
    starts: np.ndarray

    def __len__(self):
        return len(self.window_centers)

    def window_indices(self, order):
        """ :param order: the sort order used to build the curve
            :returns: original sample indices covered by each window """
        return [order[s:s + self.window_size] for s in self.starts]


@dataclass(frozen=True, eq=False)
class GroupSummary:
    label: int
    count: int
    q1: float
    median: float
    q3: float
    positions: np.ndarray
    densities: np.ndarray
    bandwidth: float

    def to_dict(self):
        return {
            'label': self.label,
            'count': self.count,
            'quartiles': [self.q1, self.median, self.q3],
            'bandwidth': self.bandwidth,
            'positions': self.positions.tolist(),
            'densities': self.densities.tolist(),
        }
