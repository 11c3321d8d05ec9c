import json
import logging

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid
from scipy.stats import gaussian_kde

from Models.Errors import DomainError, InsufficientDataError, SchemaError
from Models.Trend import AccuracyTable, GroupSummary, TrendCurve
from Utils import atomic_write

log = logging.getLogger(__name__)

MIN_WINDOW = 20
GRID_POINTS = 128


def mean_accuracy(values):
    """ :returns: unweighted mean of the listed accuracies, rounded to two decimals """

    values = [v for v in values if v is not None]
    if not values:
        return None
    return round(float(np.mean(values)), 2)


def subpopulation_accuracy(dataset, group_by=(), classes=None):
    """
    accuracy of argmax predictions per true class, split by every combination
    of the grouping properties' manifestations
    :param classes: restrict the table (and the mean) to these class names
    """

    group_by = tuple(group_by)
    for abbreviation in group_by:
        if abbreviation not in dataset.properties:
            raise SchemaError(f'unknown property {abbreviation!r}', column=abbreviation)

    classes = tuple(dataset.class_names if classes is None else classes)
    indices = [dataset.class_index(name) for name in classes]

    correct = dataset.predicted_label() == dataset.true_label
    keys = np.column_stack([dataset.properties[a] for a in group_by]) if group_by else np.zeros((dataset.n, 0))
    groups = sorted({tuple(float(v) for v in row) for row in keys}) if dataset.n else [()]

    accuracy, counts, means = {}, {}, {}
    for group in groups:
        in_group = np.all(keys == np.asarray(group, dtype=float), axis=1) if group_by else np.ones(dataset.n, bool)
        for name, index in zip(classes, indices):
            mask = in_group & (dataset.true_label == index)
            total = int(mask.sum())
            counts[(group, name)] = total
            accuracy[(group, name)] = round(100.0 * correct[mask].sum() / total, 2) if total else None
        means[group] = mean_accuracy(accuracy[(group, name)] for name in classes)

    return AccuracyTable(group_by, classes, tuple(groups), accuracy, counts, means)


def accuracy_frame(table):
    frame = pd.DataFrame(list(table.rows()), columns=list(table.group_by) + list(table.classes) + ['mean'])
    # empty cells become NaN
    return frame.astype(float)


def sliding_gaussian_trend(prop_values, logit_values, window_frac=0.1, stride_frac=0.025,
                           window_size=None, stride=None):
    """
    sort by property value and summarise the logit by a Gaussian per window;
    the last window is anchored at the final sample
    :param window_size: explicit window, overriding window_frac
    :param stride: explicit stride, overriding stride_frac
    """

    prop_values = np.asarray(prop_values, dtype=float).reshape(-1)
    logit_values = np.asarray(logit_values, dtype=float).reshape(-1)
    n = len(prop_values)
    if len(logit_values) != n:
        raise DomainError(f'{n} property values but {len(logit_values)} logits')

    window = int(window_size) if window_size else max(MIN_WINDOW, int(window_frac * n))
    if window < 1:
        raise DomainError('window size must be positive')
    if n < window:
        raise InsufficientDataError(f'{n} samples for a window of {window}', n=n, required=window)

    stride = int(stride) if stride else max(1, int(stride_frac * n))
    stride = min(max(1, stride), window)

    order = np.argsort(prop_values, kind='stable')
    props, logits = prop_values[order], logit_values[order]

    starts = list(range(0, n - window + 1, stride))
    if starts[-1] != n - window:
        starts.append(n - window)

    windows = [slice(s, s + window) for s in starts]
    return TrendCurve(
        window_centers=np.array([props[w].mean() for w in windows]),
        means=np.array([logits[w].mean() for w in windows]),
        stds=np.array([logits[w].std() for w in windows]),
        window_size=window,
        stride=stride,
        starts=np.array(starts),
    )


def trend_frame(curve):
    return pd.DataFrame({'center': curve.window_centers, 'mean': curve.means, 'std': curve.stds})


def _density(values, grid):
    """ silverman-bandwidth Gaussian KDE evaluated on grid and renormalised to unit area """

    if len(values) > 1 and np.ptp(values) > 0:
        kde = gaussian_kde(values, bw_method='silverman')
        densities = kde(grid)
        bandwidth = float(np.sqrt(kde.covariance[0, 0]))
    else:
        # no spread: all mass at the nearest grid point
        densities = np.zeros_like(grid)
        densities[np.argmin(np.abs(grid - values[0]))] = 1.0
        bandwidth = 0.0

    area = trapezoid(densities, grid)
    return densities / area if area > 0 else densities, bandwidth


def binary_group_summary(prop_values, logit_values, grid_points=GRID_POINTS):
    """ :returns: (summary for manifestation 0, summary for manifestation 1) """

    prop_values = np.asarray(prop_values, dtype=float).reshape(-1)
    logit_values = np.asarray(logit_values, dtype=float).reshape(-1)
    if len(prop_values) != len(logit_values):
        raise DomainError(f'{len(prop_values)} property values but {len(logit_values)} logits')
    if np.any((prop_values != 0) & (prop_values != 1)):
        raise DomainError('binary property values must be 0 or 1')

    if len(logit_values) == 0:
        raise InsufficientDataError('no samples to summarise', n=0, required=2)

    low, high = float(logit_values.min()), float(logit_values.max())
    if low == high:
        low, high = low - 0.5, high + 0.5
    grid = np.linspace(low, high, grid_points)

    summaries = []
    for label in (0, 1):
        values = logit_values[prop_values == label]
        if len(values) == 0:
            raise InsufficientDataError(f'no samples with manifestation {label}', label=str(label), n=0, required=1)

        q1, median, q3 = np.percentile(values, [25, 50, 75])
        densities, bandwidth = _density(values, grid)
        summaries.append(GroupSummary(label, len(values), float(q1), float(median), float(q3),
                                      grid, densities, bandwidth))
    return tuple(summaries)


def write_trend(curve, path):
    return atomic_write(path, trend_frame(curve).to_csv(index=False, float_format='%.17g', lineterminator='\n'))


def write_groups(summaries, path):
    return atomic_write(path, json.dumps([s.to_dict() for s in summaries], indent=2) + '\n')


def write_accuracy(table, path):
    return atomic_write(path, accuracy_frame(table).to_csv(index=False, float_format='%.2f', lineterminator='\n'))


def accuracy_text(table):
    """ :returns: the table as aligned text, '-' for empty cells """

    frame = accuracy_frame(table)
    return frame.to_string(index=False, na_rep='-', float_format=lambda v: f'{v:.2f}') + '\n'
