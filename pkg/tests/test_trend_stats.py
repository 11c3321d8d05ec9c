import numpy as np
import pytest
from scipy.integrate import trapezoid

from Controllers.TrendStats import (
    accuracy_text, binary_group_summary, mean_accuracy, sliding_gaussian_trend, subpopulation_accuracy,
    write_accuracy,
)
from Models.Dataset import Dataset
from Models.Errors import DomainError, InsufficientDataError, SchemaError


def labelled(correct_a, wrong_a, correct_b, offset=0.0, electrodes=None):
    """ two-class dataset with a given number of right and wrong argmax predictions """

    labels = [0] * (correct_a + wrong_a) + [1] * correct_b
    logits = [[1.0, 0.0]] * correct_a + [[0.0, 1.0]] * wrong_a + [[0.0, 1.0]] * correct_b
    n = len(labels)
    properties = {} if electrodes is None else {'R_E': electrodes}
    return Dataset(('a', 'b'), labels, np.asarray(logits) + offset, properties, tuple(map(str, range(n))))


def test_class_accuracy_is_rounded_to_two_decimals():
    table = subpopulation_accuracy(labelled(23, 1, 10))

    assert table.value((), 'a') == 95.83
    assert table.value((), 'b') == 100.0


def test_logit_offset_does_not_change_accuracy():
    assert subpopulation_accuracy(labelled(23, 1, 10, offset=-40.0)).value((), 'a') == 95.83


def test_published_mean_accuracies(published_grids):
    published = published_grids['accuracy_without_electrodes']

    for label in ('RMN', 'HSE-7'):
        assert mean_accuracy(published[label]['values']) == published[label]['mean']


def test_mean_ignores_empty_cells():
    assert mean_accuracy([50.0, None, 100.0]) == 75.0
    assert mean_accuracy([None]) is None


def test_split_by_property():
    electrodes = np.array([1.0, 1.0, 0.0, 0.0, 1.0, 0.0])
    table = subpopulation_accuracy(labelled(2, 2, 2, electrodes=electrodes), group_by=['R_E'])

    assert table.groups == ((0.0,), (1.0,))
    assert table.value((1.0,), 'a') == 100.0
    assert table.value((0.0,), 'a') == 0.0
    assert table.counts[((1.0,), 'b')] == 1
    assert [row['R_E'] for row in table.rows()] == [0.0, 1.0]


def test_restricted_classes_and_empty_cells():
    table = subpopulation_accuracy(labelled(3, 1, 0), classes=['a', 'b'])

    assert table.value((), 'b') is None
    assert table.mean() == 75.0
    assert '-' in accuracy_text(table)


def test_unknown_grouping_property():
    with pytest.raises(SchemaError):
        subpopulation_accuracy(labelled(2, 0, 2), group_by=['R_X'])


def test_accuracy_csv(tmp_path):
    path = write_accuracy(subpopulation_accuracy(labelled(23, 1, 10)), tmp_path / 'accuracy.csv')
    header, row = path.read_text().splitlines()
    assert header == 'a,b,mean'
    assert row.startswith('95.83,100.00,')


def test_hand_computed_windows():
    curve = sliding_gaussian_trend([6, 5, 4, 3, 2, 1], [60, 50, 40, 30, 20, 10], window_size=3, stride=3)

    assert curve.window_centers.tolist() == [2.0, 5.0]
    assert curve.means.tolist() == [20.0, 50.0]
    assert curve.stds == pytest.approx([np.sqrt(200 / 3)] * 2)


def test_last_window_is_anchored_at_the_end():
    curve = sliding_gaussian_trend(np.arange(10.0), np.arange(10.0), window_size=4, stride=3)

    assert curve.starts.tolist() == [0, 3, 6]
    curve = sliding_gaussian_trend(np.arange(11.0), np.arange(11.0), window_size=4, stride=3)
    assert curve.starts.tolist() == [0, 3, 6, 7]


def test_constant_logit_gives_a_flat_curve():
    curve = sliding_gaussian_trend(np.random.default_rng(0).uniform(size=200), np.full(200, 1.5))

    assert np.all(curve.means == 1.5)
    assert np.all(curve.stds == 0.0)


def test_identity_logit_is_increasing():
    values = np.random.default_rng(1).normal(size=300)
    curve = sliding_gaussian_trend(values, values)

    assert curve.window_size == 30
    assert curve.stride == 7
    assert np.all(np.diff(curve.means) > 0)


def test_windows_cover_every_sample():
    values = np.random.default_rng(2).normal(size=157)
    order = np.argsort(values, kind='stable')
    curve = sliding_gaussian_trend(values, -values, window_frac=0.2, stride_frac=0.1)

    covered = np.unique(np.concatenate(curve.window_indices(order)))
    assert covered.tolist() == list(range(157))


def test_too_few_samples_for_the_window():
    with pytest.raises(InsufficientDataError):
        sliding_gaussian_trend(np.arange(10.0), np.arange(10.0))
    with pytest.raises(DomainError):
        sliding_gaussian_trend(np.arange(30.0), np.arange(29.0))


def test_group_quartiles():
    low, high = binary_group_summary([0, 0, 0, 0, 1, 1], [1, 2, 3, 4, 5, 6])

    assert (low.q1, low.median, low.q3) == (1.75, 2.5, 3.25)
    assert (high.count, high.median) == (2, 5.5)


def test_group_densities_integrate_to_one():
    rng = np.random.default_rng(3)
    groups = binary_group_summary(rng.integers(0, 2, 200), rng.normal(size=200))

    for group in groups:
        assert len(group.positions) == 128
        assert trapezoid(group.densities, group.positions) == pytest.approx(1.0)
        assert group.bandwidth > 0


def test_flat_group_density():
    groups = binary_group_summary([0, 0, 1, 1], [2.0, 2.0, 2.0, 2.0])

    assert groups[0].bandwidth == 0.0
    assert trapezoid(groups[0].densities, groups[0].positions) == pytest.approx(1.0)


def test_empty_group_and_bad_values():
    with pytest.raises(InsufficientDataError):
        binary_group_summary([1, 1, 1], [0.1, 0.2, 0.3])
    with pytest.raises(DomainError):
        binary_group_summary([0, 2], [0.1, 0.2])
