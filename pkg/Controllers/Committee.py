"""
per-(property, class logit) audit: build the test inputs for the configured
conditioning mode, run the committee members and combine their decisions
"""

import logging

import numpy as np
from scipy.stats import false_discovery_control

from Controllers.Cmiknn import cmiknn_test
from Controllers.KernelTests import chsic_test
from Controllers.Rcot import rcot_test
from Controllers.WorkerPool import WorkerPool
from Models.Configs import AuditConfig, Consensus, Correction, Mode, config_echo
from Models.Dataset import stratify, one_hot_labels
from Models.Errors import AuditError, DomainError, SchemaError
from Models.SignificanceTable import ConsensusCell, SignificanceTable, UsageSummary, fraction
from Models.TestOutcome import TestId
from Utils import derive_seed, require_samples

log = logging.getLogger(__name__)

TESTS = {
    TestId.chsic: chsic_test,
    TestId.rcot: rcot_test,
    TestId.cmiknn: cmiknn_test,
}


def consensus(outcomes, rule=Consensus.majority, alpha=0.01):
    """ :returns: whether the committee rejects independence under rule at alpha """

    if not outcomes:
        return False

    rejections = sum(outcome.rejects(alpha) for outcome in outcomes)
    rule = Consensus(rule)
    if rule == Consensus.majority:
        return rejections > len(outcomes) / 2
    if rule == Consensus.unanimous:
        return rejections == len(outcomes)
    return rejections >= 1


def cell_seed(seed, abbreviation, class_name):
    return derive_seed(seed, abbreviation, class_name)


def cell_inputs(dataset, abbreviation, class_index, config):
    """ :returns: (x, y, z) for one cell; z is None in stratified mode """

    if config.mode == Mode.stratify:
        subset = stratify(dataset, class_index, config.min_stratum)
        z = None
    else:
        subset = dataset
        require_samples(dataset.n, config.min_stratum, dataset.class_names[class_index])
        z = one_hot_labels(dataset)

    return subset.properties[abbreviation], subset.logit(class_index), z


def run_cell(dataset, property, class_index, config=AuditConfig()):
    class_name = dataset.class_names[class_index]
    abbreviation = property.abbreviation

    try:
        x, y, z = cell_inputs(dataset, abbreviation, class_index, config)
    except AuditError as e:
        if isinstance(e, SchemaError):
            raise
        log.info('skipping %s/%s: %s', abbreviation, class_name, e)
        return ConsensusCell.skip(abbreviation, class_name, str(e), getattr(e, 'n', 0) or 0)

    n = len(x)
    if np.ptp(x) == 0.0:
        return ConsensusCell.skip(abbreviation, class_name, f'{abbreviation} is constant in the stratum', n)
    if np.ptp(y) == 0.0:
        return ConsensusCell.skip(abbreviation, class_name, f'logit {class_name!r} is constant in the stratum', n)

    seed = cell_seed(config.seed, abbreviation, class_name)
    outcomes = []
    for test_id in config.tests:
        member = config.test_config(test_id, derive_seed(seed, test_id.value))
        try:
            outcomes.append(TESTS[test_id](x, y, z, member))
        except AuditError as e:
            if isinstance(e, SchemaError):
                raise
            log.warning('%s failed on %s/%s: %s', test_id.value, abbreviation, class_name, e)
            return ConsensusCell.skip(abbreviation, class_name, f'{test_id.value}: {e}', n)

    significant = consensus(outcomes, config.consensus, config.alpha)
    log.debug('%s/%s n=%d p=%s -> %s', abbreviation, class_name, n,
              [round(o.p_value, 4) for o in outcomes], significant)
    return ConsensusCell(abbreviation, class_name, tuple(outcomes), significant, n)


def apply_benjamini_hochberg(cells, config):
    """ adjust each test's p-values across all tested cells and re-decide consensus """

    cells = list(cells)
    tested = [i for i, cell in enumerate(cells) if not cell.skipped]
    if not tested:
        return cells

    adjusted = {i: list(cells[i].outcomes) for i in tested}
    for test_id in config.tests:
        slots = [(i, j) for i in tested for j, o in enumerate(cells[i].outcomes) if o.test_id == test_id]
        if not slots:
            continue
        p_values = [cells[i].outcomes[j].p_value for i, j in slots]
        for (i, j), p in zip(slots, false_discovery_control(p_values, method='bh')):
            adjusted[i][j] = adjusted[i][j].with_adjusted(min(1.0, float(p)))

    for i, outcomes in adjusted.items():
        cells[i] = cells[i].with_outcomes(outcomes, consensus(outcomes, config.consensus, config.alpha))
    return cells


def run_audit(dataset, manifest, config=AuditConfig(), run_label='run', jobs=1):
    """
    one consensus cell per (property, class); cells are evaluated independently
    and reassembled in manifest order
    :returns: SignificanceTable
    """

    for spec in manifest.properties:
        if spec.abbreviation not in dataset.properties:
            raise SchemaError(f'property {spec.abbreviation!r} is not in the dataset', column=spec.column)

    work = [(spec, c) for spec in manifest.properties for c in range(dataset.num_classes)]
    cells = WorkerPool(jobs, 'cells').map(lambda item: run_cell(dataset, item[0], item[1], config), work)

    if config.correction == Correction.benjamini_hochberg:
        cells = apply_benjamini_hochberg(cells, config)

    table = SignificanceTable(
        run_label=run_label,
        properties=tuple(spec.abbreviation for spec in manifest.properties),
        classes=tuple(dataset.class_names),
        cells={(cell.property, cell.class_name): cell for cell in cells},
        alpha=config.alpha,
        config_echo=config_echo(config),
    )

    log.info('%r, %d cells skipped', table, len(table.skipped_cells))
    return table


def aggregate_usage(table):
    """ :returns: UsageSummary with k/N fractions per property and class and the overall usage """

    counts = table.per_property_counts
    k, n = table.total
    return UsageSummary(
        run_label=table.run_label,
        per_property={p: fraction(*counts[p]) for p in table.properties},
        per_class={c: fraction(*kn) for c, kn in table.per_class_counts.items()},
        significant=k,
        tested=n,
        skipped=len(table.skipped_cells),
        per_property_counts=counts,
    )


def aggregate_properties(tables, abbreviations):
    """ :returns: (significant, tested) summed over the given properties of several runs """

    k = n = 0
    for table in tables:
        counts = table.per_property_counts
        for abbreviation in abbreviations:
            if abbreviation not in counts:
                raise DomainError(f'{table.run_label} has no property {abbreviation!r}')
            k += counts[abbreviation][0]
            n += counts[abbreviation][1]
    return k, n


SYMBOLS = {'✓': True, '1': True, '✗': False, '0': False, '-': None}


def _decision(mark):
    if isinstance(mark, bool):
        return mark
    if mark is None:
        return None
    if mark not in SYMBOLS:
        raise DomainError(f'unknown grid mark {mark!r}; expected one of {sorted(SYMBOLS)}')
    return SYMBOLS[mark]


def significance_table_from_grid(run_label, properties, classes, grid, alpha=0.01):
    """
    build a table from recorded decisions
    :param grid: one row per class, one mark per property; a row may be a string
                 such as '111110111001' or '✓✓✗', '-' marks a skipped cell
    """

    if len(grid) != len(classes):
        raise DomainError(f'grid has {len(grid)} rows for {len(classes)} classes')

    cells = {}
    for class_name, row in zip(classes, grid):
        row = list(row)
        if len(row) != len(properties):
            raise DomainError(f'row {class_name!r} has {len(row)} marks for {len(properties)} properties')
        for abbreviation, mark in zip(properties, row):
            decision = _decision(mark)
            if decision is None:
                cells[(abbreviation, class_name)] = ConsensusCell.skip(abbreviation, class_name, 'not tested')
            else:
                cells[(abbreviation, class_name)] = ConsensusCell(abbreviation, class_name, (), decision, 0)

    return SignificanceTable(run_label, tuple(properties), tuple(classes), cells, alpha)
