import io
import json

import pandas as pd
import pytest

from Controllers.Committee import significance_table_from_grid
from Controllers.TableWriter import TableFormat, export_table, parse_table, skipped_log, write_table
from Models.Errors import DomainError, ParseError
from Models.SignificanceTable import ConsensusCell, SignificanceTable
from Models.TestOutcome import TestId, TestOutcome


@pytest.fixture
def table():
    outcomes = tuple(TestOutcome(t, 0.5 + i, 0.001 * (i + 1), 40, 7, '{"B": 99}') for i, t in enumerate(TestId))
    cells = {
        ('B_A', 'neg'): ConsensusCell('B_A', 'neg', outcomes, True, 40),
        ('B_A', 'pos'): ConsensusCell('B_A', 'pos', outcomes[:1], False, 38),
        ('R_E', 'neg'): ConsensusCell('R_E', 'neg', outcomes, True, 40),
        ('R_E', 'pos'): ConsensusCell.skip('R_E', 'pos', 'class \'pos\' has 12 samples', 12),
    }
    return SignificanceTable('demo', ('B_A', 'R_E'), ('neg', 'pos'), cells, 0.01, '{"seed": 0}')


def test_json_export_parses_back(table):
    assert parse_table(export_table(table, TableFormat.json)) == table


def test_published_grid_survives_json(published_grids):
    run = published_grids['runs']['RMN']
    grid = significance_table_from_grid('RMN', published_grids['properties'], published_grids['classes'], run['grid'])

    assert parse_table(export_table(grid, 'json')).total == (73, 84)


def test_text_grid_layout(table):
    lines = export_table(table, TableFormat.text_grid).splitlines()

    assert len(lines) == len(table.classes) + 2
    assert lines[0].split() == ['class', 'B_A', 'R_E', '∑']
    assert lines[1].split() == ['neg', '✓', '✓', '2/2']
    assert lines[2].split() == ['pos', '✗', '-', '0/1']
    assert lines[3].split() == ['∅', '1/2', '1/1', '2/3']


def test_csv_has_one_row_per_cell(table):
    frame = pd.read_csv(io.StringIO(export_table(table, TableFormat.csv)))

    assert len(frame) == len(table.properties) * len(table.classes)
    assert list(frame['property']) == ['B_A', 'B_A', 'R_E', 'R_E']
    assert frame['rcot_p'].isna().tolist() == [False, True, False, True]
    assert frame.loc[0, 'cmiknn_p'] == pytest.approx(0.003)


def test_parse_table_errors():
    with pytest.raises(ParseError):
        parse_table('{not json')
    with pytest.raises(DomainError):
        parse_table(json.dumps({'run_label': 'x'}))


def test_write_table_names_files_by_format(table, tmp_path):
    paths = [write_table(table, tmp_path, format) for format in TableFormat]

    assert [p.name for p in paths] == ['significance.csv', 'significance.json', 'significance.txt']
    assert parse_table(paths[1].read_text(encoding='utf-8')) == table


def test_skipped_log_lists_reasons(table):
    entries = json.loads(skipped_log(table))

    assert entries == [{'property': 'R_E', 'class_name': 'pos', 'n_used': 12, 'reason': "class 'pos' has 12 samples"}]
