import json
import logging
from enum import Enum
from pathlib import Path

import pandas as pd

from Models.Errors import DomainError, ParseError
from Models.SignificanceTable import SignificanceTable, fraction
from Models.TestOutcome import TestId
from Utils import atomic_write

log = logging.getLogger(__name__)


class TableFormat(Enum):
    csv = 'csv'
    json = 'json'
    text_grid = 'text_grid'


EXTENSIONS = {
    TableFormat.csv: 'csv',
    TableFormat.json: 'json',
    TableFormat.text_grid: 'txt',
}


def table_frame(table):
    """ :returns: one row per cell with every member's statistic and p-values """

    rows = []
    for cell in table.iter_cells():
        row = {
            'run_label': table.run_label,
            'property': cell.property,
            'class_name': cell.class_name,
            'significant': int(cell.significant),
            'skipped': int(cell.skipped),
            'n_used': cell.n_used,
            'skip_reason': cell.skip_reason or '',
        }
        for test_id in TestId:
            outcome = cell.outcome(test_id)
            row[f'{test_id.value}_statistic'] = None if outcome is None else outcome.statistic
            row[f'{test_id.value}_p'] = None if outcome is None else outcome.p_value
            row[f'{test_id.value}_p_adjusted'] = None if outcome is None else outcome.adjusted_p_value
        rows.append(row)
    return pd.DataFrame(rows)


def _text_grid(table):
    per_property = table.per_property_counts
    per_class = table.per_class_counts

    lines = [['class'] + list(table.properties) + ['∑']]
    for name in table.classes:
        marks = [table.cell(p, name).symbol() for p in table.properties]
        lines.append([name] + marks + [fraction(*per_class[name])])
    lines.append(['∅'] + [fraction(*per_property[p]) for p in table.properties] + [fraction(*table.total)])

    widths = [max(len(line[i]) for line in lines) for i in range(len(lines[0]))]
    return ''.join('  '.join(v.ljust(w) for v, w in zip(line, widths)).rstrip() + '\n' for line in lines)


def export_table(table, format=TableFormat.json):
    """ :returns: the table rendered as csv, json or a check/cross text grid """

    format = TableFormat(format)
    if format == TableFormat.csv:
        return table_frame(table).to_csv(index=False, float_format='%.17g', lineterminator='\n')
    if format == TableFormat.json:
        return json.dumps(table.to_dict(), indent=2, ensure_ascii=False) + '\n'
    return _text_grid(table)


def parse_table(text):
    """ inverse of the json export """

    try:
        return SignificanceTable.from_dict(json.loads(text))
    except json.JSONDecodeError as e:
        raise ParseError(f'significance table is not valid JSON: {e}')
    except (KeyError, TypeError, ValueError) as e:
        raise DomainError(f'malformed significance table: {e}')


def write_table(table, out_dir, format=TableFormat.json):
    format = TableFormat(format)
    path = Path(out_dir) / f'significance.{EXTENSIONS[format]}'
    atomic_write(path, export_table(table, format))
    log.info('wrote %s', path)
    return path


def skipped_log(table):
    entries = [{'property': c.property, 'class_name': c.class_name, 'n_used': c.n_used, 'reason': c.skip_reason}
               for c in table.skipped_cells]
    return json.dumps(entries, indent=2, ensure_ascii=False) + '\n'
