import json
import logging

import numpy as np
import pandas as pd

from Models.Dataset import Dataset, Manifest
from Models.Errors import ParseError, SchemaError, ValidationError
from Utils import atomic_write

log = logging.getLogger(__name__)

SAMPLE_ID = 'sample_id'


def load_manifest(path):
    """ :returns: Manifest parsed and validated from a JSON file """

    try:
        with open(path, 'r', encoding='utf-8') as file:
            data = json.load(file)
    except json.JSONDecodeError as e:
        raise ParseError(f'manifest {path} is not valid JSON: {e}')

    if not isinstance(data, dict):
        raise ValidationError(f'manifest {path} must hold a JSON object')
    return Manifest.from_dict(data)


def write_manifest(manifest, path):
    return atomic_write(path, json.dumps(manifest.to_dict(), indent=2) + '\n')


def _numeric(table, column):
    raw = table[column].str.strip()

    missing = np.flatnonzero((raw == '').to_numpy())
    if len(missing):
        raise ValidationError(
            f'missing values in column {column!r} at rows {missing.tolist()}', rows=missing.tolist())

    values = pd.to_numeric(raw, errors='coerce')
    bad = np.flatnonzero(values.isna().to_numpy())
    if len(bad):
        row = int(bad[0])
        raise ParseError(
            f'non-numeric value {raw.iloc[row]!r} in column {column!r} at row {row}',
            row=row, column=column)

    return values.to_numpy(dtype=float)


def load_dataset(table_path, manifest_path):
    """
    read a sample table and validate it against a manifest
    :param manifest_path: path to the manifest JSON, or an already loaded Manifest
    :returns: Dataset with rows in file order
    """

    manifest = manifest_path if isinstance(manifest_path, Manifest) else load_manifest(manifest_path)
    table = pd.read_csv(table_path, dtype=str, keep_default_na=False)

    required = [SAMPLE_ID, manifest.label_column]
    required += [manifest.logit_column(c) for c in manifest.classes]
    required += [spec.column for spec in manifest.properties]
    for column in required:
        if column not in table.columns:
            raise SchemaError(f'column {column!r} is missing from {table_path}', column=column)

    labels = table[manifest.label_column].str.strip()
    index = {name: i for i, name in enumerate(manifest.classes)}
    unknown = np.flatnonzero(~labels.isin(list(index)).to_numpy())
    if len(unknown):
        raise ValidationError(
            f'labels not declared in the manifest at rows {unknown.tolist()}', rows=unknown.tolist())

    logits = np.column_stack([_numeric(table, manifest.logit_column(c)) for c in manifest.classes])
    properties = {spec.abbreviation: _numeric(table, spec.column) for spec in manifest.properties}

    dataset = Dataset(
        class_names=manifest.classes,
        true_label=labels.map(index).to_numpy(dtype=np.int64),
        logits=logits.reshape(len(table), len(manifest.classes)),
        properties=properties,
        sample_id=tuple(table[SAMPLE_ID]),
        property_specs=manifest.properties,
    )

    log.debug('loaded %r from %s', dataset, table_path)
    return dataset


def dataset_frame(dataset, manifest):
    """ :returns: the dataset in the sample-table schema as a DataFrame """

    columns = {
        SAMPLE_ID: list(dataset.sample_id),
        manifest.label_column: [dataset.class_names[i] for i in dataset.true_label],
    }
    for i, name in enumerate(dataset.class_names):
        columns[manifest.logit_column(name)] = dataset.logits[:, i]
    for spec in manifest.properties:
        columns[spec.column] = dataset.properties[spec.abbreviation]

    return pd.DataFrame(columns)


def export_dataset(dataset, manifest, table_path):
    """ write the dataset so that load_dataset reads back identical values """

    text = dataset_frame(dataset, manifest).to_csv(
        index=False, float_format='%.17g', lineterminator='\n')
    return atomic_write(table_path, text)
