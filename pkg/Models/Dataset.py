from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np

from Models.Errors import DomainError, InsufficientDataError, ValidationError

DEFAULT_MIN_STRATUM = 25


class PropertyGroup(Enum):
    bodily = 'bodily'
    recording = 'recording'
    symmetry = 'symmetry'
    custom = 'custom'


class PropertyKind(Enum):
    scalar = 'scalar'
    binary = 'binary'


@dataclass(frozen=True)
class PropertySpec:
    name: str
    abbreviation: str
    group: PropertyGroup
    kind: PropertyKind
    column: str

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(
                name=str(data['name']),
                abbreviation=str(data['abbreviation']),
                group=PropertyGroup(data.get('group', 'custom')),
                kind=PropertyKind(data['kind']),
                column=str(data['column']),
            )
        except KeyError as e:
            raise ValidationError(f'property entry is missing field {e.args[0]!r}: {data}')
        except ValueError as e:
            raise ValidationError(f'invalid property entry {data}: {e}')

    def to_dict(self):
        return {
            'name': self.name,
            'abbreviation': self.abbreviation,
            'group': self.group.value,
            'kind': self.kind.value,
            'column': self.column,
        }

    @property
    def is_binary(self):
        return self.kind == PropertyKind.binary


@dataclass(frozen=True)
class Manifest:
    """ describes how a sample table maps onto classes, logits and properties """

    classes: Tuple[str, ...]
    properties: Tuple[PropertySpec, ...]
    label_column: str = 'label'
    logit_prefix: str = 'logit_'

    def __post_init__(self):
        if len(self.classes) == 0:
            raise ValidationError('manifest declares no classes')
        if len(set(self.classes)) != len(self.classes):
            raise ValidationError(f'duplicate class names in manifest: {list(self.classes)}')

        seen = set()
        for spec in self.properties:
            if spec.abbreviation in seen:
                raise ValidationError(f'duplicate property abbreviation {spec.abbreviation!r}')
            seen.add(spec.abbreviation)

    @classmethod
    def from_dict(cls, data):
        if 'classes' not in data:
            raise ValidationError('manifest is missing "classes"')

        return cls(
            classes=tuple(str(c) for c in data['classes']),
            properties=tuple(PropertySpec.from_dict(p) for p in data.get('properties', [])),
            label_column=str(data.get('label_column', 'label')),
            logit_prefix=str(data.get('logit_prefix', 'logit_')),
        )

    def to_dict(self):
        return {
            'classes': list(self.classes),
            'label_column': self.label_column,
            'logit_prefix': self.logit_prefix,
            'properties': [p.to_dict() for p in self.properties],
        }

    def logit_column(self, class_name):
        return f'{self.logit_prefix}{class_name}'

    def property(self, abbreviation):
        """ :returns: the PropertySpec with the given abbreviation """
        for spec in self.properties:
            if spec.abbreviation == abbreviation:
                return spec
        raise KeyError(abbreviation)


@dataclass(frozen=True)
class StandardizedVector:
    values: np.ndarray
    original_mean: float
    original_std: float


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    per-sample logits, true labels and property manifestations;
    immutable after construction, so it is safe to share between workers
    """

    class_names: Tuple[str, ...]
    true_label: np.ndarray
    logits: np.ndarray
    properties: Dict[str, np.ndarray]
    sample_id: Tuple[str, ...]
    property_specs: Tuple[PropertySpec, ...] = field(default=())

    def __post_init__(self):
        n = len(self.sample_id)
        c = len(self.class_names)

        true_label = np.array(self.true_label, dtype=np.int64).reshape(-1)
        logits = np.array(self.logits, dtype=float).reshape(n, c) if n else np.zeros((0, c))

        if len(true_label) != n:
            raise ValidationError(f'label column has {len(true_label)} entries, expected {n}')
        if not np.all(np.isfinite(logits)):
            rows = np.flatnonzero(~np.all(np.isfinite(logits), axis=1))
            raise ValidationError(f'non-finite logits in rows {rows.tolist()}', rows=rows.tolist())

        bad = np.flatnonzero((true_label < 0) | (true_label >= c))
        if len(bad):
            raise ValidationError(f'labels outside [0, {c}) in rows {bad.tolist()}', rows=bad.tolist())

        kinds = {spec.abbreviation: spec.kind for spec in self.property_specs}
        properties = {}
        for abbreviation, values in self.properties.items():
            values = np.array(values, dtype=float).reshape(-1)
            if len(values) != n:
                raise ValidationError(
                    f'property {abbreviation!r} has {len(values)} entries, expected {n}')
            if not np.all(np.isfinite(values)):
                rows = np.flatnonzero(~np.isfinite(values))
                raise ValidationError(
                    f'missing or non-finite values for {abbreviation!r} in rows {rows.tolist()}',
                    rows=rows.tolist())
            if kinds.get(abbreviation) == PropertyKind.binary:
                rows = np.flatnonzero((values != 0.0) & (values != 1.0))
                if len(rows):
                    raise ValidationError(
                        f'binary property {abbreviation!r} has values outside {{0, 1}} '
                        f'in rows {rows.tolist()}', rows=rows.tolist())
            values.setflags(write=False)
            properties[abbreviation] = values

        true_label.setflags(write=False)
        logits.setflags(write=False)

        object.__setattr__(self, 'class_names', tuple(self.class_names))
        object.__setattr__(self, 'sample_id', tuple(str(s) for s in self.sample_id))
        object.__setattr__(self, 'true_label', true_label)
        object.__setattr__(self, 'logits', logits)
        object.__setattr__(self, 'properties', properties)
        object.__setattr__(self, 'property_specs', tuple(self.property_specs))

    @property
    def n(self):
        return len(self.sample_id)

    @property
    def num_classes(self):
        return len(self.class_names)

    def class_index(self, class_name):
        try:
            return self.class_names.index(class_name)
        except ValueError:
            raise DomainError(f'unknown class {class_name!r}; known: {list(self.class_names)}')

    def spec(self, abbreviation) -> Optional[PropertySpec]:
        for spec in self.property_specs:
            if spec.abbreviation == abbreviation:
                return spec
        return None

    def logit(self, class_index):
        return self.logits[:, class_index]

    def predicted_label(self):
        """ :returns: argmax over logits per sample """
        return np.argmax(self.logits, axis=1)

    def subset(self, indices):
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(
            class_names=self.class_names,
            true_label=self.true_label[indices],
            logits=self.logits[indices],
            properties={k: v[indices] for k, v in self.properties.items()},
            sample_id=tuple(self.sample_id[i] for i in indices),
            property_specs=self.property_specs,
        )

    def stratify(self, class_index, min_size=DEFAULT_MIN_STRATUM):
        return stratify(self, class_index, min_size)

    def one_hot_labels(self):
        return one_hot_labels(self)

    def __repr__(self):
        return f'<Dataset(n={self.n}, classes={len(self.class_names)}, properties={list(self.properties)})>'


def stratify(dataset, class_index, min_size=DEFAULT_MIN_STRATUM):
    """ keep only the samples whose true label is class_index """

    if not 0 <= class_index < dataset.num_classes:
        raise DomainError(f'class index {class_index} outside [0, {dataset.num_classes})')

    indices = np.flatnonzero(dataset.true_label == class_index)
    name = dataset.class_names[class_index]
    if len(indices) < min_size:
        raise InsufficientDataError(
            f'class {name!r} has {len(indices)} samples, at least {min_size} required',
            label=name, n=len(indices), required=min_size)

    return dataset.subset(indices)


def one_hot_labels(dataset):
    encoded = np.zeros((dataset.n, dataset.num_classes))
    encoded[np.arange(dataset.n), dataset.true_label] = 1.0
    return encoded

