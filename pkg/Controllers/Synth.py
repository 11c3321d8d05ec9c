"""
structural causal models with known (in)dependence structure

    z ~ N(0, 1)
    x = tanh(z) + e_x
    y = z^2 / 2 + e_y            (+ effect_size * x for direct dependence)

so x and y are dependent through z alone under the null kind. Every kind
draws the same random numbers in the same order, which makes a zero effect
reproduce the null arrays exactly.
"""

import json
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from Controllers.DatasetReader import export_dataset, write_manifest
from Models.Dataset import Dataset, Manifest, PropertyGroup, PropertyKind, PropertySpec
from Models.Errors import DomainError
from Models.Scm import GroundTruth, PipelineFixture, ScmKind, ScmSample
from Utils import atomic_write

log = logging.getLogger(__name__)

EMOTIONS = ('angry', 'disgusted', 'fearful', 'happy', 'sad', 'surprised', 'neutral')
PLANTED = 'P_D'
INDEPENDENT = 'P_I'
# logit bump of the true class, keeps the fixture classifier better than chance
LABEL_MARGIN = 2.0
# planted logit term per unit effect, in logit-noise standard deviations; the
# moderate effect plants a signal as strong as the noise
PLANTED_GAIN = 2.0


def _binarize(values):
    return (values > np.median(values)).astype(float)


def generate_scm_dataset(spec):
    """ :returns: ScmSample with x, y (vectors), z (n x 1) and the ground truth for (x, y) """

    if spec.kind == ScmKind.pipeline_fixture:
        raise DomainError('pipeline fixtures come from generate_pipeline_fixture')

    rng = np.random.default_rng(spec.seed)
    z = rng.standard_normal(spec.n)
    x = np.tanh(z) + spec.noise_std * rng.standard_normal(spec.n)
    y = z ** 2 / 2.0 + spec.noise_std * rng.standard_normal(spec.n)

    if spec.property_kind == PropertyKind.binary:
        x = _binarize(x)
    if spec.kind == ScmKind.direct_dependence:
        y = y + spec.effect_size * x

    dependent = spec.kind == ScmKind.direct_dependence and spec.effect_size > 0
    return ScmSample(x, y, z.reshape(-1, 1), GroundTruth({('x', 'y'): dependent}), spec)


def class_names(count):
    return EMOTIONS if count == len(EMOTIONS) else tuple(f'class_{i}' for i in range(count))


def generate_pipeline_fixture(spec, planted_class=None, planted=True):
    """
    a full audit input: balanced labels, noisy logits and two properties, one
    added to planted_class's logit and one independent of everything
    :param planted: False leaves the planted property out of the logit equation
    """

    if spec.kind != ScmKind.pipeline_fixture:
        raise DomainError(f'expected a pipeline_fixture spec, got {spec.kind.value}')

    names = class_names(spec.classes)
    if planted_class is None:
        planted_class = 'happy' if 'happy' in names else names[0]
    if planted_class not in names:
        raise DomainError(f'unknown planted class {planted_class!r}')

    n, c = spec.n, spec.classes
    rng = np.random.default_rng(spec.seed)
    labels = rng.permutation(np.arange(n) % c)
    dependent = rng.standard_normal(n)
    independent = rng.standard_normal(n)
    logits = spec.noise_std * rng.standard_normal((n, c))

    if spec.property_kind == PropertyKind.binary:
        dependent, independent = _binarize(dependent), _binarize(independent)

    logits[np.arange(n), labels] += LABEL_MARGIN
    if planted:
        logits[:, names.index(planted_class)] += PLANTED_GAIN * spec.noise_std * spec.effect_size * dependent

    specs = (
        PropertySpec('planted dependence', PLANTED, PropertyGroup.custom, spec.property_kind, 'p_d'),
        PropertySpec('independent', INDEPENDENT, PropertyGroup.custom, spec.property_kind, 'p_i'),
    )
    manifest = Manifest(classes=names, properties=specs)
    dataset = Dataset(
        class_names=names,
        true_label=labels,
        logits=logits,
        properties={PLANTED: dependent, INDEPENDENT: independent},
        sample_id=tuple(f's{i:05d}' for i in range(n)),
        property_specs=specs,
    )

    truth = {}
    for abbreviation in (PLANTED, INDEPENDENT):
        for name in names:
            truth[(abbreviation, name)] = (
                planted and abbreviation == PLANTED and name == planted_class and spec.effect_size > 0)

    log.debug('fixture %r planted on %s', dataset, planted_class if planted else None)
    return PipelineFixture(dataset, manifest, GroundTruth(truth), spec)


def _ground_truth_json(truth, spec):
    return json.dumps({'spec': spec.to_dict(), **truth.to_dict()}, indent=2) + '\n'


def write_fixture(fixture, out_dir):
    """ writes data.csv, manifest.json and ground_truth.json into out_dir """

    out_dir = Path(out_dir)
    paths = [
        export_dataset(fixture.dataset, fixture.manifest, out_dir / 'data.csv'),
        write_manifest(fixture.manifest, out_dir / 'manifest.json'),
        atomic_write(out_dir / 'ground_truth.json', _ground_truth_json(fixture.ground_truth, fixture.spec)),
    ]
    return paths


def write_scm_sample(sample, out_dir):
    """ writes scm.csv (x, y, z) and ground_truth.json into out_dir """

    out_dir = Path(out_dir)
    frame = pd.DataFrame({'x': sample.x, 'y': sample.y, 'z': sample.z[:, 0]})
    return [
        atomic_write(out_dir / 'scm.csv', frame.to_csv(index=False, float_format='%.17g', lineterminator='\n')),
        atomic_write(out_dir / 'ground_truth.json', _ground_truth_json(sample.ground_truth, sample.spec)),
    ]
