import json
import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent
sys.path.insert(0, str(ROOT))

from Models.Dataset import Dataset, Manifest, PropertyGroup, PropertyKind, PropertySpec  # noqa: E402

FIXTURES = ROOT / 'tests' / 'fixtures'


@pytest.fixture
def published_grids():
    with open(FIXTURES / 'published_grids.json', encoding='utf-8') as file:
        return json.load(file)


@pytest.fixture
def small_manifest():
    return Manifest(
        classes=('neg', 'pos', 'mid'),
        properties=(
            PropertySpec('age', 'B_A', PropertyGroup.bodily, PropertyKind.scalar, 'age'),
            PropertySpec('electrodes', 'R_E', PropertyGroup.recording, PropertyKind.binary, 'electrodes'),
        ),
    )


@pytest.fixture
def small_dataset(small_manifest):
    rng = np.random.default_rng(3)
    n = 60
    labels = np.arange(n) % 3
    return Dataset(
        class_names=small_manifest.classes,
        true_label=labels,
        logits=rng.standard_normal((n, 3)),
        properties={'B_A': rng.uniform(20, 80, n), 'R_E': (np.arange(n) % 2).astype(float)},
        sample_id=tuple(f'id{i}' for i in range(n)),
        property_specs=small_manifest.properties,
    )
