"""
symmetry properties from facial landmarks: eye-line and nose-bridge deviation
angles and a mirrored-half pixel dissimilarity. The dissimilarity is a plain
pixel measure standing in for a perceptual similarity column, which is
ingested precomputed.
"""

import logging
from pathlib import Path

import cv2
import numpy as np
import pandas as pd

from Models.Errors import DegenerateLandmarkError, DomainError, InsufficientRegionError, ParseError, SchemaError
from Models.Landmarks import LandmarkSet, SymmetryRecord
from Utils import atomic_write

log = logging.getLogger(__name__)

LANDMARK_COLUMNS = ('lx', 'ly', 'rx', 'ry', 'nx', 'ny', 'sx', 'sy')
MIN_REGION = 8


def _fold(dx, dy):
    """ :returns: angle of (dx, dy) against the x axis folded into [0, 90] degrees """
    return float(np.degrees(np.arctan2(abs(dy), abs(dx))))


def eye_level_deviation(landmarks):
    """ :returns: angle in degrees between the eye-center line and the horizontal """

    d = landmarks.right_eye_center - landmarks.left_eye_center
    if d.x == 0 and d.y == 0:
        raise DegenerateLandmarkError('eye centers coincide')
    return _fold(d.x, d.y)


def midline_deviation(landmarks):
    """ :returns: angle in degrees between the nasion-subnasale line and the vertical """

    d = landmarks.subnasale - landmarks.nasion
    if d.x == 0 and d.y == 0:
        raise DegenerateLandmarkError('nasion and subnasale coincide')
    return _fold(d.y, d.x)


def align_eye_line(image, landmarks):
    """ rotate the image about the eye midpoint so that the eye line is horizontal """

    d = landmarks.right_eye_center - landmarks.left_eye_center
    angle = float(np.degrees(np.arctan2(d.y, d.x)))
    if angle == 0.0:
        return image

    center = tuple(landmarks.eye_midpoint)
    matrix = cv2.getRotationMatrix2D(center, angle, 1.0)
    height, width = image.shape
    return cv2.warpAffine(image, matrix, (width, height), flags=cv2.INTER_LINEAR,
                          borderMode=cv2.BORDER_REPLICATE)


def mirror_dissimilarity(image, landmarks):
    """
    mean absolute difference between the left half of an eye-centred square crop
    and the mirrored right half, divided by the crop's intensity range
    :returns: value in [0, 1]; 0 for a flat crop
    """

    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 2 or image.size == 0:
        raise DomainError(f'expected a non-empty grayscale image, got shape {image.shape}')
    if landmarks.interocular_distance == 0:
        raise DegenerateLandmarkError('eye centers coincide')

    aligned = align_eye_line(image, landmarks)
    height, width = aligned.shape
    cx, cy = landmarks.eye_midpoint

    # side is twice the inter-ocular distance, clipped symmetrically to the image
    half = min(landmarks.interocular_distance, cx, width - cx, cy, height - cy)
    half = int(np.floor(half))
    if 2 * half < MIN_REGION:
        raise InsufficientRegionError(
            f'crop of {2 * half}x{2 * half} pixels is below {MIN_REGION}x{MIN_REGION}',
            n=2 * half, required=MIN_REGION)

    left = int(round(cx)) - half
    top = int(round(cy)) - half
    crop = aligned[top:top + 2 * half, left:left + 2 * half]

    spread = float(crop.max() - crop.min())
    if spread == 0.0:
        return 0.0

    difference = np.abs(crop[:, :half] - crop[:, half:][:, ::-1])
    return float(min(1.0, difference.mean() / spread))


def read_pgm(path):
    image = cv2.imread(str(path), cv2.IMREAD_GRAYSCALE)
    if image is None:
        raise ParseError(f'cannot decode {path} as a grayscale image')
    return image


def load_landmarks(path):
    """ :returns: list of (sample_id, LandmarkSet) in file order """

    table = pd.read_csv(path, dtype={'sample_id': str})
    for column in ('sample_id',) + LANDMARK_COLUMNS:
        if column not in table.columns:
            raise SchemaError(f'column {column!r} is missing from {path}', column=column)

    rows = []
    for i, row in enumerate(table.itertuples(index=False)):
        try:
            coordinates = [float(getattr(row, c)) for c in LANDMARK_COLUMNS]
        except (TypeError, ValueError):
            raise ParseError(f'non-numeric landmark at row {i}', row=i)
        rows.append((str(row.sample_id), LandmarkSet.from_coordinates(*coordinates)))
    return rows


def symmetry_record(sample_id, landmarks, image=None):
    dissimilarity = None
    if image is not None:
        try:
            dissimilarity = mirror_dissimilarity(image, landmarks)
        except InsufficientRegionError as e:
            log.warning('%s: %s', sample_id, e)

    return SymmetryRecord(sample_id, eye_level_deviation(landmarks), midline_deviation(landmarks), dissimilarity)


def symmetry_records(landmark_rows, images_dir=None):
    records = []
    for sample_id, landmarks in landmark_rows:
        image = None
        if images_dir is not None:
            path = Path(images_dir) / f'{sample_id}.pgm'
            if path.exists():
                image = read_pgm(path)
            else:
                log.warning('no image %s for %s', path, sample_id)
        records.append(symmetry_record(sample_id, landmarks, image))
    return records


def write_symmetry(records, path):
    """ symmetry columns keyed by sample_id, ready to merge into a sample table """

    optional = ['mirror_dissimilarity', 'lpips', 'volume_diff']
    frame = pd.DataFrame([r.to_dict() for r in records],
                         columns=['sample_id', 'eye_level_deg', 'midline_deg'] + optional)
    frame = frame.drop(columns=[c for c in optional if frame[c].isna().all()])
    return atomic_write(path, frame.to_csv(index=False, float_format='%.17g', lineterminator='\n'))
