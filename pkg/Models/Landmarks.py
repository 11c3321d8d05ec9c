from dataclasses import dataclass
from typing import Optional

import numpy as np

from Models.Errors import DegenerateLandmarkError, DomainError


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __iter__(self):
        yield self.x
        yield self.y

    def __sub__(self, other):
        return Point(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class LandmarkSet:
    """
    facial landmarks in pixel coordinates, y growing downward;
    left/right refer to image left and image right; their order is not
    enforced, so swapped eyes are accepted and the angles fold them back
    """

    left_eye_center: Point
    right_eye_center: Point
    nasion: Point
    subnasale: Point
    width: Optional[int] = None
    height: Optional[int] = None

    def __post_init__(self):
        for name in ('left_eye_center', 'right_eye_center', 'nasion', 'subnasale'):
            point = getattr(self, name)
            if not (np.isfinite(point.x) and np.isfinite(point.y)):
                raise DegenerateLandmarkError(f'{name} has non-finite coordinates {tuple(point)}')
            if self.width is not None and not 0 <= point.x <= self.width:
                raise DomainError(f'{name} x={point.x} lies outside an image {self.width} wide')
            if self.height is not None and not 0 <= point.y <= self.height:
                raise DomainError(f'{name} y={point.y} lies outside an image {self.height} high')

    @classmethod
    def from_coordinates(cls, lx, ly, rx, ry, nx, ny, sx, sy, width=None, height=None):
        return cls(Point(float(lx), float(ly)), Point(float(rx), float(ry)),
                   Point(float(nx), float(ny)), Point(float(sx), float(sy)), width, height)

    @property
    def eye_midpoint(self):
        return Point((self.left_eye_center.x + self.right_eye_center.x) / 2.0,
                     (self.left_eye_center.y + self.right_eye_center.y) / 2.0)

    @property
    def interocular_distance(self):
        d = self.right_eye_center - self.left_eye_center
        return float(np.hypot(d.x, d.y))

    def transformed(self, fn):
        """ :returns: a copy with fn applied to every point; image dimensions are dropped """
        return LandmarkSet(fn(self.left_eye_center), fn(self.right_eye_center),
                           fn(self.nasion), fn(self.subnasale))

    def mirrored(self, width):
        """ :returns: the set as seen in a horizontally flipped image, eye roles swapped """

        def flip(p):
            return Point(width - p.x, p.y)

        return LandmarkSet(flip(self.right_eye_center), flip(self.left_eye_center),
                           flip(self.nasion), flip(self.subnasale), self.width, self.height)


@dataclass(frozen=True)
class SymmetryRecord:
    sample_id: str
    eye_level_deg: float
    midline_deg: float
    mirror_dissimilarity: Optional[float] = None
    lpips: Optional[float] = None
    volume_diff: Optional[float] = None

    def __post_init__(self):
        for name in ('eye_level_deg', 'midline_deg'):
            if not 0.0 <= getattr(self, name) <= 90.0:
                raise DomainError(f'{name} must lie in [0, 90], got {getattr(self, name)}')
        if self.mirror_dissimilarity is not None and not 0.0 <= self.mirror_dissimilarity <= 1.0:
            raise DomainError(f'mirror dissimilarity must lie in [0, 1], got {self.mirror_dissimilarity}')

    def to_dict(self):
        return {
            'sample_id': self.sample_id,
            'eye_level_deg': self.eye_level_deg,
            'midline_deg': self.midline_deg,
            'mirror_dissimilarity': self.mirror_dissimilarity,
            'lpips': self.lpips,
            'volume_diff': self.volume_diff,
        }
