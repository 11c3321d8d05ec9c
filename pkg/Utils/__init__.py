import os
import tempfile
from hashlib import sha1, sha256
from pathlib import Path

import numpy as np

from Models.Dataset import StandardizedVector
from Models.Errors import DomainError, InsufficientDataError


def standardize(values):
    """ :returns: StandardizedVector with zero mean and unit (population) std """

    arr = np.asarray(values, dtype=float).reshape(-1)
    if arr.size == 0:
        raise DomainError('cannot standardize an empty vector')
    if not np.all(np.isfinite(arr)):
        raise DomainError('cannot standardize non-finite values')

    mean = float(arr.mean())
    if np.ptp(arr) == 0.0:
        return StandardizedVector(np.zeros_like(arr), mean, 0.0)

    std = float(arr.std())
    return StandardizedVector((arr - mean) / std, mean, std)


def as_matrix(values, n):
    """ :returns: values as an n x d float matrix; None or empty input gives n x 0 """

    if values is None:
        return np.zeros((n, 0))
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1) if arr.size else np.zeros((n, 0))
    if arr.shape[0] != n:
        raise DomainError(f'expected {n} rows, got {arr.shape[0]}')
    return arr


def require_samples(n, minimum, label=None):
    if n < minimum:
        where = f' for {label}' if label else ''
        raise InsufficientDataError(
            f'{n} samples available{where}, at least {minimum} required',
            label=label, n=n, required=minimum)


def prepare_inputs(x, y, z=None):
    """ :returns: standardized x, y (vectors) and z (n x dz, column-wise standardized) """

    x = standardize(x).values
    y = standardize(y).values
    if len(x) != len(y):
        raise DomainError(f'x has {len(x)} samples but y has {len(y)}')

    z = as_matrix(z, len(x))
    if z.shape[1]:
        z = np.column_stack([standardize(column).values for column in z.T])
    return x, y, z


def derive_seed(seed, *keys):
    """ :returns: a 32-bit seed derived from a parent seed and any keys """
    data = ':'.join(str(k) for k in (seed,) + keys).encode()
    return int.from_bytes(sha1(data).digest()[:4], 'big')


def file_digest(path):
    """ :returns: sha256 hex digest of a file's bytes """

    digest = sha256()
    with open(path, 'rb') as file:
        for block in iter(lambda: file.read(1 << 16), b''):
            digest.update(block)
    return digest.hexdigest()


def atomic_write(path, data):
    """ write text or bytes to path via a temp file in the same directory """

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f'.{path.name}.')

    try:
        if isinstance(data, bytes):
            with os.fdopen(fd, 'wb') as file:
                file.write(data)
        else:
            with os.fdopen(fd, 'w', encoding='utf-8', newline='') as file:
                file.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise

    return path
