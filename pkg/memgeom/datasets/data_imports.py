"""
Load and save datasets.

Two formats are supported:

* ``csv``: comma-separated values, one row per point, no header;
* ``raw-f64``: a 16-byte header holding two little-endian unsigned 64-bit
  integers (n_points, dim) followed by n_points * dim little-endian 64-bit
  floats in row-major order.
"""

import csv
import math
import struct
from pathlib import Path

import numpy as np

from ._dataset import Dataset, DatasetError
from ..utils.artifacts import format_float

_HEADER = struct.Struct("<QQ")
_FORMATS = ("csv", "raw-f64")
_SUFFIXES = {".csv": "csv", ".f64": "raw-f64", ".raw": "raw-f64", ".bin": "raw-f64"}


def _resolve_format(path, format):
    if format is None:
        format = _SUFFIXES.get(Path(path).suffix.lower())
        if format is None:
            raise ValueError(
                f"Cannot infer the format of {path}, pass format in {_FORMATS}."
            )
    if format not in _FORMATS:
        raise ValueError(f"Unknown dataset format {format!r}, expected one of {_FORMATS}.")
    return format


def _load_csv(path):
    rows = []
    dim = None
    with Path(path).open(newline="", encoding="utf-8") as f:
        for row_index, row in enumerate(csv.reader(f)):
            if not row or all(not cell.strip() for cell in row):
                continue
            if dim is None:
                dim = len(row)
            elif len(row) != dim:
                raise DatasetError(
                    f"expected {dim} columns, got {len(row)}",
                    row=len(rows),
                    path=path,
                )
            values = []
            for column, cell in enumerate(row):
                try:
                    value = float(cell)
                except ValueError:
                    raise DatasetError(
                        f"cannot parse {cell!r} as a number",
                        row=len(rows),
                        column=column,
                        path=path,
                    ) from None
                if not math.isfinite(value):
                    raise DatasetError(
                        f"non-finite entry {cell!r}", row=len(rows), column=column, path=path
                    )
                values.append(value)
            rows.append(values)
    if not rows:
        raise DatasetError("empty file", path=path)
    return np.array(rows, dtype=np.float64)


def _load_raw(path):
    content = Path(path).read_bytes()
    if len(content) < _HEADER.size:
        raise DatasetError(
            f"malformed header: {len(content)} bytes, expected at least {_HEADER.size}",
            path=path,
        )
    n_points, dim = _HEADER.unpack_from(content)
    if n_points < 1 or dim < 1:
        raise DatasetError(f"malformed header: n_points={n_points}, dim={dim}", path=path)
    payload = content[_HEADER.size :]
    expected = n_points * dim * 8
    if len(payload) != expected:
        raise DatasetError(
            f"dimension mismatch: header announces {n_points}x{dim} "
            f"({expected} bytes), payload has {len(payload)} bytes",
            path=path,
        )
    values = np.frombuffer(payload, dtype="<f8").astype(np.float64).reshape(n_points, dim)
    bad = np.argwhere(~np.isfinite(values))
    if bad.size:
        row, column = (int(i) for i in bad[0])
        raise DatasetError(
            f"non-finite entry {values[row, column]!r}", row=row, column=column, path=path
        )
    return values


def load_dataset(path, format=None, label=None):
    """Loads a dataset from disk

    Parameters
    ----------
    path : str or Path
    format : {'csv', 'raw-f64'}, optional
        inferred from the file suffix if None (.csv, .f64, .raw, .bin)
    label : str, optional
        defaults to the file stem

    Returns
    -------
    Dataset
        exact values, row order preserved

    Raises
    ------
    DatasetError
        malformed header, non-finite entry or dimension mismatch, with the
        row/column position
    """
    path = Path(path)
    format = _resolve_format(path, format)
    if not path.exists():
        raise DatasetError("file does not exist", path=path)
    if format == "csv":
        values = _load_csv(path)
    else:
        values = _load_raw(path)
    return Dataset(values, label=label or path.stem)


def save_dataset(dataset, path, format=None):
    """Saves a dataset so that :func:`load_dataset` reproduces it bit for bit

    Parameters
    ----------
    dataset : Dataset
    path : str or Path
    format : {'csv', 'raw-f64'}, optional
        inferred from the file suffix if None
    """
    path = Path(path)
    format = _resolve_format(path, format)
    path.parent.mkdir(parents=True, exist_ok=True)
    if format == "csv":
        with path.open("w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            for row in dataset.values:
                writer.writerow([format_float(v) for v in row])
    else:
        header = _HEADER.pack(dataset.n_points, dataset.dim)
        path.write_bytes(header + dataset.values.astype("<f8").tobytes(order="C"))
    return path


def save_array(array, path):
    """Writes an arbitrary float array in the raw-f64 layout

    The header stores (first axis length, product of the other axes).
    """
    array = np.ascontiguousarray(array, dtype="<f8")
    n = array.shape[0] if array.ndim else 1
    rest = int(array.size // max(n, 1))
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(_HEADER.pack(n, rest) + array.tobytes(order="C"))
    return path


def affine_rescale(dataset, in_range=None, out_range=(-1.0, 1.0)):
    """Maps every coordinate affinely from `in_range` to `out_range`

    Parameters
    ----------
    dataset : Dataset
    in_range : (float, float), optional
        defaults to the (min, max) over all entries, e.g. (0, 255) for pixels
    out_range : (float, float), default is (-1, 1)

    Returns
    -------
    Dataset
    """
    low, high = in_range if in_range is not None else (dataset.values.min(), dataset.values.max())
    new_low, new_high = out_range
    if not high > low:
        raise ValueError(f"in_range should be increasing, got ({low}, {high})")
    scale = (new_high - new_low) / (high - low)
    return Dataset(
        (dataset.values - low) * scale + new_low, label=f"{dataset.label}[rescaled]"
    )
