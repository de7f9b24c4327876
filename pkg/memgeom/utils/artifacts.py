"""
Reading and writing of CSV and JSON artifacts.

Every artifact carries a small metadata block (library version, config hash,
seed). Floats are written in their shortest round-trip form so that equal
results give byte-identical files.
"""

import csv
import hashlib
import json
import math
from pathlib import Path

import numpy as np


def format_float(value):
    """Shortest string that parses back to the same 64-bit float"""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(value)


def _to_builtin(value):
    if isinstance(value, dict):
        return {str(k): _to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_builtin(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_to_builtin(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isfinite(value):
            return value
        return format_float(value)
    if isinstance(value, Path):
        return str(value)
    return value


def config_hash(config):
    """First 16 hex digits of the sha256 of the canonical JSON of `config`"""
    canonical = json.dumps(_to_builtin(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def artifact_meta(config=None, seed=None, **extra):
    """Metadata block embedded in every artifact"""
    from .. import __version__

    meta = {"version": __version__}
    if config is not None:
        meta["config_hash"] = config_hash(config)
    if seed is not None:
        meta["seed"] = int(seed)
    meta.update(extra)
    return meta


def write_csv(path, header, rows, meta=None):
    """Writes a CSV file preceded by ``# key=value`` metadata lines

    Parameters
    ----------
    path : str or Path
    header : list of str
    rows : iterable of sequences
        floats are written with :func:`format_float`
    meta : dict, optional
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as f:
        for key, value in sorted((meta or {}).items()):
            f.write(f"# {key}={value}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [
                    format_float(v) if isinstance(v, (float, np.floating)) else v
                    for v in row
                ]
            )
    return path


def read_csv(path):
    """Reads a file written by :func:`write_csv`

    Returns
    -------
    header : list of str
    columns : dict of str -> list of str
    meta : dict of str -> str
    """
    meta = {}
    with Path(path).open(newline="", encoding="utf-8") as f:
        lines = f.read().splitlines()
    body = []
    for line in lines:
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key] = value
        elif line:
            body.append(line)
    reader = csv.reader(body)
    header = next(reader)
    columns = {name: [] for name in header}
    for row in reader:
        for name, value in zip(header, row):
            columns[name].append(value)
    return header, columns, meta


def write_json(path, payload, meta=None):
    """Writes `payload` as indented JSON with sorted keys and a ``meta`` field"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = dict(_to_builtin(payload))
    if meta is not None:
        document["meta"] = _to_builtin(meta)
    path.write_text(json.dumps(document, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def read_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))
