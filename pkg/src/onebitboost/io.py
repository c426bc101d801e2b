"""File formats for instances, models and trajectories.

MBCS1 binary instance format (all integers and floats little-endian)::

    offset  size  field
    0       5     magic  b"MBCS1"
    5       1     u8     format version (1)
    6       4     u32    n (samples)
    10      4     u32    p (dimensions)
    14      1     u8     flags: bit0 ground truth present,
                                bit1 corruption set present,
                                bit2 distribution metadata present
    15      8     u64    seed
    23      1     u8     distribution code (0 none, 1 gaussian, 2 student-t,
                         3 uniform, 4 laplace, 5 laplace-std, 6 rademacher)
    24      4     u32    student-t dof (0 if not applicable)
    28      ...   payloads, each a u64 element count followed by the elements:
                  features      f64 x n*p   (row-major, sample by sample)
                  labels        f64 x n
                  ground truth  f64 x p     (only if bit0)
                  corruptions   u64 x k     (only if bit1)

CSV instance format: optional ``#`` metadata lines
(``# seed=``, ``# distribution=``, ``# dof=``, ``# ground_truth=``,
``# corruptions=``, values space separated), then a header row
``x0,...,x{p-1},label`` and one row per sample with the label last.
Floats are written with ``repr`` so the round trip is exact.

Models are JSON objects with keys ``estimator``, ``iterations``,
``learning_rate``, ``feature_scale``, ``degenerate`` and
``coefficients``.
"""

from __future__ import annotations

import csv
import json
import struct
from pathlib import Path

import numpy as np

from .core import Instance, Model

MAGIC = b"MBCS1"
VERSION = 1
_HEADER = struct.Struct("<5sBIIBQBI")

DIST_CODES = {
    None: 0,
    "gaussian": 1,
    "student-t": 2,
    "uniform": 3,
    "laplace": 4,
    "laplace-std": 5,
    "rademacher": 6,
}
_DIST_NAMES = {v: k for k, v in DIST_CODES.items()}


class FormatError(ValueError):
    pass


def instance_to_bytes(inst):
    flags = 0
    if inst.ground_truth is not None:
        flags |= 1
    if inst.corruptions.size:
        flags |= 2
    if inst.distribution is not None:
        flags |= 4
    parts = [
        _HEADER.pack(MAGIC, VERSION, inst.n, inst.p, flags, inst.seed,
                     DIST_CODES[inst.distribution], inst.dof or 0)
    ]

    def payload(arr, dtype):
        arr = np.ascontiguousarray(arr, dtype=dtype).reshape(-1)
        parts.append(struct.pack("<Q", arr.size))
        parts.append(arr.tobytes())

    payload(inst.features, "<f8")
    payload(inst.labels, "<f8")
    if flags & 1:
        payload(inst.ground_truth, "<f8")
    if flags & 2:
        payload(inst.corruptions, "<u8")
    return b"".join(parts)


def instance_from_bytes(data):
    if len(data) < _HEADER.size or data[:5] != MAGIC:
        raise FormatError("not an MBCS1 file")
    _, version, n, p, flags, seed, code, dof = _HEADER.unpack_from(data, 0)
    if version != VERSION:
        raise FormatError(f"unsupported MBCS1 version {version}")
    pos = _HEADER.size

    def payload(dtype, expected=None):
        nonlocal pos
        if pos + 8 > len(data):
            raise FormatError("truncated MBCS1 file")
        (count,) = struct.unpack_from("<Q", data, pos)
        pos += 8
        if expected is not None and count != expected:
            raise FormatError(f"payload has {count} elements, expected {expected}")
        if pos + 8 * count > len(data):
            raise FormatError("truncated MBCS1 file")
        arr = np.frombuffer(data, dtype=dtype, count=count, offset=pos)
        pos += 8 * count
        return arr

    features = payload("<f8", n * p).reshape(n, p)
    labels = payload("<f8", n)
    gt = payload("<f8", p) if flags & 1 else None
    corr = payload("<u8").astype(np.int64) if flags & 2 else np.zeros(0, dtype=np.int64)
    if pos != len(data):
        raise FormatError("trailing bytes after last payload")
    if code not in _DIST_NAMES:
        raise FormatError(f"unknown distribution code {code}")
    return Instance(
        features=features,
        labels=labels,
        ground_truth=gt,
        corruptions=corr,
        seed=seed,
        distribution=_DIST_NAMES[code] if flags & 4 else None,
        dof=dof or None,
    )


def _fmt(x):
    return repr(float(x))


def write_instance_csv(inst, path):
    with open(path, "w", newline="") as fh:
        fh.write(f"# seed={inst.seed}\n")
        if inst.distribution is not None:
            fh.write(f"# distribution={inst.distribution}\n")
        if inst.dof is not None:
            fh.write(f"# dof={inst.dof}\n")
        if inst.ground_truth is not None:
            fh.write("# ground_truth=" + " ".join(map(_fmt, inst.ground_truth)) + "\n")
        if inst.corruptions.size:
            fh.write("# corruptions=" + " ".join(map(str, inst.corruptions)) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"x{j}" for j in range(inst.p)] + ["label"])
        for row, label in zip(inst.features, inst.labels):
            w.writerow([_fmt(v) for v in row] + [str(int(label))])


def read_instance_csv(path):
    meta = {}
    rows = []
    with open(path, newline="") as fh:
        lines = fh.read().splitlines()
    body = []
    for line in lines:
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key.strip()] = value.strip()
        elif line:
            body.append(line)
    reader = csv.reader(body)
    header = next(reader)
    if not header or header[-1] != "label":
        raise FormatError("CSV header must end with 'label'")
    for row in reader:
        rows.append([float(v) for v in row])
    data = np.array(rows, dtype=np.float64).reshape(len(rows), len(header))
    gt = meta.get("ground_truth")
    corr = meta.get("corruptions")
    return Instance(
        features=data[:, :-1],
        labels=data[:, -1],
        ground_truth=np.array([float(v) for v in gt.split()]) if gt else None,
        corruptions=np.array([int(v) for v in corr.split()], dtype=np.int64) if corr else np.zeros(0, dtype=np.int64),
        seed=int(meta.get("seed", 0)),
        distribution=meta.get("distribution"),
        dof=int(meta["dof"]) if "dof" in meta else None,
    )


def save_instance(inst, path):
    """Write by extension: ``.csv`` -> CSV, anything else -> MBCS1."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        write_instance_csv(inst, path)
    else:
        path.write_bytes(instance_to_bytes(inst))


def load_instance(path):
    path = Path(path)
    with open(path, "rb") as fh:
        head = fh.read(5)
    if head == MAGIC:
        return instance_from_bytes(path.read_bytes())
    return read_instance_csv(path)


def model_to_dict(model):
    return {
        "estimator": model.estimator_tag,
        "iterations": model.iterations,
        "learning_rate": model.learning_rate,
        "feature_scale": model.feature_scale,
        "degenerate": model.degenerate,
        "coefficients": [float(v) for v in model.coefficients],
    }


def save_model(model, path):
    Path(path).write_text(json.dumps(model_to_dict(model), indent=1) + "\n")


def load_model(path):
    d = json.loads(Path(path).read_text())
    return Model(
        coefficients=np.array(d["coefficients"], dtype=np.float64),
        estimator_tag=d["estimator"],
        iterations=int(d.get("iterations", 0)),
        learning_rate=float(d.get("learning_rate", 1.0)),
        feature_scale=float(d.get("feature_scale", 1.0)),
        degenerate=bool(d.get("degenerate", False)),
    )


TRAJECTORY_COLUMNS = ("t", "coordinate", "sign", "alpha", "loss", "margin")


def save_trajectory(trajectory, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRAJECTORY_COLUMNS)
        for r in trajectory:
            w.writerow([r.t, r.coordinate, r.sign, _fmt(r.alpha), _fmt(r.loss), _fmt(r.margin)])
