"""Flat binary snapshots, CSV inspection dumps, and trajectory export.

Binary layout (little-endian throughout): magic b"ENLS", format version
u16, kind u8 (0 = field samples, 1 = spectrum coefficients), convention
tag u8 (1 = the package's fixed normalization, coeffs = dx * fft(values)),
then L f64, M u32, t f64, then M complex64 values.  Storage precision is
single: values round-trip through complex64, so reloading costs about
1e-7 relative.  Writes go through a temp file in the target directory and
an atomic rename, so a crashed run never leaves a half-written snapshot.
"""

import csv
import enum
import io
import json
import math
import os
import struct
import tempfile
from fractions import Fraction

import numpy as np

from .grid import FieldSample, GridSpec, Spectrum

MAGIC = b"ENLS"
FORMAT_VERSION = 1
KIND_FIELD = 0
KIND_SPECTRUM = 1
CONVENTION_DX_FFT = 1

_HEADER = struct.Struct("<4sHBBdId")


def atomic_write_bytes(path, data):
    """Write data to path via temp file + rename in the same directory."""
    path = os.fspath(path)
    d = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def atomic_write_text(path, text):
    return atomic_write_bytes(path, text.encode("utf-8"))


def _pack(kind, grid, t, values):
    header = _HEADER.pack(
        MAGIC, FORMAT_VERSION, kind, CONVENTION_DX_FFT, grid.L, grid.M, float(t)
    )
    payload = np.ascontiguousarray(values, dtype=np.complex64)
    return header + payload.tobytes()


def write_field(path, f):
    """Serialize a FieldSample; returns the path."""
    return atomic_write_bytes(path, _pack(KIND_FIELD, f.grid, f.t, f.values))


def write_spectrum(path, s):
    """Serialize a Spectrum (FFT-ordered coefficients); returns the path."""
    return atomic_write_bytes(path, _pack(KIND_SPECTRUM, s.grid, s.t, s.coeffs))


def _unpack(data, path):
    if len(data) < _HEADER.size:
        raise ValueError(f"{path}: truncated header ({len(data)} bytes)")
    magic, version, kind, conv, L, M, t = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported format version {version}")
    if conv != CONVENTION_DX_FFT:
        raise ValueError(f"{path}: unknown convention tag {conv}")
    if kind not in (KIND_FIELD, KIND_SPECTRUM):
        raise ValueError(f"{path}: unknown kind {kind}")
    body = data[_HEADER.size :]
    if len(body) != 8 * M:
        raise ValueError(f"{path}: payload holds {len(body) // 8} values, header says {M}")
    values = np.frombuffer(body, dtype="<c8").astype(np.complex128)
    return kind, GridSpec(L, M), t, values


def read_sample(path):
    """Read either kind back; returns a FieldSample or a Spectrum."""
    with open(path, "rb") as f:
        data = f.read()
    kind, grid, t, values = _unpack(data, path)
    if kind == KIND_FIELD:
        return FieldSample(grid, values, t)
    return Spectrum(grid, values, t)


def read_field(path):
    out = read_sample(path)
    if not isinstance(out, FieldSample):
        raise ValueError(f"{path}: holds a spectrum, not field samples")
    return out


def read_spectrum(path):
    out = read_sample(path)
    if not isinstance(out, Spectrum):
        raise ValueError(f"{path}: holds field samples, not a spectrum")
    return out


def json_safe(obj):
    """JSON-ready copy: Fractions and enums render as strings, non-finite
    floats as their repr, numpy scalars as Python numbers; anything else
    unrecognized falls back to str."""
    if isinstance(obj, dict):
        return {str(k): json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_safe(v) for v in obj]
    if isinstance(obj, np.generic):
        return json_safe(obj.item())
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, (bool, int, float, str)) or obj is None:
        return obj
    if isinstance(obj, (Fraction, enum.Enum)):
        return str(obj) if isinstance(obj, Fraction) else obj.name
    return str(obj)


def write_json(path, obj):
    """Sanitized, key-sorted, indented JSON written atomically."""
    text = json.dumps(json_safe(obj), indent=2, sort_keys=True) + "\n"
    return atomic_write_text(path, text)


def rows_to_csv(path, header, rows):
    """Write a CSV atomically: header tuple + iterable of row tuples.

    Floats are rendered with repr (shortest round-trip form), so a rerun
    that computes bitwise-equal numbers emits a byte-identical file.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        cells = []
        for v in row:
            if isinstance(v, np.generic):
                v = v.item()
            cells.append(repr(v) if isinstance(v, float) else v)
        w.writerow(cells)
    return atomic_write_text(path, buf.getvalue())


def spectrum_to_csv(path, s):
    """Inspection dump, one row per mode in ascending k: columns k, re, im."""
    order = np.argsort(s.grid.k)
    rows = [
        (int(s.grid.k[j]), float(s.coeffs[j].real), float(s.coeffs[j].imag))
        for j in order
    ]
    return rows_to_csv(path, ("k", "re", "im"), rows)


def field_to_csv(path, f):
    """Inspection dump, one row per sample point: columns k (sample index), re, im."""
    rows = [(j, float(v.real), float(v.imag)) for j, v in enumerate(f.values)]
    return rows_to_csv(path, ("k", "re", "im"), rows)


def write_trajectory(out_dir, traj):
    """Snapshot binaries plus a manifest.csv (step, t, l2_norm).

    Step numbers come from rounding t / dt, matching the solver's
    recording stride; returns the manifest path.
    """
    os.makedirs(out_dir, exist_ok=True)
    dt = traj.config.dt
    rows = []
    for snap, norm in zip(traj.snapshots, traj.l2_norms):
        step = int(round(snap.t / dt))
        write_field(os.path.join(out_dir, f"snap_{step:08d}.enls"), snap)
        rows.append((step, float(snap.t), float(norm)))
    return rows_to_csv(os.path.join(out_dir, "manifest.csv"), ("step", "t", "l2_norm"), rows)


def read_trajectory(out_dir):
    """Load the snapshots listed in manifest.csv, in step order."""
    manifest = os.path.join(out_dir, "manifest.csv")
    out = []
    with open(manifest, newline="") as f:
        for row in csv.DictReader(f):
            snap = read_field(os.path.join(out_dir, f"snap_{int(row['step']):08d}.enls"))
            out.append((int(row["step"]), float(row["t"]), float(row["l2_norm"]), snap))
    out.sort(key=lambda q: q[0])
    return out
