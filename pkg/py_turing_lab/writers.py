"""
Output files

CSV tables, 16-bit portable graymaps with a min/max sidecar, and plain-text
matrix dumps. Every float is written with `repr`, so values read back exactly.
"""

__all__ = [
    "write_csv",
    "write_trajectory_csv",
    "write_dispersion_csv",
    "write_sweep_csv",
    "write_pgm",
    "read_pgm",
    "write_matrix",
    "snapshot_basename",
]

import csv
import logging
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from py_turing_lab.grid import Field
from py_turing_lab.helpers import format_float
from py_turing_lab.results import DispersionCurve, SweepRecord, Trajectory

py_turing_lab_logger = logging.getLogger("py_turing_lab")

PGM_MAXVAL = 65535
TRAJECTORY_HEADER = ["t", "u1", "u2", "u3"]
DISPERSION_HEADER = ["x", "re_lambda_max"]
SWEEP_HEADER = [
    "param",
    "u1_min",
    "u1_max",
    "amplitude",
    "spot_count",
    "classification",
]


def _cell(value) -> str:
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(value) for value in row])
    py_turing_lab_logger.debug("Wrote %s", path)
    return path


def write_trajectory_csv(traj: Trajectory, path: Path) -> Path:
    return write_csv(path, TRAJECTORY_HEADER, traj.to_rows())


def write_dispersion_csv(curve: DispersionCurve, path: Path) -> Path:
    return write_csv(path, DISPERSION_HEADER, curve.to_rows())


def write_sweep_csv(records: Sequence[SweepRecord], path: Path) -> Path:
    return write_csv(path, SWEEP_HEADER, [record.to_row() for record in records])


def _scaled(values: np.ndarray) -> tuple[np.ndarray, float, float]:
    low, high = float(values.min()), float(values.max())
    if high > low:
        levels = np.rint((values - low) / (high - low) * PGM_MAXVAL)
    else:
        levels = np.zeros_like(values)
    return levels.astype(np.uint16), low, high


def write_pgm(f: Field, path: Path, binary: bool = True) -> Path:
    """
    Map the frame's [min, max] affinely onto 0..65535 and write P5 (binary,
    big-endian) or P2 (ASCII). Image rows run along y, columns along x. The
    sidecar `<path>.minmax` records the range for inversion.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    levels, low, high = _scaled(f.values)
    image = levels.T
    height, width = image.shape
    header = f"{'P5' if binary else 'P2'}\n{width} {height}\n{PGM_MAXVAL}\n"
    if binary:
        path.write_bytes(header.encode("ascii") + image.astype(">u2").tobytes())
    else:
        body = "\n".join(" ".join(str(v) for v in row) for row in image)
        path.write_text(header + body + "\n", encoding="ascii")
    sidecar = path.with_name(path.name + ".minmax")
    sidecar.write_text(
        f"min = {format_float(low)}\nmax = {format_float(high)}\n", encoding="ascii"
    )
    return path


def read_pgm(path: Path) -> np.ndarray:
    """
    Read a graymap written by `write_pgm` back to physical values shaped
    (nx, ny), using its sidecar range.
    """
    path = Path(path)
    data = path.read_bytes()
    magic, width, height, maxval, offset = _pgm_header(data)
    if magic == b"P5":
        image = np.frombuffer(data[offset:], dtype=">u2", count=width * height)
    else:
        image = np.array([int(token) for token in data[offset:].split()])
    image = image.reshape(height, width).astype(float)
    sidecar = {}
    for line in path.with_name(path.name + ".minmax").read_text().splitlines():
        key, _, value = line.partition("=")
        sidecar[key.strip()] = float(value)
    low, high = sidecar["min"], sidecar["max"]
    return (low + image / maxval * (high - low)).T


def _pgm_header(data: bytes):
    tokens, position, end = [], 0, len(data)
    while len(tokens) < 4:
        while position < end and data[position : position + 1].isspace():
            position += 1
        start = position
        while position < end and not data[position : position + 1].isspace():
            position += 1
        if position == end:
            raise ValueError("truncated graymap header")
        tokens.append(data[start:position])
    # exactly one whitespace byte separates the header from the raster
    return tokens[0], int(tokens[1]), int(tokens[2]), int(tokens[3]), position + 1


def write_matrix(f: Field, path: Path) -> Path:
    """Row-major, space-separated, one row per x index, full precision"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, f.values, fmt="%.17g", delimiter=" ")
    return path


def snapshot_basename(species: int, step: int) -> str:
    return f"u{species + 1}_step{step:08d}"
