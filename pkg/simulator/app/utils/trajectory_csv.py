"""
CSV codec for trajectories

Layout: `#`-prefixed metadata lines, one header row
`t,mean_1..mean_2N,cov_11,cov_12,...,cov_2N2N` (upper triangle, row-major),
then one row per sample with 17 significant digits.
"""
import csv
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np

from app.models.state import Trajectory, TrajectoryMetadata

_FLOAT_FORMAT = "{:.17g}"


def _cov_name(i: int, j: int, size: int) -> str:
    # cov_11 style stays unambiguous only while indices are single digits
    return f"cov_{i}{j}" if size < 10 else f"cov_{i}_{j}"


def header_columns(n_modes: int) -> List[str]:
    size = 2 * n_modes
    columns = ["t"] + [f"mean_{i}" for i in range(1, size + 1)]
    columns += [_cov_name(i + 1, j + 1, size) for i in range(size) for j in range(i, size)]
    return columns


def save_trajectory(traj: Trajectory, path: Union[str, Path]) -> None:
    """
    Write a trajectory as CSV

    Raises:
        OSError: If the file cannot be written
    """
    meta = traj.metadata
    size = 2 * meta.n_modes
    upper = np.triu_indices(size)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        handle.write(f"# integrator={meta.integrator}\n")
        handle.write(f"# step_size={_FLOAT_FORMAT.format(meta.step_size)}\n")
        handle.write(f"# system_fingerprint={meta.system_fingerprint}\n")
        handle.write(f"# n_modes={meta.n_modes}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header_columns(meta.n_modes))
        for t, mean, cov in zip(traj.times, traj.means, traj.covariances):
            values = [t, *mean, *cov[upper]]
            writer.writerow([_FLOAT_FORMAT.format(v) for v in values])


def _read(path: Union[str, Path]) -> Tuple[Dict[str, str], List[str], List[List[str]]]:
    metadata: Dict[str, str] = {}
    rows: List[List[str]] = []
    header: List[str] = []
    with open(path, newline="", encoding="utf-8") as handle:
        data_lines = []
        for line in handle:
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                metadata[key.strip()] = value.strip()
            elif line.strip():
                data_lines.append(line)
    reader = csv.reader(data_lines)
    for index, row in enumerate(reader):
        if index == 0:
            header = row
        else:
            rows.append(row)
    return metadata, header, rows


def load_trajectory(path: Union[str, Path]) -> Trajectory:
    """
    Read a CSV written by save_trajectory

    Raises:
        ValueError: If the header or a row does not match the layout
    """
    metadata, header, rows = _read(path)
    size = sum(1 for name in header if name.startswith("mean_"))
    if size == 0 or size % 2:
        raise ValueError(f"{path}: header has {size} mean columns; expected 2N")
    n_modes = size // 2
    if header != header_columns(n_modes):
        raise ValueError(f"{path}: unexpected header {header}")

    upper = np.triu_indices(size)
    count = len(rows)
    times = np.empty(count)
    means = np.empty((count, size))
    covs = np.empty((count, size, size))
    for k, row in enumerate(rows):
        if len(row) != len(header):
            raise ValueError(f"{path}: row {k + 1} has {len(row)} columns, expected {len(header)}")
        values = np.array([float(v) for v in row])
        times[k] = values[0]
        means[k] = values[1:1 + size]
        cov = np.zeros((size, size))
        cov[upper] = values[1 + size:]
        covs[k] = cov + np.triu(cov, 1).T

    return Trajectory(
        times=times,
        means=means,
        covariances=covs,
        metadata=TrajectoryMetadata(
            integrator=metadata.get("integrator", "unknown"),
            step_size=float(metadata.get("step_size", "nan")),
            system_fingerprint=metadata.get("system_fingerprint", ""),
            n_modes=n_modes,
        ),
    )
