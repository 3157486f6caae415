"""CSV emission.  Every file starts with a header row naming columns and units."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .combs import SampledDensity


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_rows(path, header, rows) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])
    return path


def read_rows(path):
    with Path(path).open(newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        return header, [row for row in r]


def write_density(path, dens: SampledDensity) -> Path:
    name = "detuning" if dens.axis == "detuning" else "delay"
    return write_rows(path, [f"{name} [{dens.unit}]", "density [normalized]"],
                      zip(dens.coordinates, dens.density))


def read_density(path) -> SampledDensity:
    header, rows = read_rows(path)
    axis, unit = header[0].split(" [")
    data = np.array(rows, dtype=float)
    return SampledDensity(axis, data[:, 0], data[:, 1], unit.rstrip("]"))


def write_sweep(path, sweep, unit_label: str = "bins") -> Path:
    return write_rows(path, [f"N [{unit_label}]", "capacity [bits/photon]"], sweep)


def write_counts(path, counts: np.ndarray) -> Path:
    """Sparse (sent, decoded, count) triples of a joint count table."""
    sent, dec = np.nonzero(counts)
    return write_rows(path, ["sent [symbol]", "decoded [symbol]", "count [trials]"],
                      zip(sent, dec, counts[sent, dec]))


def read_counts(path, size: int) -> np.ndarray:
    _, rows = read_rows(path)
    counts = np.zeros((size, size), dtype=np.int64)
    for s, d, c in rows:
        counts[int(s), int(d)] = int(c)
    return counts


def write_table(path, rows) -> Path:
    return write_rows(path, ["scheme [label]", "capacity [bits/photon]", "loss [dB]", "origin [label]"],
                      [(r.scheme, r.capacity_bits, "" if r.loss_db is None else r.loss_db, r.origin)
                       for r in rows])
