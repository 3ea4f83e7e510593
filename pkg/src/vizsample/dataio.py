"""CSV ingestion/emission, the sample container, and the synthetic generator.

Datasets are plain float64 arrays of shape (n, 2).  CSV files carry a
``x,y`` header (samples optionally ``x,y,count``) and 17-significant-digit
decimal output so that write/read round-trips are bit identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyFileError, EmptySampleError, ParseError


@dataclass
class Sample:
    """A selected subset: points, their dataset indices, and optional density counts."""

    points: np.ndarray
    source_indices: np.ndarray
    method: str
    counts: np.ndarray | None = None

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float).reshape(-1, 2)
        self.source_indices = np.asarray(self.source_indices, dtype=np.int64)
        if len(self.points) != len(self.source_indices):
            raise ValueError("points and source_indices length mismatch")

    def __len__(self) -> int:
        return len(self.points)


def _parse_float(token: str, lineno: int, col: str) -> float:
    try:
        v = float(token)
    except ValueError:
        raise ParseError(lineno, f"bad {col} value {token!r}") from None
    if not np.isfinite(v):
        raise ParseError(lineno, f"non-finite {col} value {token!r}")
    return v


def read_points_csv(path) -> np.ndarray:
    """Read an ``x,y`` CSV into an (n, 2) array; rejects non-finite values."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise EmptyFileError(f"{path}: empty file")
    header = lines[0].strip()
    if header != "x,y":
        raise ParseError(1, f"expected header 'x,y', got {header!r}")
    pts = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError(lineno, f"expected 2 columns, got {len(parts)}")
        pts.append((_parse_float(parts[0], lineno, "x"), _parse_float(parts[1], lineno, "y")))
    if not pts:
        raise EmptyFileError(f"{path}: no data rows")
    return np.array(pts, dtype=float)


def read_sample_csv(path) -> Sample:
    """Read a sample CSV (``x,y`` or ``x,y,count``) back into a ``Sample``."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise EmptyFileError(f"{path}: empty file")
    header = lines[0].strip()
    if header not in ("x,y", "x,y,count"):
        raise ParseError(1, f"expected header 'x,y' or 'x,y,count', got {header!r}")
    with_counts = header == "x,y,count"
    pts = []
    counts = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != (3 if with_counts else 2):
            raise ParseError(lineno, f"unexpected column count {len(parts)}")
        pts.append((_parse_float(parts[0], lineno, "x"), _parse_float(parts[1], lineno, "y")))
        if with_counts:
            try:
                counts.append(int(parts[2]))
            except ValueError:
                raise ParseError(lineno, f"bad count value {parts[2]!r}") from None
    if not pts:
        raise EmptyFileError(f"{path}: no data rows")
    return Sample(
        points=np.array(pts, dtype=float),
        source_indices=np.arange(len(pts)),
        method="file",
        counts=np.array(counts, dtype=np.int64) if with_counts else None,
    )


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_points_csv(points: np.ndarray, path) -> None:
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("x,y\n")
        for x, y in pts:
            fh.write(f"{_fmt(x)},{_fmt(y)}\n")


def write_sample_csv(sample: Sample, path, with_density: bool = False) -> None:
    """Write a sample, optionally with the density ``count`` column."""
    if with_density and sample.counts is None:
        raise EmptySampleError("with_density requested but the sample carries no counts")
    with open(path, "w", encoding="utf-8") as fh:
        if with_density:
            fh.write("x,y,count\n")
            for (x, y), c in zip(sample.points, sample.counts):
                fh.write(f"{_fmt(x)},{_fmt(y)},{int(c)}\n")
        else:
            fh.write("x,y\n")
            for x, y in sample.points:
                fh.write(f"{_fmt(x)},{_fmt(y)}\n")


def gen_blobs(n: int, blobs: int, seed: int, cov: float = 1.0, spread: float = 10.0) -> np.ndarray:
    """Seeded Gaussian-mixture generator used by the CLI and the test suite.

    Centers are drawn uniformly in [0, spread)^2; each blob is isotropic with
    variance ``cov``.  Points are distributed across blobs as evenly as n allows.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if blobs < 1:
        raise ValueError("blobs must be >= 1")
    rng = np.random.default_rng(seed)
    centers = rng.uniform(0.0, spread, size=(blobs, 2))
    sizes = [n // blobs + (1 if i < n % blobs else 0) for i in range(blobs)]
    parts = [
        c + rng.normal(0.0, np.sqrt(cov), size=(m, 2))
        for c, m in zip(centers, sizes)
        if m > 0
    ]
    return np.vstack(parts)
