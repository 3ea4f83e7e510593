"""Gaussian proximity kernels, kernel bandwidth heuristic, bounding boxes.

Two kernel forms appear throughout the package:

- ``kappa(x, s)   = exp(-||x - s||^2 / eps^2)``  -- proximity between a plot
  location and a sample point; drives the point-loss metric.
- ``kappa_tilde(a, b) = exp(-||a - b||^2 / (2 eps^2))`` -- the pairwise weight
  minimized by the subset-selection objective.

Both are symmetric, lie in (0, 1], and satisfy
``kappa_tilde = sqrt(kappa)`` for the same bandwidth.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ZeroExtentError

# Distance (in units of epsilon) beyond which pair weights are treated as
# zero by locality-accelerated paths.  kappa at 4*eps is ~1.12e-7 and
# kappa_tilde is exp(-8) ~ 3.4e-4 per skipped pair.
DEFAULT_CUTOFF_FACTOR = 4.0


@dataclass(frozen=True)
class KernelParams:
    """Kernel bandwidth and the truncation radius for locality-based paths."""

    epsilon: float
    cutoff_radius: float

    def __post_init__(self):
        if not np.isfinite(self.epsilon) or self.epsilon <= 0:
            raise ValueError(f"epsilon must be a finite positive real, got {self.epsilon}")
        if not np.isfinite(self.cutoff_radius) or self.cutoff_radius < self.epsilon:
            raise ValueError(
                f"cutoff_radius must be finite and >= epsilon, got {self.cutoff_radius}"
            )


def _sqdist(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = a - b
    return float(d[0] * d[0] + d[1] * d[1])


def kappa(x, s, params: KernelParams) -> float:
    """Proximity exp(-d^2/eps^2) between plot location ``x`` and point ``s``."""
    return float(np.exp(-_sqdist(x, s) / (params.epsilon**2)))


def kappa_tilde(a, b, params: KernelParams) -> float:
    """Pair weight exp(-d^2/(2 eps^2)) between two sample points."""
    return float(np.exp(-_sqdist(a, b) / (2.0 * params.epsilon**2)))


def kappa_tilde_many(p, pts: np.ndarray, params: KernelParams) -> np.ndarray:
    """Vectorized ``kappa_tilde`` between one point and a (n, 2) array."""
    p = np.asarray(p, dtype=float)
    pts = np.asarray(pts, dtype=float)
    d2 = np.square(pts - p).sum(axis=1)
    return np.exp(-d2 / (2.0 * params.epsilon**2))


def bounding_box(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Axis-aligned bounding box (min corner, max corner) of an (n, 2) array."""
    pts = np.asarray(points, dtype=float)
    return pts.min(axis=0), pts.max(axis=0)


def default_epsilon(points: np.ndarray, cutoff_factor: float = DEFAULT_CUTOFF_FACTOR) -> KernelParams:
    """Bandwidth heuristic: bounding-box diagonal / 100.

    The diagonal over-estimates the max pairwise distance by at most sqrt(2)
    and avoids the O(n^2) exact computation.  Raises ``ZeroExtentError`` when
    all points coincide.
    """
    pts = np.asarray(points, dtype=float)
    if len(pts) < 2:
        raise ZeroExtentError("need at least 2 points to derive a bandwidth")
    lo, hi = bounding_box(pts)
    diag = float(np.hypot(hi[0] - lo[0], hi[1] - lo[1]))
    if diag == 0.0:
        raise ZeroExtentError("all points coincide; specify epsilon explicitly")
    eps = diag / 100.0
    return KernelParams(epsilon=eps, cutoff_radius=cutoff_factor * eps)


def make_params(epsilon: float, cutoff_radius: float | None = None) -> KernelParams:
    """Build ``KernelParams`` with the default 4*eps cutoff when unspecified."""
    if cutoff_radius is None:
        cutoff_radius = DEFAULT_CUTOFF_FACTOR * epsilon
    return KernelParams(epsilon=epsilon, cutoff_radius=cutoff_radius)
