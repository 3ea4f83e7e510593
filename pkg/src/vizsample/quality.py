"""Quality metrics for samples.

- ``surrogate_objective``: the pairwise kappa_tilde sum the optimizer minimizes.
- ``point_loss`` / ``mc_loss``: Monte-Carlo estimate of the visualization loss
  (reciprocal kernel-density coverage), evaluated on seeded points restricted
  to the data domain.
- ``log_loss_ratio``: log10 of a sample's loss relative to the full dataset's,
  computed on the identical Monte-Carlo point set for both sides.
- ``submodular_f`` / ``marginal_gain``: the complementary pair-sum variant and
  its closed-form gains, used as algebraic diagnostics.
- ``bound_check``: the normalized 1/4 additive bound between an approximate
  objective and the optimum.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainRejectionError, EmptySampleError
from .geometry import KernelParams, bounding_box, kappa_tilde_many
from .spatial import GridIndex

_ACCEPT_FLOOR = 1e-6


@dataclass
class QualityReport:
    surrogate_objective: float
    mc_loss_mean: float
    mc_loss_median: float
    log_loss_ratio: float
    n_mc_points: int
    seed: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "surrogate_objective": self.surrogate_objective,
                "mc_loss_mean": self.mc_loss_mean,
                "mc_loss_median": self.mc_loss_median,
                "log_loss_ratio": self.log_loss_ratio,
                "n_mc_points": self.n_mc_points,
                "seed": self.seed,
            }
        )

    def to_text(self) -> str:
        return "\n".join(
            [
                f"surrogate_objective={self.surrogate_objective!r}",
                f"mc_loss_mean={self.mc_loss_mean!r}",
                f"mc_loss_median={self.mc_loss_median!r}",
                f"log_loss_ratio={self.log_loss_ratio!r}",
                f"n_mc_points={self.n_mc_points}",
                f"seed={self.seed}",
            ]
        )


def surrogate_objective(points: np.ndarray, params: KernelParams, chunk: int = 512) -> float:
    """Sum of kappa_tilde over unordered pairs; 0 for a singleton.

    Chunked so large samples do not materialize the full pair matrix.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    n = len(pts)
    if n < 1:
        raise EmptySampleError("objective of an empty sample")
    if n == 1:
        return 0.0
    return _pair_sum(pts, 1.0 / (2.0 * params.epsilon**2), chunk)


def _pair_sum(pts: np.ndarray, inv: float, chunk: int) -> float:
    n = len(pts)
    total = 0.0
    for i0 in range(0, n, chunk):
        i1 = min(i0 + chunk, n)
        block = pts[i0:i1]
        later = pts[i0:]
        d2 = np.square(block[:, None, :] - later[None, :, :]).sum(axis=2)
        w = np.exp(-d2 * inv)
        for r in range(i1 - i0):
            total += float(w[r, r + 1 :].sum())
    return total


def point_loss(x, sample_points: np.ndarray, params: KernelParams) -> float:
    """Quality degradation 1 / sum_i kappa(x, s_i); inf when the sum underflows."""
    return float(point_losses(np.asarray(x, dtype=float).reshape(1, 2), sample_points, params)[0])


def point_losses(xs: np.ndarray, sample_points: np.ndarray, params: KernelParams) -> np.ndarray:
    """Vectorized ``point_loss`` for an (m, 2) array of plot locations."""
    S = np.asarray(sample_points, dtype=float).reshape(-1, 2)
    if len(S) < 1:
        raise EmptySampleError("point loss against an empty sample")
    xs = np.asarray(xs, dtype=float).reshape(-1, 2)
    inv = 1.0 / params.epsilon**2
    out = np.empty(len(xs))
    chunk = max(1, 2_000_000 // max(1, len(S)))
    for i0 in range(0, len(xs), chunk):
        block = xs[i0 : i0 + chunk]
        d2 = np.square(block[:, None, :] - S[None, :, :]).sum(axis=2)
        denom = np.exp(-d2 * inv).sum(axis=1)
        # a vanishing denominator maps to the +inf loss sentinel
        with np.errstate(divide="ignore", over="ignore"):
            out[i0 : i0 + chunk] = 1.0 / denom
    return out


def draw_domain_points(
    data: np.ndarray, n_points: int, seed: int, domain_radius: float
) -> np.ndarray:
    """Seeded uniform points in the data bounding box, kept only when within
    ``domain_radius`` of some dataset point, until ``n_points`` are accepted."""
    if n_points < 1:
        raise ValueError("n_points must be >= 1")
    data = np.asarray(data, dtype=float).reshape(-1, 2)
    lo, hi = bounding_box(data)
    rng = np.random.default_rng(seed)
    index = GridIndex(cell_size=max(domain_radius, 1e-300))
    for i, p in enumerate(data):
        index.insert(i, p)

    accepted: list[np.ndarray] = []
    drawn = 0
    batch = max(256, n_points)
    while len(accepted) < n_points:
        qs = rng.uniform(lo, hi, size=(batch, 2))
        drawn += batch
        for q in qs:
            if index.any_within_radius(q, domain_radius):
                accepted.append(q)
                if len(accepted) == n_points:
                    break
        if drawn >= 1_000_000 and len(accepted) / drawn < _ACCEPT_FLOOR:
            raise DomainRejectionError(
                f"acceptance rate {len(accepted)}/{drawn} below {_ACCEPT_FLOOR}"
            )
    return np.array(accepted)


def _stat(losses: np.ndarray, stat: str) -> float:
    if stat == "median":
        return float(np.median(losses))
    if stat == "mean":
        return float(np.mean(losses))
    raise ValueError(f"unknown statistic {stat!r}")


def mc_loss(
    sample_points: np.ndarray,
    data: np.ndarray,
    params: KernelParams,
    n_points: int = 1000,
    seed: int = 0,
    domain_radius: float | None = None,
    stat: str = "median",
) -> float:
    """Monte-Carlo visualization loss of a sample over the data domain."""
    if domain_radius is None:
        domain_radius = 10.0 * params.epsilon
    xs = draw_domain_points(data, n_points, seed, domain_radius)
    return _stat(point_losses(xs, sample_points, params), stat)


def log_loss_ratio(
    sample_points: np.ndarray,
    data: np.ndarray,
    params: KernelParams,
    n_points: int = 1000,
    seed: int = 0,
    domain_radius: float | None = None,
    stat: str = "median",
) -> float:
    """log10(loss(sample)/loss(data)) on one shared Monte-Carlo point set."""
    if domain_radius is None:
        domain_radius = 10.0 * params.epsilon
    xs = draw_domain_points(data, n_points, seed, domain_radius)
    num = _stat(point_losses(xs, sample_points, params), stat)
    den = _stat(point_losses(xs, data, params), stat)
    return math.log10(num / den)


def evaluate(
    sample_points: np.ndarray,
    data: np.ndarray,
    params: KernelParams,
    n_points: int = 1000,
    seed: int = 0,
    domain_radius: float | None = None,
    stat: str = "median",
) -> QualityReport:
    """Full quality report; numerator and denominator share one MC point set."""
    if domain_radius is None:
        domain_radius = 10.0 * params.epsilon
    xs = draw_domain_points(data, n_points, seed, domain_radius)
    losses = point_losses(xs, sample_points, params)
    base = point_losses(xs, data, params)
    num = _stat(losses, stat)
    den = _stat(base, stat)
    return QualityReport(
        surrogate_objective=surrogate_objective(sample_points, params),
        mc_loss_mean=float(np.mean(losses)),
        mc_loss_median=float(np.median(losses)),
        log_loss_ratio=math.log10(num / den),
        n_mc_points=n_points,
        seed=seed,
    )


def submodular_f(points: np.ndarray, params: KernelParams) -> float:
    """Pair sum of (1 - kappa_tilde); complements the surrogate objective:
    f(S) + objective(S) = |S|(|S|-1)/2."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    n = len(pts)
    if n < 2:
        return 0.0
    total = 0.0
    for i in range(n - 1):
        total += float((1.0 - kappa_tilde_many(pts[i], pts[i + 1 :], params)).sum())
    return total


def marginal_gain(points: np.ndarray, x, params: KernelParams) -> float:
    """Closed-form f(S + {x}) - f(S) = sum_i (1 - kappa_tilde(x, s_i))."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        return 0.0
    return float((1.0 - kappa_tilde_many(x, pts, params)).sum())


def bound_check(approx_objective: float, opt_objective: float, k: int) -> tuple[float, float, bool]:
    """Normalized additive bound: obj(approx)/(K(K-1)) <= 1/4 + obj(opt)/(K(K-1))."""
    if k < 2:
        raise ValueError("bound requires K >= 2")
    norm = 1.0 / (k * (k - 1))
    lhs = norm * approx_objective
    rhs = 0.25 + norm * opt_objective
    return lhs, rhs, lhs <= rhs
