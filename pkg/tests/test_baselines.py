import numpy as np
import pytest

from vizsample.baselines import (
    StratifiedConfig,
    balanced_allocation,
    reservoir_sample,
    stratified_sample,
)
from vizsample.errors import EmptyDatasetError, InsufficientDataError, KTooLargeError


def waterfill_oracle(counts, k):
    """Unit-increment allocation: each unit goes to the non-full bin with the
    smallest quota, ties to the lowest index."""
    quotas = [0] * len(counts)
    for _ in range(k):
        open_bins = [i for i in range(len(counts)) if quotas[i] < counts[i]]
        best = min(open_bins, key=lambda i: (quotas[i], i))
        quotas[best] += 1
    return quotas


def test_reservoir_returns_all_when_k_covers_n():
    data = np.arange(10, dtype=float).reshape(5, 2)
    assert sorted(reservoir_sample(data, 5, seed=1).source_indices) == list(range(5))
    assert sorted(reservoir_sample(data, 9, seed=1).source_indices) == list(range(5))


def test_reservoir_empty_dataset():
    with pytest.raises(EmptyDatasetError):
        reservoir_sample(np.empty((0, 2)), 3)


def test_reservoir_deterministic_and_roughly_uniform():
    data = np.arange(20, dtype=float).reshape(10, 2)
    a = reservoir_sample(data, 3, seed=42).source_indices
    b = reservoir_sample(data, 3, seed=42).source_indices
    assert list(a) == list(b)
    freq = np.zeros(10)
    runs = 2000
    for seed in range(runs):
        freq[reservoir_sample(data, 3, seed=seed).source_indices] += 1
    freq /= runs
    assert np.all(np.abs(freq - 0.3) < 0.05)


def test_balanced_allocation_worked_example():
    assert balanced_allocation([1000, 10], 100) == [90, 10]


def test_balanced_allocation_symmetry_and_capacity():
    assert balanced_allocation([50, 50, 50], 90) == [30, 30, 30]
    assert balanced_allocation([5, 100, 100], 55) == [5, 25, 25]


def test_balanced_allocation_insufficient():
    with pytest.raises(InsufficientDataError):
        balanced_allocation([3, 4], 8)


def test_balanced_allocation_matches_unit_increment_oracle():
    rng = np.random.default_rng(7)
    for _ in range(100):
        nbins = int(rng.integers(1, 8))
        counts = [int(c) for c in rng.integers(0, 40, size=nbins)]
        total = sum(counts)
        if total == 0:
            continue
        k = int(rng.integers(1, total + 1))
        got = balanced_allocation(counts, k)
        assert got == waterfill_oracle(counts, k)
        assert sum(got) == k
        assert all(q <= c for q, c in zip(got, counts))
        uncapped = [q for q, c in zip(got, counts) if q < c]
        if uncapped:
            assert max(uncapped) - min(uncapped) <= 1


def test_stratified_single_cell_reduces_to_reservoir():
    rng = np.random.default_rng(3)
    data = rng.uniform(0, 1, size=(50, 2))
    strat = stratified_sample(data, StratifiedConfig(grid_cells_per_axis=1, k=10, seed=5))
    res = reservoir_sample(data, 10, seed=5)
    assert sorted(strat.source_indices) == sorted(res.source_indices)


def test_stratified_four_equal_cells():
    rng = np.random.default_rng(9)
    # 25 points well inside each quadrant of the unit square
    blocks = []
    for cx, cy in [(0.25, 0.25), (0.75, 0.25), (0.25, 0.75), (0.75, 0.75)]:
        blocks.append(np.array([cx, cy]) + rng.uniform(-0.2, 0.2, size=(25, 2)))
    data = np.vstack(blocks)
    sample = stratified_sample(data, StratifiedConfig(grid_cells_per_axis=2, k=8, seed=0))
    assert len(sample) == 8
    quadrant = (data[sample.source_indices] > 0.5).astype(int)
    labels = quadrant[:, 0] + 2 * quadrant[:, 1]
    assert np.bincount(labels, minlength=4).tolist() == [2, 2, 2, 2]


def test_stratified_skewed_matches_waterfill_quotas():
    rng = np.random.default_rng(13)
    data = rng.normal(0, 1, size=(3000, 2))
    g, k = 10, 100
    sample = stratified_sample(data, StratifiedConfig(grid_cells_per_axis=g, k=k, seed=2))
    assert len(sample) == k

    lo = data.min(axis=0)
    hi = data.max(axis=0)
    wx, wy = (hi - lo) / g

    def cell(p):
        ix = min(int((p[0] - lo[0]) / wx), g - 1)
        iy = min(int((p[1] - lo[1]) / wy), g - 1)
        return iy * g + ix

    counts = np.bincount([cell(p) for p in data], minlength=g * g)
    nonempty = np.flatnonzero(counts)
    quotas = waterfill_oracle(counts[nonempty].tolist(), k)
    got = np.bincount([cell(p) for p in data[sample.source_indices]], minlength=g * g)
    assert got[nonempty].tolist() == quotas
    # every charged cell actually contains its sampled points
    assert got.sum() == k


def test_stratified_k_too_large():
    with pytest.raises(KTooLargeError):
        stratified_sample(np.zeros((3, 2)), StratifiedConfig(grid_cells_per_axis=2, k=4))
