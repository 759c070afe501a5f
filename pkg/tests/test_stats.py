"""Normalization, moments, KS distance, and histogram tests."""

import math
import random

import numpy as np
import pytest

from modsymdist.cosets import volume
from modsymdist.modsym import samples_from_batch
from modsymdist.stats import (
    gaussian_moment,
    histogram,
    ks_distance,
    moments,
    moments_from_arrays,
    normal_cdf,
    normalize,
    normalize_arrays,
)

VOL11 = 4 * math.pi


def test_normalize_drops_identity(batch11_1e4):
    samples = samples_from_batch(batch11_1e4)
    kept, dropped = normalize(samples, 0.0469, VOL11)
    assert dropped == 1  # only the identity coset has norm <= 1 at z = i
    assert len(kept) == len(samples) - 1


def test_normalize_zero_and_scaling():
    vals = np.array([0j, 1 + 1j])
    nrms = np.array([100.0, 100.0])
    x1, y1, _, _ = normalize_arrays(vals, nrms, 1.0, VOL11)
    assert x1[0] == 0 and y1[0] == 0
    x2, y2, _, _ = normalize_arrays(vals, nrms, 4.0, VOL11)  # 4x norm -> halves
    assert x2[1] == pytest.approx(x1[1] / 2, rel=1e-15)
    assert y2[1] == pytest.approx(y1[1] / 2, rel=1e-15)


def test_gaussian_moment_values():
    assert gaussian_moment(0, 0) == 1
    assert gaussian_moment(2, 0) == 1
    assert gaussian_moment(4, 0) == 3
    assert gaussian_moment(2, 2) == 1
    assert gaussian_moment(4, 2) == 3
    assert gaussian_moment(6, 0) == 15
    assert gaussian_moment(3, 0) == 0
    assert gaussian_moment(1, 1) == 0


def test_moments_basics_and_permutation_invariance():
    rng = np.random.default_rng(3)
    x = rng.normal(size=4000)
    y = rng.normal(size=4000)
    rep = moments_from_arrays(x, y, 4, 4)
    assert rep.pairs[(0, 0)] == 1.0
    perm = rng.permutation(4000)
    rep2 = moments_from_arrays(x[perm], y[perm], 4, 4)
    assert rep.pairs == rep2.pairs  # exact: compensated summation
    assert rep.gaussian_limit[(4, 0)] == 3
    assert rep.pairs[(2, 0)] == pytest.approx(1.0, abs=0.1)


def test_moments_empty_stream_rejected():
    with pytest.raises(ValueError):
        moments_from_arrays(np.zeros(0), np.zeros(0), 2, 2)
    with pytest.raises(ValueError):
        moments([], 2, 2)


def test_moments_match_gaussian_on_synthetic():
    rng = np.random.default_rng(11)
    n = 200000
    rep = moments_from_arrays(rng.normal(size=n), rng.normal(size=n), 4, 4)
    for key, lim in rep.gaussian_limit.items():
        assert rep.pairs[key] == pytest.approx(lim, abs=0.08)


def test_ks_distance_point_mass():
    assert ks_distance(np.zeros(100)) == pytest.approx(0.5, abs=1e-12)


def test_ks_distance_seeded_normal_below_002():
    draws = np.random.default_rng(0).normal(size=10 ** 4)
    assert ks_distance(draws) < 0.02  # Monte Carlo oracle, seeded


def test_ks_distance_shifted_to_one():
    draws = np.random.default_rng(0).normal(size=2000) + 10.0
    assert ks_distance(draws) > 0.999


def test_normal_cdf_symmetry():
    assert normal_cdf(0.0) == 0.5
    assert normal_cdf(1.0) + normal_cdf(-1.0) == pytest.approx(1.0, abs=1e-15)
    assert normal_cdf(1.0) == pytest.approx(0.8413447460685429, abs=1e-12)


def test_histogram_single_bin_counts_everything():
    v = np.random.default_rng(1).normal(size=500)
    rows = histogram(v, 1, (-1e9, 1e9))
    assert rows[0][2] == 500
    assert rows[0][3] == pytest.approx(500.0, abs=1e-6)


def test_histogram_symmetric_masses():
    v = np.random.default_rng(2).normal(size=1000)
    rows = histogram(v, 8, (-4, 4))
    for k in range(4):
        assert rows[k][3] == pytest.approx(rows[7 - k][3], rel=1e-9)
    assert sum(r[2] for r in rows) <= 1000
    total_mass = sum(r[3] for r in rows)
    assert total_mass == pytest.approx(1000 * (normal_cdf(4) - normal_cdf(-4)), rel=1e-12)


def test_histogram_validation():
    with pytest.raises(ValueError):
        histogram(np.zeros(3), 0, (-1, 1))
    with pytest.raises(ValueError):
        histogram(np.zeros(3), 4, (1, -1))


def test_normalized_sample_validation():
    from modsymdist.stats import NormalizedSample

    with pytest.raises(ValueError):
        NormalizedSample(0.0, 0.0, 1.0)  # norm must exceed 1
    with pytest.raises(ValueError):
        NormalizedSample(math.nan, 0.0, 2.0)
