"""Normalized modular symbols, their moments, and Gaussian comparison.

The normalization is

    x + i y = sqrt(vol / (8 pi^2 ||f||^2)) * <gamma, f> / sqrt(log N_z(gamma)),

samples with N_z(gamma) <= 1 being dropped (only finitely many exist; at
z = i just the identity).  The empirical moments

    M_{n,m}(X_T) = mean of x^n y^m over retained samples with N_z <= T

converge to the moments of the standard bivariate Gaussian with correlation
zero: n!/((n/2)! 2^{n/2}) * m!/((m/2)! 2^{m/2}) for even n, m and 0 otherwise.
Moment accumulation uses exact compensated summation, so the reported values
are permutation-invariant bit for bit.
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class NormalizedSample:
    x: float
    y: float
    norm: float

    def __post_init__(self):
        if not (self.norm > 1):
            raise ValueError("normalized samples require N_z(gamma) > 1")
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("non-finite normalized sample")


@dataclass(frozen=True)
class MomentReport:
    T: float
    pairs: dict
    gaussian_limit: dict


def tilde_factor(norm_f_sq, vol):
    if norm_f_sq <= 0 or vol <= 0:
        raise ValueError("norm_f_sq and vol must be positive")
    return math.sqrt(vol / (8 * math.pi ** 2 * norm_f_sq))


def normalize_arrays(values, norms, norm_f_sq, vol):
    """Vector form of normalize(): returns (x, y, kept_norms, dropped_count)."""
    values = np.asarray(values, dtype=np.complex128)
    norms = np.asarray(norms, dtype=np.float64)
    keep = norms > 1.0
    dropped = int(len(norms) - keep.sum())
    w = tilde_factor(norm_f_sq, vol) * values[keep] / np.sqrt(np.log(norms[keep]))
    return w.real, w.imag, norms[keep], dropped


def normalize(samples, norm_f_sq, vol):
    """Stream of NormalizedSample from SymbolSample objects; drops norm <= 1.

    Returns (list of NormalizedSample, dropped_count).
    """
    vals = np.array([s.value for s in samples], dtype=np.complex128)
    nrms = np.array([s.coset.norm for s in samples], dtype=np.float64)
    x, y, kept, dropped = normalize_arrays(vals, nrms, norm_f_sq, vol)
    out = [NormalizedSample(float(a), float(b), float(n)) for a, b, n in zip(x, y, kept)]
    return out, dropped


def gaussian_moment(n, m):
    """E[X^n Y^m] for independent standard Gaussians X, Y."""
    if n < 0 or m < 0:
        raise ValueError("moment indices must be nonnegative")
    if n % 2 or m % 2:
        return 0.0
    half = lambda j: math.factorial(j) / (math.factorial(j // 2) * 2 ** (j // 2))
    return half(n) * half(m)


def moments_from_arrays(x, y, n_max, m_max, T=None):
    """Exact sample moments M_{n,m} for 0 <= n <= n_max, 0 <= m <= m_max."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if len(x) == 0:
        raise ValueError("empty sample stream")
    xp = [np.ones_like(x)]
    yp = [np.ones_like(y)]
    for _ in range(n_max):
        xp.append(xp[-1] * x)
    for _ in range(m_max):
        yp.append(yp[-1] * y)
    k = len(x)
    pairs = {}
    for i in range(n_max + 1):
        for j in range(m_max + 1):
            pairs[(i, j)] = math.fsum(xp[i] * yp[j]) / k
    limits = {key: gaussian_moment(*key) for key in pairs}
    return MomentReport(T=float(T) if T is not None else math.inf, pairs=pairs,
                        gaussian_limit=limits)


def moments(samples, n_max, m_max, T=None):
    """Moments of a stream of NormalizedSample."""
    samples = list(samples)
    if not samples:
        raise ValueError("empty sample stream")
    x = np.array([s.x for s in samples])
    y = np.array([s.y for s in samples])
    return moments_from_arrays(x, y, n_max, m_max, T=T)


def normal_cdf(x):
    """Standard normal CDF via the double-precision error function."""
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def ks_distance(values):
    """sup |F_empirical - Phi| against the standard normal CDF."""
    v = np.sort(np.asarray(values, dtype=np.float64))
    if len(v) == 0:
        raise ValueError("empty sample")
    n = len(v)
    cdf = 0.5 * (1.0 + np.array([math.erf(t / math.sqrt(2.0)) for t in v]))
    i = np.arange(1, n + 1)
    return float(max(np.max(cdf - (i - 1) / n), np.max(i / n - cdf)))


def histogram(values, bin_count, value_range):
    """Per-bin (lo, hi, count, expected) against the standard Gaussian.

    expected = sample_size * (Phi(hi) - Phi(lo)); expected masses over all
    bins sum to sample_size * Phi-mass of the range.
    """
    if bin_count < 1:
        raise ValueError("bin_count must be >= 1")
    lo, hi = float(value_range[0]), float(value_range[1])
    if not hi > lo:
        raise ValueError("empty range")
    v = np.asarray(values, dtype=np.float64)
    counts, edges = np.histogram(v, bins=bin_count, range=(lo, hi))
    out = []
    for k in range(bin_count):
        expected = len(v) * (normal_cdf(edges[k + 1]) - normal_cdf(edges[k]))
        out.append((float(edges[k]), float(edges[k + 1]), int(counts[k]), float(expected)))
    return out
