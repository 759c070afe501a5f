"""Cosets of Gamma_infty \\ Gamma_0(N) ordered by the norm |cz+d|^2.

Each coset is pinned down by the lower row (c, d) of any representative,
up to the sign identification (c, d) ~ (-c, -d); we canonicalize to c > 0,
with (0, 1) for the identity coset.  At z = i the ordering norm is the
integer c^2 + d^2, so enumeration is exact; for general z bounds are
computed with a safety margin and every candidate's norm is re-checked.
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Coset:
    """Canonical representative (c, d) of a coset, with its norm at the working point."""

    c: int
    d: int
    norm: float

    def __post_init__(self):
        if self.c < 0 or (self.c == 0 and self.d != 1):
            raise ValueError(f"non-canonical coset ({self.c},{self.d})")
        if math.gcd(self.c, self.d) != 1:
            raise ValueError(f"({self.c},{self.d}) not coprime")
        if self.norm <= 0:
            raise ValueError("norm must be positive")


@dataclass(frozen=True)
class GammaMatrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("determinant must be 1")

    def __matmul__(self, other):
        return GammaMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self):
        return GammaMatrix(self.d, -self.b, -self.c, self.a)


def volume(N):
    """Hyperbolic volume of Gamma_0(N) \\ H: (pi/3) * N * prod_{p|N} (1 + 1/p)."""
    N = int(N)
    if N < 1:
        raise ValueError("N must be a positive integer")
    index = N
    m = N
    p = 2
    while p * p <= m:
        if m % p == 0:
            index = index // p * (p + 1)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        index = index // m * (m + 1)
    return (math.pi / 3) * index


def coset_arrays(N, T, z=1j):
    """Per-c arrays (c, ds, norms) of all non-identity cosets with |cz+d|^2 <= T.

    Yields tuples in ascending c; within each c the d values are ascending.
    The identity coset (0, 1) with norm 1 is *not* included here.
    """
    N = int(N)
    z = complex(z)
    x, y = z.real, z.imag
    if y <= 0:
        raise ValueError("z must lie in the upper half-plane")
    if T < 1:
        raise ValueError("T must be >= 1")
    c = N
    while (c * y) ** 2 <= T:
        half = math.sqrt(max(T - (c * y) ** 2, 0.0))
        lo = math.floor(-c * x - half) - 1
        hi = math.ceil(-c * x + half) + 1
        ds = np.arange(lo, hi + 1, dtype=np.int64)
        norms = (c * x + ds) ** 2 + (c * y) ** 2
        keep = (norms <= T) & (np.gcd(ds % c, c) == 1)
        if np.any(keep):
            yield c, ds[keep], norms[keep]
        c += N


def enumerate_cosets(N, T, z=1j):
    """Stream of Coset with norm <= T, identity first, then by (c, d)."""
    if complex(z).imag <= 0:
        raise ValueError("z must lie in the upper half-plane")
    if T < 1:
        raise ValueError("T must be >= 1")
    yield Coset(0, 1, 1.0)  # |0*z+1|^2 = 1
    for c, ds, norms in coset_arrays(N, T, z):
        for d, nrm in zip(ds.tolist(), norms.tolist()):
            yield Coset(int(c), int(d), float(nrm))


def coset_count(N, T, z=1j):
    """#(Gamma_infty \\ Gamma)^T including the identity coset."""
    return 1 + sum(len(ds) for _, ds, _ in coset_arrays(N, T, z))


def lift(coset):
    """Canonical lift to Gamma: bottom row (c, d), 0 <= a < c, identity for (0, 1)."""
    if coset.c == 0:
        return GammaMatrix(1, 0, 0, 1)
    a = pow(coset.d, -1, coset.c)
    b = (a * coset.d - 1) // coset.c
    return GammaMatrix(a, b, coset.c, coset.d)
