"""Exact combinatorics behind the interlacing cancellation effect.

The phase attached to an arrangement of r zeros and q ones is
e^{-2 pi i K / (r+1)}, where K counts, for every one, the zeros strictly to
its right.  Summed over all C(r+q, q) arrangements the phases cancel exactly
for 1 <= q <= r; equivalently the polynomial
F(z) = prod_{j=1}^{r+q} (1 + z e^{-2 pi i (j-1)/(r+1)}) has no z^q term.
Everything here is enumerated exhaustively (at most C(16,8) = 12870 cases).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

__all__ = ["Sequence01", "k_statistic", "phase_sum", "f_poly_coeffs"]


@dataclass(frozen=True)
class Sequence01:
    """A 0/1 arrangement; zeros play one species, ones the other."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must contain only 0 and 1")


def k_statistic(seq: Sequence01) -> int:
    """Sum over ones of the number of zeros strictly to their right."""
    bits = seq.bits
    total = 0
    zeros_right = 0
    for b in reversed(bits):
        if b == 0:
            zeros_right += 1
        else:
            total += zeros_right
    return total


def phase_sum(r: int, q: int) -> complex:
    """Sum of e^{-2 pi i K(A)/(r+1)} over all arrangements of r zeros, q ones.

    Zero (to 1e-12 roundoff) whenever 1 <= q <= r.
    """
    if r < 1:
        raise ValueError("r must be a positive integer")
    if not (1 <= q <= r):
        raise ValueError(f"q must satisfy 1 <= q <= r, got q={q}, r={r}")
    total = 0.0 + 0.0j
    for ones in combinations(range(r + q), q):
        bits = [0] * (r + q)
        for i in ones:
            bits[i] = 1
        k = k_statistic(Sequence01(tuple(bits)))
        total += cmath.exp(-2j * math.pi * k / (r + 1))
    return total


def f_poly_coeffs(r: int, q: int) -> np.ndarray:
    """Coefficients (degree 0..r+q) of F(z) = prod_{j=1}^{r+q} (1 + z w^{j-1}),
    w = e^{-2 pi i/(r+1)}.  The z^q coefficient vanishes for 1 <= q <= r."""
    if r < 1 or q < 1:
        raise ValueError("r and q must be positive integers")
    coeffs = np.zeros(r + q + 1, dtype=complex)
    coeffs[0] = 1.0
    for j in range(1, r + q + 1):
        root = cmath.exp(-2j * math.pi * (j - 1) / (r + 1))
        coeffs[1 : j + 1] = coeffs[1 : j + 1] + root * coeffs[0:j]
    return coeffs
