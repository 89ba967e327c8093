"""Closed-form and exact-enumeration reference values used to judge Monte Carlo output."""
from __future__ import annotations

import math

import numpy as np
from scipy import special, stats


def gaussian_abs_tail(t, sigma=1.0):
    """``Pr(|sigma g| >= t)`` for standard Gaussian ``g``."""
    return special.erfc(np.asarray(t, dtype=float) / (sigma * math.sqrt(2)))


def gaussian_flat_tail(c_prime, r):
    """Tail ``Pr(|<z, X>| >= c')`` for Gaussian ``X`` and ``z = 1_n / sqrt(r n)``.

    ``<z, X>`` is exactly ``N(0, 1/r)``, so this is ``2 (1 - Phi(c' sqrt(r)))``.
    """
    return gaussian_abs_tail(np.asarray(c_prime) * np.sqrt(np.asarray(r, dtype=float)))


def rademacher_tail_exact(z, t: float, decimals: int = 12) -> float:
    """``Pr(|sum_j z_j eps_j| >= t)`` by convolving the two-point laws one at a time.

    Sums are merged after rounding to ``decimals`` places, so vectors with
    repeated entries stay polynomial; general vectors cost up to ``2**n``.
    """
    dist = {0.0: 1.0}
    for zj in np.asarray(z, dtype=float):
        nxt: dict = {}
        for s, p in dist.items():
            for v in (round(s + zj, decimals), round(s - zj, decimals)):
                nxt[v] = nxt.get(v, 0.0) + 0.5 * p
        dist = nxt
    return math.fsum(p for s, p in dist.items() if abs(s) >= t - 10.0 ** (-decimals + 2))


def binomial_at_least(N: int, p: float, k: float) -> float:
    """``Pr(Bin(N, p) >= k)`` for real ``k``."""
    return float(stats.binom.sf(math.ceil(k) - 1, N, p))


def gaussian_abs_mean() -> float:
    """``E|g| = sqrt(2/pi)``."""
    return math.sqrt(2 / math.pi)


def flat_dual_norm(n: int, r: float) -> float:
    """Polar norm of the all-ones vector, ``sqrt(r n)``."""
    return math.sqrt(r * n)
