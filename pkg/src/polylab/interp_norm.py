"""Norms of the interpolation body ``L_r = B_inf^n  ∩  sqrt(r) B_2^n`` and its polar.

The polar norm ``||z||_{L_r°}`` equals the support function
``h_{L_r}(z) = max{<z, w> : ||w||_inf <= 1, ||w||_2 <= sqrt(r)}``.  Its
maximizer has the water-filling form ``w_i = sign(z_i) min(1, |z_i|/mu)``;
``mu`` is read off a breakpoint scan of the sorted ``|z|``.

All functions that take a vector also accept a 2-D array and then act
row-wise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import ConfigurationError, DomainError


@dataclass(frozen=True)
class InterpolationIndex:
    """The pair ``(n, r)`` defining ``L_r`` in dimension ``n``."""

    n: int
    r: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ConfigurationError(f"n must be a positive integer, got {self.n}")
        if not 1 <= self.r <= self.n:
            raise ConfigurationError(f"need 1 <= r <= n, got r={self.r}, n={self.n}")


RIndex = Union[InterpolationIndex, float, int]


class RearrangedVector(NamedTuple):
    values: np.ndarray
    perm: np.ndarray


def _resolve(z, r: RIndex) -> tuple[np.ndarray, float]:
    z = np.asarray(z, dtype=float)
    if z.ndim not in (1, 2) or z.shape[-1] == 0:
        raise DomainError("expected a nonempty vector or a 2-D array of row vectors")
    if isinstance(r, InterpolationIndex):
        if z.shape[-1] != r.n:
            raise DomainError(f"dimension mismatch: vector has {z.shape[-1]} entries, index has n={r.n}")
        return z, float(r.r)
    r = float(r)
    if not 1 <= r <= z.shape[-1]:
        raise DomainError(f"need 1 <= r <= n, got r={r}, n={z.shape[-1]}")
    return z, r


def rearrange_desc(z) -> RearrangedVector:
    """Nonincreasing rearrangement of ``|z|``; ties keep original index order.

    ``values[k] == abs(z)[perm[k]]``.
    """
    a = np.abs(np.asarray(z, dtype=float))
    if a.ndim != 1 or a.size == 0:
        raise DomainError("rearrange_desc expects a nonempty vector")
    perm = np.argsort(-a, kind="stable")
    return RearrangedVector(a[perm], perm)


def primal_gauge(z, r: RIndex):
    """Gauge of ``L_r``: ``max(||z||_inf, ||z||_2 / sqrt(r))``."""
    z, r = _resolve(z, r)
    linf = np.max(np.abs(z), axis=-1)
    l2 = np.sqrt(np.sum(z * z, axis=-1))
    g = np.maximum(linf, l2 / math.sqrt(r))
    return float(g) if z.ndim == 1 else g


def _water_level(a: np.ndarray, r: float):
    """Breakpoint scan on rows of nonincreasing ``a`` having more than ``r`` nonzeros.

    Returns ``(k, mu, value)`` per row.
    """
    # rescale so squares cannot under- or overflow; the norm is homogeneous
    scale = a[:, :1]
    a = a / scale
    kmax = int(math.ceil(r))  # candidates k = 0, ..., kmax-1 (all k < r)
    head = np.zeros((a.shape[0], kmax))
    head[:, 1:] = np.cumsum(a[:, : kmax - 1], axis=1)
    tail = np.cumsum((a * a)[:, ::-1], axis=1)[:, ::-1][:, :kmax]
    slack = r - np.arange(kmax)
    mu = np.sqrt(tail / slack)
    upper = np.concatenate([np.full((a.shape[0], 1), np.inf), a[:, : kmax - 1]], axis=1)
    bad = np.maximum(a[:, :kmax] - mu, 0) + np.maximum(mu - upper, 0)
    strict = bad == 0
    # rounding can push an exact tie (flat vectors) just outside; allow slack
    # relative to the local entry, since deep tails may underflow when squared
    loose = bad <= 1e-12 * a[:, :kmax]
    k = np.where(
        strict.any(axis=1),
        strict.argmax(axis=1),
        np.where(loose.any(axis=1), loose.argmax(axis=1), bad.argmin(axis=1)),
    )
    rows = np.arange(a.shape[0])
    value = head[rows, k] + np.sqrt(slack[k] * tail[rows, k])
    return k, mu[rows, k] * scale[:, 0], value * scale[:, 0]


def dual_gauge_exact(z, r: RIndex):
    """Exact polar norm ``||z||_{L_r°}`` (support function of ``L_r``).

    With ``a`` the nonincreasing rearrangement of ``|z|``, the maximizer
    saturates the top ``k`` coordinates and scales the rest by ``1/mu`` with
    ``mu = sqrt(T_k / (r - k))``, ``T_k = sum_{i>k} a_i^2``.  The right ``k`` is
    the one with ``a_{k+1} <= mu <= a_k``, and the value is
    ``sum_{i<=k} a_i + sqrt((r - k) T_k)``.  If at most ``r`` entries are
    nonzero every coordinate saturates and the value is ``||z||_1``.
    """
    z, r = _resolve(z, r)
    a = -np.sort(-np.abs(np.atleast_2d(z)), axis=1)
    out = a.sum(axis=1)
    todo = np.count_nonzero(a, axis=1) > r
    if np.any(todo):
        out[todo] = _water_level(a[todo], r)[2]
    return float(out[0]) if z.ndim == 1 else out


def water_filling_maximizer(z, r: RIndex) -> np.ndarray:
    """A point ``w`` of ``L_r`` attaining ``<z, w> = ||z||_{L_r°}``."""
    z, r = _resolve(z, r)
    if z.ndim != 1:
        raise DomainError("water_filling_maximizer expects a single vector")
    a = np.abs(z)
    if np.count_nonzero(a) <= r:
        return np.sign(z)
    desc = np.sort(a)[::-1]
    k = int(_water_level(desc[None, :], r)[0][0])
    # recompute mu with the tail rescaled on its own, so tiny tails do not underflow
    tail = desc[k:]
    top = tail[0]
    mu = top * math.sqrt(float(np.sum((tail / top) ** 2)) / (r - k))
    return np.sign(z) * np.minimum(1.0, a / mu)


def holmstedt_approx(z, r: RIndex):
    """Sum of the ``r`` largest ``|z_i|`` plus ``sqrt(r)`` times the tail l2 norm.

    Dominates :func:`dual_gauge_exact` and exceeds it by at most a constant
    factor.  ``r`` must be an integer.
    """
    r_val = r.r if isinstance(r, InterpolationIndex) else r
    if float(r_val) != int(r_val):
        raise ConfigurationError(f"holmstedt_approx needs an integer r, got {r_val}")
    z, rf = _resolve(z, r)
    k = int(rf)
    a = -np.sort(-np.abs(np.atleast_2d(z)), axis=1)
    val = a[:, :k].sum(axis=1) + math.sqrt(k) * np.sqrt(np.sum(a[:, k:] ** 2, axis=1))
    return float(val[0]) if z.ndim == 1 else val


def normalize_to_dual_sphere(z, r: RIndex) -> np.ndarray:
    """Rescale ``z`` (or each row) onto the boundary of ``L_r°``."""
    z, r = _resolve(z, r)
    g = np.asarray(dual_gauge_exact(z, r))
    if np.any(g == 0):
        raise DomainError("cannot normalize the zero vector")
    return z / (g if z.ndim == 1 else g[:, None])
