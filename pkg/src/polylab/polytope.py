"""The random polytope ``K = absconv(X_1, ..., X_N)``.

``K`` is the image of the l1 ball under the transpose of the sample matrix
``G`` (rows ``X_i``).  Its support function is ``h_K(z) = ||G z||_inf`` and its
Minkowski gauge is the l1-minimization

    gauge(v) = min ||t||_1  subject to  G^T t = v,

solved here by a dense two-phase primal simplex with Bland's rule.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SolverError
from .interp_norm import InterpolationIndex, dual_gauge_exact

PIVOT_TOL = 1e-10
FEAS_TOL = 1e-8
CERT_MAX_DIM = 5


def identity_fixture(n: int) -> np.ndarray:
    return np.eye(n)


def crosspolytope_fixture(n: int) -> np.ndarray:
    """Rows ``±e_i``, so that ``K`` is the unit l1 ball."""
    return np.vstack([np.eye(n), -np.eye(n)])


def _check_dims(G, z):
    G = np.asarray(G, dtype=float)
    z = np.asarray(z, dtype=float)
    if G.ndim != 2:
        raise DomainError("sample matrix must be 2-D")
    if z.shape[-1] != G.shape[1]:
        raise DomainError(f"dimension mismatch: matrix has n={G.shape[1]}, vector has {z.shape[-1]}")
    return G, z


def support_seminorm(G, z):
    """``||G z||_inf``; for a 2-D ``z`` one value per row."""
    G, z = _check_dims(G, z)
    vals = np.max(np.abs(z @ G.T), axis=-1)
    return float(vals) if z.ndim == 1 else vals


def count_large_coords(G, z, threshold: float):
    """Number of rows with ``|<X_i, z>| >= threshold`` (per row of a 2-D ``z``)."""
    G, z = _check_dims(G, z)
    counts = np.count_nonzero(np.abs(z @ G.T) >= threshold, axis=-1)
    return int(counts) if z.ndim == 1 else counts


class LPStatus(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


@dataclass
class GaugeResult:
    value: float
    certificate: np.ndarray | None
    status: LPStatus
    iterations: int = 0


class _Tableau:
    """Dense simplex tableau for ``min c.x, A x = b, x >= 0`` (``b >= 0``)."""

    def __init__(self, A, b, max_iter):
        m, nv = A.shape
        self.m, self.nv = m, nv
        self.T = np.zeros((m + 1, nv + m + 1))
        self.T[:m, :nv] = A
        self.T[:m, nv : nv + m] = np.eye(m)
        self.T[:m, -1] = b
        self.basis = list(range(nv, nv + m))
        self.active = np.ones(nv + m, dtype=bool)
        self.iterations = 0
        self.max_iter = max_iter

    def set_cost(self, c):
        """Load the reduced-cost row for cost vector ``c`` (length nv + m)."""
        self.T[-1, :-1] = c
        self.T[-1, -1] = 0.0
        for i, j in enumerate(self.basis):
            if c[j] != 0:
                self.T[-1] -= c[j] * self.T[i]

    def pivot(self, i, j):
        T = self.T
        T[i] /= T[i, j]
        col = T[:, j].copy()
        col[i] = 0.0
        T -= np.outer(col, T[i])
        self.basis[i] = j

    def run(self):
        T = self.T
        while True:
            d = T[-1, :-1]
            cand = np.flatnonzero((d < -FEAS_TOL * 1e-1) & self.active)
            if cand.size == 0:
                return
            if self.iterations >= self.max_iter:
                raise SolverError(
                    "simplex iteration limit reached",
                    {"iterations": self.iterations, "objective": -T[-1, -1]},
                )
            j = int(cand[0])  # Bland: lowest eligible index enters
            colj = T[:-1, j]
            rows = np.flatnonzero(colj > PIVOT_TOL)
            if rows.size == 0:
                raise SolverError("LP unbounded along an improving ray", {"column": j})
            ratios = T[rows, -1] / colj[rows]
            best = ratios.min()
            tied = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
            # Bland: among tied rows, lowest basic variable index leaves
            i = int(min(tied, key=lambda r: self.basis[r]))
            self.pivot(i, j)
            self.iterations += 1


def solve_standard_lp(A, b, c, max_iter=50_000):
    """Two-phase simplex for ``min c.x`` subject to ``A x = b, x >= 0``.

    Returns ``(status, x, iterations)``; ``x`` is ``None`` when infeasible.
    """
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    c = np.asarray(c, dtype=float)
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1
    m, nv = A.shape
    tab = _Tableau(A, b, max_iter)

    # phase 1: minimize the sum of artificials
    tab.set_cost(np.concatenate([np.zeros(nv), np.ones(m)]))
    tab.run()
    if -tab.T[-1, -1] > FEAS_TOL:
        return LPStatus.INFEASIBLE, None, tab.iterations

    # drive artificials out of the basis; rows with no pivot are redundant
    keep = []
    for i in range(m):
        if tab.basis[i] >= nv:
            row = tab.T[i, :nv]
            js = np.flatnonzero(np.abs(row) > PIVOT_TOL)
            if js.size:
                tab.pivot(i, int(js[np.argmax(np.abs(row[js]))]))
                keep.append(i)
        else:
            keep.append(i)
    tab.active[nv:] = False
    if len(keep) < m:
        rows = keep + [m]
        tab.T = tab.T[rows]
        tab.basis = [tab.basis[i] for i in keep]
        tab.m = len(keep)

    # phase 2
    tab.set_cost(np.concatenate([c, np.zeros(m)]))
    tab.run()

    # recompute basic values from the original data to shed tableau drift
    x = np.zeros(nv)
    basis = np.array(tab.basis)
    B = A[keep][:, basis]
    try:
        xb = np.linalg.solve(B, b[keep])
    except np.linalg.LinAlgError:
        xb = tab.T[:-1, -1]
    if np.any(xb < -FEAS_TOL * (1 + np.abs(b).max(initial=0))):
        xb = tab.T[:-1, -1]
    x[basis] = np.maximum(xb, 0.0)
    return LPStatus.OPTIMAL, x, tab.iterations


def gauge_lp(G, v) -> GaugeResult:
    """Minkowski gauge of ``K`` at ``v`` with an l1-optimal coefficient certificate.

    The coefficient vector is split ``t = t_plus - t_minus`` (``2N`` nonnegative
    variables, ``n`` equality constraints).  ``v`` outside the row span gives an
    infinite gauge with status ``INFEASIBLE``.
    """
    G, v = _check_dims(G, v)
    if v.ndim != 1:
        raise DomainError("gauge_lp expects a single vector")
    N = G.shape[0]
    if not np.any(v):
        return GaugeResult(0.0, np.zeros(N), LPStatus.OPTIMAL, 0)
    A = np.hstack([G.T, -G.T])
    status, x, iters = solve_standard_lp(A, v, np.ones(2 * N))
    if status is LPStatus.INFEASIBLE:
        return GaugeResult(math.inf, None, status, iters)
    t = x[:N] - x[N:]
    resid = float(np.max(np.abs(G.T @ t - v)))
    if resid > FEAS_TOL * (1 + float(np.max(np.abs(v)))):
        raise SolverError("certificate residual above tolerance", {"residual": resid, "iterations": iters})
    return GaugeResult(float(np.sum(np.abs(t))), t, status, iters)


def membership(G, v, c: float) -> bool:
    """Whether ``v`` lies in ``c K``."""
    return gauge_lp(G, v).value <= c + 1e-9


@dataclass(frozen=True)
class ContainmentCertificate:
    c_certified: float
    net_size: int
    eps: float
    lipschitz: float
    net_min: float


def certified_containment(G, idx: InterpolationIndex, net, eps: float, max_dim: int = CERT_MAX_DIM):
    """Level ``c`` with ``c L_r ⊆ K`` guaranteed from an ``eps``-net of the polar sphere.

    Every ``z`` on the polar sphere is within ``eps`` of a net point ``z'``, and
    ``| ||G z||_inf - ||G z'||_inf | <= eps * max_i ||X_i||_2``, so the net minimum
    minus that correction lower-bounds ``h_K`` on the whole polar sphere.
    """
    G = np.asarray(G, dtype=float)
    pts = np.atleast_2d(np.asarray(net, dtype=float))
    if pts.size == 0:
        raise DomainError("net is empty")
    if G.shape[1] != idx.n or pts.shape[1] != idx.n:
        raise DomainError("dimension mismatch between matrix, index and net")
    if idx.n > max_dim:
        raise DomainError(f"certified containment is limited to n <= {max_dim}")
    g = dual_gauge_exact(pts, idx)
    if np.any(np.abs(g - 1) > 1e-9):
        raise DomainError("net points must lie on the polar sphere (dual gauge 1)")
    lip = float(np.max(np.linalg.norm(G, axis=1)))
    net_min = float(np.min(support_seminorm(G, pts)))
    return ContainmentCertificate(max(0.0, net_min - eps * lip), len(pts), float(eps), lip, net_min)
