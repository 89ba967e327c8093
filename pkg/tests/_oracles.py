"""Independent reference implementations used only by the tests."""
import itertools
import math

import numpy as np
from scipy.optimize import linprog


def gauge_bruteforce(G, v):
    """min ||t||_1 over G^T t = v by enumerating every size-rank row subset.

    An optimal basic solution is supported on linearly independent rows, so
    it is the unique solution of one of the square systems tried here.
    """
    G = np.asarray(G, dtype=float)
    v = np.asarray(v, dtype=float)
    N, n = G.shape
    if not np.any(v):
        return 0.0
    subsets = np.array(list(itertools.combinations(range(N), n)))
    mats = np.transpose(G[subsets], (0, 2, 1))  # (S, n, n) = G_S^T
    det = np.linalg.det(mats)
    good = np.abs(det) > 1e-10
    if not np.any(good):
        return math.inf
    t = np.linalg.solve(mats[good], np.broadcast_to(v, (int(good.sum()), n))[..., None])[..., 0]
    ok = np.max(np.abs(np.einsum("sij,sj->si", mats[good], t) - v), axis=1) <= 1e-9 * (1 + np.abs(v).max())
    return float(np.min(np.abs(t[ok]).sum(axis=1)))


def gauge_highs(G, v):
    """The same LP through scipy's HiGHS."""
    G = np.asarray(G, dtype=float)
    N = G.shape[0]
    res = linprog(np.ones(2 * N), A_eq=np.hstack([G.T, -G.T]), b_eq=v, bounds=(0, None), method="highs")
    return res.fun if res.status == 0 else math.inf


def polar_support_highs(G, v):
    """max <v, z> subject to ||G z||_inf <= 1 (the LP dual of the gauge)."""
    G = np.asarray(G, dtype=float)
    n = G.shape[1]
    res = linprog(-np.asarray(v, float), A_ub=np.vstack([G, -G]), b_ub=np.ones(2 * len(G)),
                  bounds=(None, None), method="highs")
    return -res.fun


def dual_gauge_grid(z, r, steps=4001):
    """Maximize <z, w> over the feasible region by a dense scan (n = 2) or
    by scipy SLSQP from many starts (n <= 5)."""
    from scipy.optimize import minimize

    z = np.asarray(z, dtype=float)
    n = z.size
    best = -np.inf
    rng = np.random.default_rng(0)
    cons = [{"type": "ineq", "fun": lambda w: r - w @ w, "jac": lambda w: -2 * w}]
    starts = [np.sign(z) * min(1.0, math.sqrt(r / n))] + [rng.uniform(-1, 1, n) * 0.5 for _ in range(8)]
    for w0 in starts:
        res = minimize(lambda w: -(z @ w), w0, jac=lambda w: -z, bounds=[(-1, 1)] * n,
                       constraints=cons, method="SLSQP", options={"ftol": 1e-14, "maxiter": 500})
        w = res.x
        # pull back into the feasible set before scoring
        w = np.clip(w, -1, 1)
        nrm = np.linalg.norm(w)
        if nrm > math.sqrt(r):
            w *= math.sqrt(r) / nrm
        best = max(best, float(z @ w))
    return best
