"""Monte Carlo campaigns for each probabilistic step of the small-ball argument.

Every campaign is keyed by ``(seed, work item)``: matrix draw ``k`` always comes
from the same substream, Monte Carlo chunks have a fixed size that depends
only on the dimension, and aggregation uses integer counts or exactly
rounded sums.  Results are therefore identical for any worker count.

The underlying constants are not numerical, so each campaign reports the
quantities on both sides of the relevant inequality.  Deterministic
consequences (triangle-inequality bookkeeping, certificate consistency) are
hard checks; probabilistic comparisons against exact oracles are checks at
three standard errors; everything else is an observation.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from functools import partial
from typing import NamedTuple

import numpy as np

from . import oracles
from ._parallel import parallel_map
from .distributions import (
    DistributionSpec,
    Estimate,
    Law,
    SeededStream,
    format_dist,
    sample,
    sample_matrix,
    small_ball_mass,
)
from .errors import ConfigurationError, DomainError
from .interp_norm import (
    dual_gauge_exact,
    holmstedt_approx,
    normalize_to_dual_sphere,
    primal_gauge,
    water_filling_maximizer,
)
from .nets import DualSphere, Net, greedy_net, project_to_net, sample_dual_sphere
from .partition import random_block_sums, verify_sandwich
from .polytope import (
    count_large_coords,
    crosspolytope_fixture,
    gauge_lp,
    identity_fixture,
    support_seminorm,
)
from .report import ExperimentReport

# substream tags; one per campaign so draws never collide across campaigns
MATRIX, L1, PZ_A, PZ_B, TAIL, TAIL_DIR, OSC, CONT, E2E, NET, NORMS, PART, GAUGE = range(1, 14)

_CHUNK_ENTRIES = 1 << 22
FIXTURES = {"identity": identity_fixture, "crosspolytope": crosspolytope_fixture}
Z_MODES = ("flat", "basis", "random")


@dataclass
class ExperimentConfig:
    """Parameters shared by all campaigns.

    ``r`` defaults to ``floor(r_scale * log(e N / n))`` clipped to ``[1, n]``.
    ``c0`` (the containment level) defaults to ``c_prime / 2``.
    """

    dist: DistributionSpec = field(default_factory=DistributionSpec.gaussian)
    n: int = 10
    N: int = 1000
    alpha: float = 0.5
    r: float | None = None
    r_scale: float = 1.0
    c_prime: float = 0.25
    c0: float | None = None
    trials: int = 10_000
    draws: int = 100
    directions: int = 1000
    seed: int = 0
    theta: float = 0.5
    rho: float = 0.01
    r_values: tuple | None = None
    rmax: float | None = None
    z_mode: str = "flat"
    fixture: str | None = None
    net_radius: float | None = None
    probe_budget: int = 20_000
    workers: int = 1

    def __post_init__(self):
        if isinstance(self.dist, str):
            from .distributions import parse_dist

            self.dist = parse_dist(self.dist)
        if self.fixture is not None:
            if self.fixture not in FIXTURES:
                raise ConfigurationError(f"unknown fixture {self.fixture!r}; choose from {sorted(FIXTURES)}")
            self.N = len(FIXTURES[self.fixture](int(self.n)))
        if self.r_values is not None:
            self.r_values = tuple(float(x) for x in self.r_values)
        self.validate()

    def validate(self):
        def need(cond, msg):
            if not cond:
                raise ConfigurationError(msg)

        need(0 < self.alpha < 1, f"alpha must satisfy 0 < alpha < 1 (got {self.alpha})")
        need(int(self.n) == self.n and self.n >= 1, f"n must be a positive integer (got {self.n})")
        need(int(self.N) == self.N and self.N >= self.n, f"need N >= n >= 1 (got N={self.N}, n={self.n})")
        need(self.trials >= 1, f"trials must be >= 1 (got {self.trials})")
        need(self.draws >= 1, f"draws must be >= 1 (got {self.draws})")
        need(self.directions >= 1, f"directions must be >= 1 (got {self.directions})")
        need(0 < self.theta < 1, f"theta must satisfy 0 < theta < 1 (got {self.theta})")
        need(self.rho >= 0, f"rho must be >= 0 (got {self.rho})")
        need(self.c_prime >= 0, f"c_prime must be >= 0 (got {self.c_prime})")
        need(self.c0 is None or self.c0 >= 0, f"c0 must be >= 0 (got {self.c0})")
        need(self.r_scale > 0, f"r_scale must be positive (got {self.r_scale})")
        need(0 <= self.seed < 2**64, "seed must be a 64-bit unsigned integer")
        need(self.z_mode in Z_MODES, f"z_mode must be one of {Z_MODES} (got {self.z_mode!r})")
        need(self.r is None or 1 <= self.r <= self.n, f"r must satisfy 1 <= r <= n (got r={self.r}, n={self.n})")
        if self.r_values is not None:
            need(len(self.r_values) > 0, "r_values must be nonempty")
            need(all(1 <= x <= self.n for x in self.r_values), f"every r in r_values must lie in [1, n={self.n}]")
        need(self.rmax is None or 1 <= self.rmax <= self.n, f"rmax must satisfy 1 <= rmax <= n (got {self.rmax})")

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)

    @property
    def threshold(self) -> float:
        """``N^(1-alpha) n^alpha``, the cardinality scale."""
        return self.N ** (1 - self.alpha) * self.n**self.alpha

    @property
    def r_eff(self) -> float:
        if self.r is not None:
            return float(self.r)
        r = math.floor(self.r_scale * math.log(math.e * self.N / self.n))
        return float(min(self.n, max(1, r)))

    @property
    def level(self) -> float:
        return self.c_prime / 2 if self.c0 is None else self.c0

    @property
    def tail_grid(self) -> tuple:
        if self.r_values is not None:
            return self.r_values
        top = self.rmax if self.rmax is not None else self.n
        grid, r = [], 1
        while r <= top:
            grid.append(float(r))
            r *= 2
        return tuple(grid)

    def stream(self, index: int, *tag: int) -> SeededStream:
        return SeededStream(self.seed, index, tag)

    def to_dict(self) -> dict:
        """Config echo for reports (worker count excluded: it never changes results)."""
        d = {f.name: getattr(self, f.name) for f in dataclasses.fields(self) if f.name != "workers"}
        d["dist"] = format_dist(self.dist)
        d["kappa"] = self.dist.kappa
        d["delta"] = self.dist.delta
        d["r_eff"] = self.r_eff
        d["threshold"] = self.threshold
        d["level"] = self.level
        if self.r_values is not None:
            d["r_values"] = list(self.r_values)
        return d


def draw_matrix(cfg: ExperimentConfig, k: int) -> np.ndarray:
    """Matrix for draw ``k``; shared by all campaigns with the same seed."""
    if cfg.fixture is not None:
        return FIXTURES[cfg.fixture](cfg.n)
    return sample_matrix(cfg.dist, cfg.N, cfg.n, cfg.stream(k, MATRIX))


def test_direction(mode: str, n: int, r: float, stream: SeededStream | None = None) -> np.ndarray:
    """A fixed direction on the polar sphere of ``L_r``."""
    if mode == "flat":
        return np.ones(n) / math.sqrt(r * n)
    if mode == "basis":
        z = np.zeros(n)
        z[0] = 1.0
        return z
    if mode == "random":
        if stream is None:
            raise ConfigurationError("random directions need a stream")
        return normalize_to_dual_sphere(stream.generator().standard_normal(n), r)
    raise ConfigurationError(f"unknown z_mode {mode!r}")


# --------------------------------------------------------------------------
# chunked Monte Carlo over iid vectors


class _ChunkTask(NamedTuple):
    spec: DistributionSpec
    seed: int
    tag: int
    total: int
    rows: int
    width: int
    kernel: object
    args: tuple


def _rows_per_chunk(width: int) -> int:
    return max(1, _CHUNK_ENTRIES // max(1, width))


def _run_chunk(task: _ChunkTask, k: int):
    m = min(task.rows, task.total - k * task.rows)
    X = sample(task.spec, (m, task.width), SeededStream(task.seed, k, (task.tag,)))
    return task.kernel(X, *task.args)


def _chunked(cfg: ExperimentConfig, tag: int, total: int, width: int, kernel, *args) -> list:
    rows = _rows_per_chunk(width)
    task = _ChunkTask(cfg.dist, cfg.seed, tag, int(total), rows, int(width), kernel, args)
    return parallel_map(partial(_run_chunk, task), range(math.ceil(total / rows)), cfg.workers)


def _k_abs_moments(X, w):
    y = np.abs(X @ w)
    return math.fsum(y), math.fsum(y**2), math.fsum(y**3), math.fsum(y**4)


def _k_count_at_least(X, w, t):
    return int(np.count_nonzero(np.abs(X @ w) >= t))


def _k_tail_counts(X, Z, t):
    return np.count_nonzero(np.abs(X @ Z.T) >= t, axis=0)


def _subvector(z, J):
    z = np.asarray(z, dtype=float)
    J = np.asarray(sorted(set(int(j) for j in J)), dtype=int)
    if J.size == 0:
        raise DomainError("index set J must be nonempty")
    zJ = z[J]
    norm = float(np.linalg.norm(zJ))
    if norm == 0:
        raise DomainError("z restricted to J must be nonzero")
    return zJ, norm


def exp_l1_lower(cfg: ExperimentConfig, z, J) -> Estimate:
    """``E|Y| / ||z_J||_2`` for ``Y = sum_{j in J} z_j xi_j``."""
    zJ, norm = _subvector(z, J)
    parts = _chunked(cfg, L1, cfg.trials, zJ.size, _k_abs_moments, zJ)
    M = cfg.trials
    s1 = math.fsum(p[0] for p in parts) / M
    s2 = math.fsum(p[1] for p in parts) / M
    se = math.sqrt(max(0.0, s2 - s1 * s1) / M)
    return Estimate(s1 / norm, se / norm)


@dataclass
class PaleyZygmundResult:
    lhs: Estimate
    rhs: Estimate
    mean_abs: float
    second_moment: float
    theta: float

    @property
    def holds(self) -> bool:
        return self.lhs.value >= self.rhs.value - 3 * math.hypot(self.lhs.stderr, self.rhs.stderr)


def exp_paley_zygmund(cfg: ExperimentConfig, z, J) -> PaleyZygmundResult:
    """Both sides of ``Pr(|Y| >= theta E|Y|) >= (1 - theta^2) (E|Y|)^2 / E Y^2``.

    Moments come from one half of the budget and the probability from an
    independent second half.
    """
    zJ, _ = _subvector(z, J)
    th = cfg.theta
    MA = max(1, cfg.trials // 2)
    MB = max(1, cfg.trials - MA)
    parts = _chunked(cfg, PZ_A, MA, zJ.size, _k_abs_moments, zJ)
    m1, m2, m3, m4 = (math.fsum(p[i] for p in parts) / MA for i in range(4))
    rhs = (1 - th**2) * m1 * m1 / m2 if m2 > 0 else 0.0
    # delta method on (E|Y|, E Y^2)
    cov = np.array([[m2 - m1 * m1, m3 - m1 * m2], [m3 - m1 * m2, m4 - m2 * m2]])
    grad = (1 - th**2) * np.array([2 * m1 / m2, -(m1 * m1) / (m2 * m2)]) if m2 > 0 else np.zeros(2)
    rhs_se = math.sqrt(max(0.0, float(grad @ cov @ grad)) / MA)
    hits = sum(_chunked(cfg, PZ_B, MB, zJ.size, _k_count_at_least, zJ, th * m1))
    p = hits / MB
    return PaleyZygmundResult(Estimate(p, math.sqrt(p * (1 - p) / MB)), Estimate(rhs, rhs_se), m1, m2, th)


# --------------------------------------------------------------------------
# individual tail


def tail_oracle(spec: DistributionSpec, z, c_prime: float) -> float | None:
    """Exact ``Pr(|<z, X>| >= c')`` when a closed form or exact enumeration exists."""
    z = np.asarray(z, dtype=float)
    nz = z[z != 0]
    if nz.size == 1:
        return small_ball_mass(spec, c_prime / abs(nz[0]))
    if spec.kind is Law.GAUSSIAN:
        return float(oracles.gaussian_abs_tail(c_prime, np.linalg.norm(z)))
    if spec.kind is Law.RADEMACHER and (nz.size <= 20 or (nz.size <= 30 and np.unique(np.abs(nz)).size == 1)):
        return oracles.rademacher_tail_exact(nz, c_prime)
    return None


def _wilson(p: float, M: int, zc: float = 1.96) -> tuple[float, float]:
    denom = 1 + zc * zc / M
    centre = (p + zc * zc / (2 * M)) / denom
    half = zc * math.sqrt(p * (1 - p) / M + zc * zc / (4 * M * M)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass
class TailCurve:
    r_values: np.ndarray
    p_hat: np.ndarray
    stderr: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    underpowered: np.ndarray
    slope: float
    intercept: float
    c_prime: float
    z_mode: str
    trials: int
    oracle: np.ndarray | None = None

    @property
    def fit(self) -> tuple[float, float]:
        return self.slope, self.intercept

    @property
    def passed(self) -> bool:
        """A finite linear envelope ``p >= exp(-a r - b)`` was fitted."""
        return math.isfinite(self.slope) and math.isfinite(self.intercept)

    def max_feasible_r(self, level: float) -> float | None:
        ok = (self.p_hat >= level) & ~self.underpowered
        return float(self.r_values[ok].max()) if np.any(ok) else None

    def oracle_within(self, k: float = 3.0) -> np.ndarray | None:
        """Per-r flags: ``|p_hat - p| <= k * sqrt(p (1 - p) / M)``."""
        if self.oracle is None:
            return None
        se = np.sqrt(self.oracle * (1 - self.oracle) / self.trials)
        return np.abs(self.p_hat - self.oracle) <= k * se + 1e-15


def fit_tail(r_values, p_hat, usable) -> tuple[float, float]:
    """Least-squares line through ``(r, -log p)`` on the usable points."""
    r = np.asarray(r_values, dtype=float)[usable]
    p = np.asarray(p_hat, dtype=float)[usable]
    if r.size < 2 or np.ptp(r) == 0:
        return math.nan, math.nan
    a, b = np.polyfit(r, -np.log(p), 1)
    return float(a), float(b)


def exp_individual_tail(cfg: ExperimentConfig, z_mode: str | None = None) -> TailCurve:
    """Estimate ``Pr(|<z, X>| >= c')`` over a grid of ``r``, ``z`` on the polar sphere of ``L_r``.

    All grid points share the same sample of ``X`` (common random numbers).
    """
    mode = cfg.z_mode if z_mode is None else z_mode
    grid = np.array(cfg.tail_grid, dtype=float)
    Z = np.array([test_direction(mode, cfg.n, r, cfg.stream(i, TAIL_DIR)) for i, r in enumerate(grid)])
    M = cfg.trials
    counts = np.sum(_chunked(cfg, TAIL, M, cfg.n, _k_tail_counts, Z, cfg.c_prime), axis=0)
    p = counts / M
    se = np.sqrt(p * (1 - p) / M)
    zero = counts == 0
    ci = np.array([_wilson(x, M) for x in p])
    ci[zero] = (0.0, 3.0 / M)
    a, b = fit_tail(grid, p, ~zero)
    orc = [tail_oracle(cfg.dist, z, cfg.c_prime) for z in Z]
    oracle = None if any(o is None for o in orc) else np.array(orc, dtype=float)
    return TailCurve(grid, p, se, ci[:, 0], ci[:, 1], zero, a, b, cfg.c_prime, mode, M, oracle)


def tail_report(cfg: ExperimentConfig, curve: TailCurve) -> ExperimentReport:
    rep = ExperimentReport("tail", cfg.to_dict(), cfg.seed)
    rep.metrics = {
        "z_mode": curve.z_mode,
        "c_prime": curve.c_prime,
        "slope": curve.slope,
        "intercept": curve.intercept,
        "gaussian_rate": curve.c_prime**2 / 2,
        "r_values": curve.r_values,
        "p_hat": curve.p_hat,
        "stderr": curve.stderr,
        "underpowered_r": curve.r_values[curve.underpowered],
    }
    rep.checks["finite_envelope"] = curve.passed
    within = curve.oracle_within()
    if within is not None:
        rep.metrics["oracle"] = curve.oracle
        rep.checks["oracle_within_3se"] = bool(np.all(within))
    level = 4 * (cfg.n / cfg.N) ** cfg.alpha
    rep.observations["r0_level"] = level
    rep.observations["r0"] = curve.max_feasible_r(level)
    rep.trials_header = ["r", "p_hat", "stderr", "ci_low", "ci_high", "underpowered", "oracle"]
    for i, r in enumerate(curve.r_values):
        orc = curve.oracle[i] if curve.oracle is not None else ""
        rep.trials.append(
            (r, curve.p_hat[i], curve.stderr[i], curve.ci_low[i], curve.ci_high[i], curve.underpowered[i], orc)
        )
    rep.curves["tail_curve"] = curve
    return rep


def fit_c_prime(cfg: ExperimentConfig, candidates, z_mode: str = "flat", require_r0: bool = False) -> float:
    """Largest candidate level whose flat-direction tail curve admits a finite fit.

    With ``require_r0`` the level must also leave some grid ``r`` with
    ``p_hat(r) >= 4 (n/N)^alpha``, so that the cardinality step applies.
    """
    level = 4 * (cfg.n / cfg.N) ** cfg.alpha
    best = None
    for c in sorted(candidates):
        curve = exp_individual_tail(cfg.replace(c_prime=float(c)), z_mode)
        if not curve.passed or np.any(curve.underpowered):
            continue
        if require_r0 and curve.max_feasible_r(level) is None:
            continue
        best = float(c)
    if best is None:
        raise ConfigurationError("no candidate level gives a finite tail fit")
    return best


# --------------------------------------------------------------------------
# cardinality


@dataclass
class CardinalityResult:
    counts: np.ndarray
    r: float
    r0: float | None
    z: np.ndarray
    p_model: float
    threshold: float
    target: float
    frequency: float
    prediction: float
    prediction_stderr: float
    tail: TailCurve | None = None

    @property
    def matches_model(self) -> bool:
        return abs(self.frequency - self.prediction) <= 3 * self.prediction_stderr + 1e-12

    @property
    def failure_fraction(self) -> float:
        return 1.0 - self.frequency


def _cardinality_draw(cfg: ExperimentConfig, z, k: int) -> int:
    return count_large_coords(draw_matrix(cfg, k), z, cfg.c_prime)


def exp_cardinality(cfg: ExperimentConfig, tail: TailCurve | None = None) -> CardinalityResult:
    """Distribution over matrix draws of ``#{i : |<z, X_i>| >= c'}``.

    Without a fixture, ``r`` must not exceed ``r0``, the largest grid value with
    ``p_hat(r0) >= 4 (n/N)^alpha`` on the tail curve of the configured ``z_mode``.
    """
    level = 4 * (cfg.n / cfg.N) ** cfg.alpha
    r0 = None
    if cfg.fixture is None:
        if tail is None:
            grid = cfg.r_values
            if grid is None:
                grid = tuple(range(1, cfg.n + 1)) if cfg.n <= 64 else cfg.tail_grid
            tail = exp_individual_tail(cfg.replace(r_values=tuple(grid)), cfg.z_mode)
        r0 = tail.max_feasible_r(level)
        if r0 is None:
            raise ConfigurationError(
                f"no r satisfies p_hat(r) >= 4(n/N)^alpha = {level:.4g} for N={cfg.N}, n={cfg.n}, "
                f"alpha={cfg.alpha}; maximal feasible r: none"
            )
        if cfg.r is not None and cfg.r > r0:
            raise ConfigurationError(f"r={cfg.r} exceeds the maximal feasible r0={r0:g}")
        r = float(cfg.r) if cfg.r is not None else r0
    else:
        r = cfg.r_eff
    z = test_direction(cfg.z_mode, cfg.n, r, cfg.stream(0, TAIL_DIR))
    p_model = tail_oracle(cfg.dist, z, cfg.c_prime)
    if p_model is None:
        hit = np.flatnonzero(tail.r_values == r) if tail is not None else []
        if len(hit) and tail.z_mode == cfg.z_mode:
            p_model = float(tail.p_hat[hit[0]])
        else:
            extra = exp_individual_tail(cfg.replace(r_values=(r,)), cfg.z_mode)
            p_model = float(extra.p_hat[0])
    counts = np.array(parallel_map(partial(_cardinality_draw, cfg, z), range(cfg.draws), cfg.workers))
    target = 2 * cfg.threshold
    freq = float(np.mean(counts >= target))
    if cfg.fixture is None:
        q = oracles.binomial_at_least(cfg.N, p_model, target)
    else:
        q = float(count_large_coords(draw_matrix(cfg, 0), z, cfg.c_prime) >= target)
    se = math.sqrt(max(0.0, q * (1 - q)) / cfg.draws)
    return CardinalityResult(counts, r, r0, z, p_model, cfg.threshold, target, freq, q, se, tail)


def cardinality_report(cfg: ExperimentConfig, res: CardinalityResult) -> ExperimentReport:
    rep = ExperimentReport("cardinality", cfg.to_dict(), cfg.seed)
    N, p = cfg.N, res.p_model
    mean = float(np.mean(res.counts))
    band = 3 * math.sqrt(N * p * (1 - p) / cfg.draws)
    rep.metrics = {
        "r": res.r,
        "r0": res.r0,
        "p_model": p,
        "mean_count": mean,
        "expected_count": N * p,
        "target": res.target,
        "frequency_at_target": res.frequency,
        "binomial_prediction": res.prediction,
        "prediction_stderr": res.prediction_stderr,
        "failure_fraction": res.failure_fraction,
    }
    rep.checks["frequency_matches_binomial"] = res.matches_model
    if cfg.fixture is None:
        rep.checks["mean_count_within_3se"] = abs(mean - N * p) <= band + 1e-12
        # Chernoff: Pr(Bin <= mu/2) <= exp(-mu/8) once mu >= 2 * target
        rep.observations["chernoff_failure_bound"] = math.exp(-N * p / 8) if N * p >= 2 * res.target else None
    rep.trials_header = ["draw", "count", "at_least_target"]
    rep.trials = [(k, int(c), bool(c >= res.target)) for k, c in enumerate(res.counts)]
    rep.curves["count_histogram"] = res.counts
    return rep


# --------------------------------------------------------------------------
# oscillation


def oscillation_candidates(G, rho: float, m: int, gen: np.random.Generator, extra=None) -> np.ndarray:
    """Points of ``rho B_2^n`` likely to maximize the oscillation count.

    Random points of the radius-``rho`` sphere, every row direction scaled to
    ``rho``, the top right-singular direction, and any ``extra`` points
    already inside the ball.
    """
    n = G.shape[1]
    u = gen.standard_normal((m, n))
    u *= rho / np.linalg.norm(u, axis=1, keepdims=True)
    norms = np.linalg.norm(G, axis=1, keepdims=True)
    rows = rho * G[norms[:, 0] > 0] / norms[norms[:, 0] > 0]
    top = np.linalg.svd(G, full_matrices=False)[2][:1] * rho
    parts = [u, rows, top, -top]
    if extra is not None and len(extra):
        extra = np.atleast_2d(extra)
        parts.append(extra[np.linalg.norm(extra, axis=1) <= rho * (1 + 1e-12)])
    return np.vstack(parts)


def max_count(G, U, t: float, chunk: int = 4096) -> int:
    best = 0
    for s in range(0, len(U), chunk):
        best = max(best, int(np.max(count_large_coords(G, U[s : s + chunk], t), initial=0)))
    return best


@dataclass
class OscillationResult:
    q_hat: np.ndarray
    threshold: float
    rho: float
    expectation_bound: float

    @property
    def fraction_below_threshold(self) -> float:
        return float(np.mean(self.q_hat <= self.threshold))


def _oscillation_draw(cfg: ExperimentConfig, net: Net | None, k: int) -> int:
    G = draw_matrix(cfg, k)
    gen = cfg.stream(k, OSC).generator()
    extra = None
    if net is not None and isinstance(net.body, DualSphere):
        Z = sample_dual_sphere(cfg.n, net.body.r, cfg.directions, gen)
        P, _ = project_to_net(net, Z)
        extra = Z - P
    if cfg.rho == 0:
        return 0 if cfg.c_prime > 0 else cfg.N
    U = oscillation_candidates(G, cfg.rho, cfg.directions, gen, extra)
    return max_count(G, U, cfg.c_prime / 2)


def exp_oscillation(cfg: ExperimentConfig, net: Net | None = None) -> OscillationResult:
    """Empirical sup (a lower bound) of ``#{i : |<u, X_i>| >= c'/2}`` over ``u`` in ``rho B_2``."""
    q = np.array(parallel_map(partial(_oscillation_draw, cfg, net), range(cfg.draws), cfg.workers))
    c = cfg.c_prime
    bound = (4 * cfg.rho / c) * (math.sqrt(cfg.N * cfg.n) + cfg.N) if c > 0 else math.inf
    return OscillationResult(q, cfg.threshold, cfg.rho, bound)


def oscillation_report(cfg: ExperimentConfig, res: OscillationResult) -> ExperimentReport:
    rep = ExperimentReport("oscillation", cfg.to_dict(), cfg.seed)
    rep.metrics = {
        "q_hat_mean": float(np.mean(res.q_hat)),
        "q_hat_max": int(np.max(res.q_hat)),
        "threshold": res.threshold,
        "fraction_q_below_threshold": res.fraction_below_threshold,
        "expectation_bound": res.expectation_bound,
    }
    rep.checks["q_hat_in_range"] = bool(np.all((res.q_hat >= 0) & (res.q_hat <= cfg.N)))
    rep.observations["mean_below_expectation_bound"] = float(np.mean(res.q_hat)) <= res.expectation_bound
    if cfg.dist.kind is Law.GAUSSIAN and cfg.rho > 0 and cfg.c_prime > 0:
        # a single fixed u of norm rho hits each row with this probability
        rep.observations["single_direction_mean"] = cfg.N * float(
            oracles.gaussian_abs_tail(cfg.c_prime / 2, cfg.rho)
        )
        # sanity band: a row of norm about 3 sqrt(n) reaching c'/2 along a rho-vector
        rep.observations["union_band_fraction"] = float(
            oracles.gaussian_abs_tail(cfg.c_prime / 2 / (3 * cfg.rho * math.sqrt(cfg.n)))
        )
        rep.observations["q_hat_fraction_max"] = int(np.max(res.q_hat)) / cfg.N
    rep.trials_header = ["draw", "q_hat", "below_threshold"]
    rep.trials = [(k, int(q), bool(q <= res.threshold)) for k, q in enumerate(res.q_hat)]
    rep.curves["q_histogram"] = res.q_hat
    return rep


# --------------------------------------------------------------------------
# containment


def containment_directions(G, r: float, m: int, gen: np.random.Generator) -> np.ndarray:
    """Sampled polar-sphere directions plus singular-vector directions of ``G``."""
    n = G.shape[1]
    Z = sample_dual_sphere(n, r, m, gen)
    vt = np.linalg.svd(G, full_matrices=False)[2]
    sing = np.vstack([vt[0], vt[-1], np.sign(vt[-1]) + (vt[-1] == 0)])
    sing = normalize_to_dual_sphere(sing, r)
    return np.vstack([Z, sing, -sing])


@dataclass
class ContainmentDraw:
    c_hat: float
    argmin: np.ndarray
    lp_level: float | None = None
    lp_inside_fraction: float | None = None


def _containment_draw(cfg: ExperimentConfig, m: int, cv_points: int, extra, k: int) -> ContainmentDraw:
    G = draw_matrix(cfg, k)
    gen = cfg.stream(k, CONT).generator()
    r = cfg.r_eff
    Z = containment_directions(G, r, m, gen)
    if extra is not None:
        Z = np.vstack([Z, extra])
    vals = np.concatenate([support_seminorm(G, Z[s : s + 2048]) for s in range(0, len(Z), 2048)])
    i = int(np.argmin(vals))
    out = ContainmentDraw(float(vals[i]), Z[i])
    if cv_points and cfg.n <= 4:
        zs = np.vstack([Z[i], sample_dual_sphere(cfg.n, r, cv_points, gen)])
        gauges = np.array([gauge_lp(G, water_filling_maximizer(z, r)).value for z in zs])
        out.lp_level = float(1 / np.max(gauges))
        out.lp_inside_fraction = float(np.mean(out.c_hat * gauges <= 1 + 1e-6))
    return out


@dataclass
class ContainmentResult:
    draws: list
    r: float
    level: float

    @property
    def c_hat(self) -> np.ndarray:
        return np.array([d.c_hat for d in self.draws])

    @property
    def positive_fraction(self) -> float:
        return float(np.mean(self.c_hat > 0))

    @property
    def success_rate(self) -> float:
        return float(np.mean(self.c_hat >= self.level))


def exp_containment(
    cfg: ExperimentConfig, directions: int | None = None, cv_points: int = 20, extra_directions=None
) -> ContainmentResult:
    """Per draw, the smallest ``||G z||_inf`` over sampled and adversarial polar-sphere directions.

    This is an upper bound on the largest ``c`` with ``c L_r ⊆ K``.  For
    ``n <= 4`` it is cross-checked with gauge LPs at extreme points of ``L_r``:
    the point dual to the minimizing direction has gauge at least ``1/c_hat``.
    ``extra_directions`` (e.g. the points of a net) are added to every draw.
    """
    m = cfg.directions if directions is None else int(directions)
    extra = None if extra_directions is None else np.atleast_2d(np.asarray(extra_directions, dtype=float))
    draws = parallel_map(partial(_containment_draw, cfg, m, cv_points, extra), range(cfg.draws), cfg.workers)
    return ContainmentResult(draws, cfg.r_eff, cfg.level)


def containment_report(cfg: ExperimentConfig, res: ContainmentResult) -> ExperimentReport:
    rep = ExperimentReport("containment", cfg.to_dict(), cfg.seed)
    c = res.c_hat
    rep.metrics = {
        "r": res.r,
        "c_hat_min": float(c.min()),
        "c_hat_median": float(np.median(c)),
        "c_hat_mean": float(c.mean()),
        "c_hat_max": float(c.max()),
        "positive_fraction": res.positive_fraction,
        "success_rate": res.success_rate,
        "level": res.level,
    }
    if cfg.fixture == "crosspolytope":
        rep.metrics["closed_form"] = 1 / math.sqrt(res.r * cfg.n)
    lp = [d for d in res.draws if d.lp_level is not None]
    if lp:
        rep.metrics["lp_inside_fraction_mean"] = float(np.mean([d.lp_inside_fraction for d in lp]))
        # the extreme point dual to the minimizing direction sits exactly on c_hat * boundary
        rep.checks["lp_level_not_above_c_hat"] = all(d.lp_level <= d.c_hat * (1 + 1e-6) for d in lp)
    rep.checks["c_hat_nonnegative"] = bool(np.all(c >= 0))
    rep.trials_header = ["draw", "c_hat", "lp_level", "lp_inside_fraction"]
    rep.trials = [
        (k, d.c_hat, "" if d.lp_level is None else d.lp_level, "" if d.lp_inside_fraction is None else d.lp_inside_fraction)
        for k, d in enumerate(res.draws)
    ]
    rep.curves["c_hat_histogram"] = c
    return rep


# --------------------------------------------------------------------------
# end to end


def default_net(cfg: ExperimentConfig) -> Net:
    """Greedy net of the polar sphere of ``L_{r_eff}`` at radius ``net_radius`` (default ``0.8 rho``)."""
    target = cfg.net_radius if cfg.net_radius is not None else 0.8 * cfg.rho
    if target <= 0:
        raise ConfigurationError("end-to-end runs need rho > 0")
    return greedy_net(DualSphere(cfg.n, cfg.r_eff), target, cfg.probe_budget, cfg.stream(0, NET))


@dataclass
class EndToEndDraw:
    net_min_count: int
    q_hat: int
    premise_net: bool
    premise_osc: bool
    local_premises: int
    violations_local: int
    violations_global: int
    min_direct_count: int


def _end_to_end_draw(cfg: ExperimentConfig, net: Net, k: int) -> EndToEndDraw:
    G = draw_matrix(cfg, k)
    gen = cfg.stream(k, E2E).generator()
    T = cfg.threshold
    c = cfg.c_prime
    net_counts = count_large_coords(G, net.points, c)
    Z = sample_dual_sphere(cfg.n, net.body.r, cfg.directions, gen)
    P, dist = project_to_net(net, Z)
    U = Z - P
    if cfg.rho > 0:
        q_hat = max_count(G, oscillation_candidates(G, cfg.rho, cfg.directions, gen, U), c / 2)
    else:
        q_hat = 0 if c > 0 else cfg.N
    premise_net = bool(net_counts.min() >= 2 * T)
    premise_osc = bool(q_hat <= T)

    near = count_large_coords(G, P, c) >= 2 * T
    small = count_large_coords(G, U, c / 2) <= T
    direct = count_large_coords(G, Z, c / 2)
    holds = direct >= T
    local = near & small
    covered = dist <= cfg.rho * (1 + 1e-12)
    global_bad = int(np.count_nonzero(covered & ~holds)) if (premise_net and premise_osc) else 0
    return EndToEndDraw(
        int(net_counts.min()),
        int(q_hat),
        premise_net,
        premise_osc,
        int(np.count_nonzero(local)),
        int(np.count_nonzero(local & ~holds)),
        global_bad,
        int(direct.min()),
    )


@dataclass
class EndToEndResult:
    draws: list
    net_size: int
    net_radius: float
    threshold: float

    @property
    def violations(self) -> int:
        return sum(d.violations_local + d.violations_global for d in self.draws)


def exp_end_to_end(cfg: ExperimentConfig, net: Net | None = None) -> EndToEndResult:
    """Replay the net + oscillation + triangle-inequality argument on each draw.

    For each fresh direction ``z`` with nearest net point ``pz``: if ``pz`` has
    at least ``2T`` rows with ``|<pz, X_i>| >= c'`` and ``z - pz`` has at most
    ``T`` rows with ``|<z - pz, X_i>| >= c'/2``, then ``z`` must have at least
    ``T`` rows with ``|<z, X_i>| >= c'/2``.  Any failure is a violation.
    """
    if cfg.n > 6:
        raise ConfigurationError("end-to-end runs need n <= 6 for the net to be feasible")
    if net is None:
        net = default_net(cfg)
    if not isinstance(net.body, DualSphere):
        raise ConfigurationError("end-to-end runs need a net of the polar sphere")
    if net.radius_measured > cfg.rho:
        raise ConfigurationError(
            f"net radius {net.radius_measured:.4g} exceeds rho={cfg.rho}; lower net_radius or raise probe_budget"
        )
    draws = parallel_map(partial(_end_to_end_draw, cfg, net), range(cfg.draws), cfg.workers)
    return EndToEndResult(draws, len(net), net.radius_measured, cfg.threshold)


def end_to_end_report(cfg: ExperimentConfig, res: EndToEndResult) -> ExperimentReport:
    rep = ExperimentReport("end2end", cfg.to_dict(), cfg.seed)
    d = res.draws
    rep.metrics = {
        "net_size": res.net_size,
        "net_radius_measured": res.net_radius,
        "threshold": res.threshold,
        "violations": res.violations,
        "directions_checked": cfg.draws * cfg.directions,
        "local_premise_rate": sum(x.local_premises for x in d) / (cfg.draws * cfg.directions),
    }
    rep.checks["zero_implication_violations"] = res.violations == 0
    rep.observations["net_premise_rate"] = float(np.mean([x.premise_net for x in d]))
    rep.observations["oscillation_premise_rate"] = float(np.mean([x.premise_osc for x in d]))
    rep.observations["both_premises_rate"] = float(np.mean([x.premise_net and x.premise_osc for x in d]))
    rep.trials_header = [f.name for f in dataclasses.fields(EndToEndDraw)]
    rep.trials_header.insert(0, "draw")
    rep.trials = [(k,) + dataclasses.astuple(x) for k, x in enumerate(d)]
    rep.curves["direct_count_histogram"] = np.array([x.min_direct_count for x in d])
    return rep


# --------------------------------------------------------------------------
# deterministic norm campaigns

PROFILES = ("gaussian", "sparse", "geometric", "flat")


def random_profile(kind: str, n: int, gen: np.random.Generator) -> np.ndarray:
    """Test vectors of various shapes for norm comparisons."""
    if kind == "gaussian":
        return gen.standard_normal(n)
    if kind == "sparse":
        z = np.zeros(n)
        k = int(gen.integers(1, max(1, int(math.sqrt(n))) + 1))
        z[gen.choice(n, size=k, replace=False)] = gen.standard_normal(k)
        return z
    if kind == "geometric":
        q = gen.uniform(0.3, 0.99)
        return gen.permutation(q ** np.arange(n)) * gen.choice([-1.0, 1.0], n)
    if kind == "flat":
        return gen.choice([-1.0, 1.0], n)
    raise ConfigurationError(f"unknown profile {kind!r}")


def r_choices(n: int) -> list:
    return sorted({1, min(2, n), max(1, math.isqrt(n)), max(1, n // 2), n})


def _norms_trial(n_max: int, seed: int, k: int):
    gen = SeededStream(seed, k, (NORMS,)).generator()
    n = int(np.exp(gen.uniform(0, math.log(n_max + 1)))) if n_max > 1 else 1
    n = min(max(n, 1), n_max)
    kind = PROFILES[k % len(PROFILES)]
    z = random_profile(kind, n, gen)
    r = int(gen.choice(r_choices(n)))
    exact = dual_gauge_exact(z, r)
    approx = holmstedt_approx(z, r)
    w = water_filling_maximizer(z, r)
    return kind, n, r, exact, approx, float(w @ z), primal_gauge(w, r)


def campaign_holmstedt(cfg: ExperimentConfig) -> ExperimentReport:
    """Holmstedt's two-sided estimate against the exact polar norm on random vectors."""
    rows = parallel_map(partial(_norms_trial, cfg.n, cfg.seed), range(cfg.trials), cfg.workers)
    rep = ExperimentReport("norms", cfg.to_dict(), cfg.seed)
    ratios = np.array([a / e if e > 0 else 1.0 for _, _, _, e, a, _, _ in rows])
    rep.metrics = {"max_ratio": float(ratios.max()), "min_ratio": float(ratios.min()), "vectors": len(rows)}
    rep.checks["ratio_at_least_one"] = bool(ratios.min() >= 1 - 1e-9)
    rep.checks["ratio_at_most_three"] = bool(ratios.max() <= 3)
    rep.checks["maximizer_attains_norm"] = all(abs(wz - e) <= 1e-9 * max(1, e) for *_, e, _, wz, _ in rows)
    rep.checks["maximizer_feasible"] = all(g <= 1 + 1e-12 for *_, g in rows)
    rep.trials_header = ["trial", "profile", "n", "r", "dual_exact", "holmstedt", "ratio"]
    rep.trials = [(k, kind, n, r, e, a, ratios[k]) for k, (kind, n, r, e, a, _, _) in enumerate(rows)]
    return rep


def _partition_trial(n_max: int, seed: int, partitions: int, k: int):
    gen = SeededStream(seed, k, (PART,)).generator()
    n = int(gen.integers(1, n_max + 1))
    kind = PROFILES[k % len(PROFILES)]
    z = random_profile(kind, n, gen)
    r = int(gen.integers(1, n + 1))
    rep = verify_sandwich(z, r)
    tol = 1e-9 * max(1.0, float(np.max(np.abs(z))) * math.sqrt(n))
    worst = float(random_block_sums(z, r, partitions, gen).max()) if partitions else 0.0
    return kind, n, r, rep.exact, rep.block_sum, rep.ratio, rep.lower_ok, rep.upper_ok, worst <= rep.exact + tol


def campaign_partition(cfg: ExperimentConfig, random_partitions: int = 1000) -> ExperimentReport:
    """Round-robin block sums against the polar norm, plus the any-partition upper bound."""
    rows = parallel_map(
        partial(_partition_trial, cfg.n, cfg.seed, random_partitions), range(cfg.trials), cfg.workers
    )
    rep = ExperimentReport("partition", cfg.to_dict(), cfg.seed)
    ratios = np.array([x[5] for x in rows])
    rep.metrics = {"min_ratio": float(ratios.min()), "max_ratio": float(ratios.max()), "vectors": len(rows)}
    rep.checks["lower_bound"] = all(x[6] for x in rows)
    rep.checks["upper_bound"] = all(x[7] for x in rows)
    rep.checks["any_partition_upper_bound"] = all(x[8] for x in rows)
    rep.trials_header = ["trial", "profile", "n", "r", "dual_exact", "block_sum", "ratio", "lower_ok", "upper_ok", "any_upper_ok"]
    rep.trials = [(k,) + x for k, x in enumerate(rows)]
    return rep


def _gauge_trial(cfg: ExperimentConfig, k: int):
    G = draw_matrix(cfg, k)
    v = SeededStream(cfg.seed, k, (GAUGE,)).generator().standard_normal(cfg.n)
    res = gauge_lp(G, v)
    row = gauge_lp(G, G[0]).value
    resid = float(np.max(np.abs(G.T @ res.certificate - v))) if res.certificate is not None else math.inf
    return res.value, res.iterations, resid, row


def campaign_gauge(cfg: ExperimentConfig, v=None) -> ExperimentReport:
    """Gauge LP on one vector (``v``) or on random vectors, one matrix draw each."""
    rep = ExperimentReport("gauge", cfg.to_dict(), cfg.seed)
    if v is not None:
        G = draw_matrix(cfg, 0)
        v = np.asarray(v, dtype=float)
        res = gauge_lp(G, v)
        rep.metrics = {"value": res.value, "status": res.status.value, "iterations": res.iterations, "v": v}
        if cfg.fixture == "crosspolytope":
            rep.metrics["closed_form"] = float(np.abs(v).sum())
            rep.checks["matches_l1_norm"] = abs(res.value - np.abs(v).sum()) <= 1e-9
        if res.certificate is not None:
            resid = float(np.max(np.abs(G.T @ res.certificate - v)))
            rep.checks["certificate_feasible"] = resid <= 1e-8 * (1 + float(np.max(np.abs(v))))
        rep.trials_header = ["row", "coefficient"]
        cert = res.certificate if res.certificate is not None else []
        rep.trials = [(i, t) for i, t in enumerate(cert)]
        return rep
    rows = parallel_map(partial(_gauge_trial, cfg), range(cfg.trials), cfg.workers)
    rep.metrics = {"vectors": len(rows), "max_iterations": max(r[1] for r in rows)}
    rep.checks["certificates_feasible"] = all(r[2] <= 1e-8 * 10 for r in rows if math.isfinite(r[0]))
    rep.checks["rows_inside_unit_gauge"] = all(r[3] <= 1 + 1e-9 for r in rows)
    rep.trials_header = ["trial", "value", "iterations", "residual", "row_gauge"]
    rep.trials = [(k,) + r for k, r in enumerate(rows)]
    return rep
