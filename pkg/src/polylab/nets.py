"""Greedy l2 covers of the polar sphere of ``L_r`` and of Euclidean balls.

A true minimal cover is out of reach, so nets are built by farthest-point
greedy selection over a dense probe cloud.  The covering radius is then
re-measured on a fresh probe cloud and stored with the net; downstream
certificates should use ``radius_measured``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from .distributions import RandomSource, SeededStream, as_generator
from .errors import ConfigurationError, DomainError, NetError
from .interp_norm import normalize_to_dual_sphere

#: Largest dimension accepted for polar-sphere nets unless overridden.
MAX_NET_DIM = 6


@dataclass(frozen=True)
class DualSphere:
    """Boundary of the polar body ``L_r°`` in dimension ``n``."""

    n: int
    r: float

    def sample(self, m: int, rng: np.random.Generator) -> np.ndarray:
        return sample_dual_sphere(self.n, self.r, m, rng)


@dataclass(frozen=True)
class Ball:
    """The Euclidean ball of radius ``rho`` in dimension ``n``."""

    n: int
    rho: float

    def sample(self, m: int, rng: np.random.Generator) -> np.ndarray:
        g = rng.standard_normal((m, self.n))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        radii = self.rho * rng.random(m) ** (1.0 / self.n)
        return g * radii[:, None]


def sample_dual_sphere(n: int, r: float, m: int, rng: RandomSource) -> np.ndarray:
    """``m`` points of the polar sphere, including its known extremal directions.

    The first rows are the deterministic directions ``±e_i`` and ``±1_n``
    (these are only included when ``m`` leaves room); the rest are Gaussian,
    with a third of them restricted to a random sparse support.  Everything is
    normalized by the exact polar norm.
    """
    gen = as_generator(rng)
    special = np.vstack([np.eye(n), -np.eye(n), np.ones((1, n)), -np.ones((1, n))])
    if m <= len(special):
        special = special[:0]
    k = m - len(special)
    g = gen.standard_normal((k, n))
    sparse = gen.random(k) < 1 / 3
    if n > 1 and np.any(sparse):
        keep = gen.random((int(sparse.sum()), n)) < gen.random((int(sparse.sum()), 1))
        keep[np.arange(keep.shape[0]), gen.integers(0, n, keep.shape[0])] = True
        g[sparse] *= keep
    return normalize_to_dual_sphere(np.vstack([special, g]), r)


@dataclass
class Net:
    points: np.ndarray
    radius_target: float
    radius_measured: float
    body: object
    _tree: cKDTree | None = field(default=None, init=False, repr=False, compare=False)

    def __len__(self):
        return len(self.points)

    @property
    def tree(self) -> cKDTree:
        if self._tree is None:
            self._tree = cKDTree(self.points)
        return self._tree


def _sub(stream: RandomSource, k: int) -> RandomSource:
    return stream.child(k) if isinstance(stream, SeededStream) else stream


def greedy_net(
    body,
    rho: float,
    probe_budget: int,
    stream: RandomSource,
    max_points: int | None = None,
    fresh_probes: int | None = None,
    max_dim: int = MAX_NET_DIM,
) -> Net:
    """Farthest-point greedy ``rho``-cover of a probe cloud drawn from ``body``.

    Raises :class:`NetError` when more than ``max_points`` points (default: the
    whole probe budget) would be needed.
    """
    if not rho > 0:
        raise ConfigurationError("rho must be positive")
    if isinstance(body, DualSphere) and body.n > max_dim:
        raise ConfigurationError(f"polar-sphere nets are limited to n <= {max_dim}")
    gen = as_generator(_sub(stream, 0))
    probes = body.sample(int(probe_budget), gen)
    max_points = int(probe_budget) if max_points is None else int(max_points)

    if isinstance(body, Ball):
        chosen = [np.zeros(body.n)]
    else:
        chosen = [probes[0]]
    dist = np.linalg.norm(probes - chosen[0], axis=1)
    while True:
        far = int(np.argmax(dist))
        if dist[far] <= rho:
            break
        if len(chosen) >= max_points:
            raise NetError(
                f"probe budget exhausted with {len(chosen)} points at radius {dist[far]:.4g} > {rho}",
                achieved_radius=float(dist[far]),
            )
        chosen.append(probes[far])
        np.minimum(dist, np.linalg.norm(probes - probes[far], axis=1), out=dist)

    net = Net(np.array(chosen), float(rho), 0.0, body)
    fresh_gen = as_generator(_sub(stream, 1))
    fresh = body.sample(int(fresh_probes or probe_budget), fresh_gen)
    net.radius_measured = float(np.max(net.tree.query(fresh)[0]))
    return net


def project_to_net(net: Net, z):
    """Nearest net point (l2) and its distance; row-wise for a 2-D ``z``."""
    z = np.asarray(z, dtype=float)
    if z.shape[-1] != net.points.shape[1]:
        raise DomainError("dimension mismatch between net and query")
    d, i = net.tree.query(z)
    return net.points[i], d


def coverage_report(net: Net, probes: np.ndarray) -> dict:
    """Fraction of probes farther than the target radius, and the worst distance."""
    d = net.tree.query(probes)[0]
    return {
        "probes": int(len(d)),
        "max_distance": float(d.max()),
        "violations": int(np.count_nonzero(d > net.radius_target)),
        "violations_beyond_5pct": int(np.count_nonzero(d > 1.05 * net.radius_target)),
    }


def save_net(net: Net, path) -> None:
    """Text format: ``#`` header lines, then one point per line."""
    body = net.body
    if isinstance(body, DualSphere):
        desc = f"body=dual_sphere n={body.n} r={body.r!r}"
    else:
        desc = f"body=ball n={body.n} rho={body.rho!r}"
    lines = [
        "# polylab-net v1",
        f"# {desc} radius_target={net.radius_target!r} radius_measured={net.radius_measured!r}",
    ]
    lines += [" ".join(repr(float(x)) for x in p) for p in net.points]
    Path(path).write_text("\n".join(lines) + "\n")


def load_net(path) -> Net:
    header = {}
    rows = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            for item in line[1:].split():
                if "=" in item:
                    key, val = item.split("=", 1)
                    header[key] = val
        elif line.strip():
            rows.append([float(x) for x in line.split()])
    n = int(header["n"])
    if header["body"] == "dual_sphere":
        body = DualSphere(n, float(header["r"]))
    else:
        body = Ball(n, float(header["rho"]))
    pts = np.array(rows, dtype=float).reshape(-1, n)
    return Net(pts, float(header["radius_target"]), float(header["radius_measured"]), body)


def circle_cover_bounds(rho: float) -> tuple[int, int]:
    """Bounds on the size of a greedy ``rho``-net of the unit circle.

    A chord of length ``rho`` subtends ``theta = 2 asin(rho/2)``.  Covering
    needs at least ``pi / theta`` points; greedy points are pairwise more than
    ``rho`` apart, so there are fewer than ``2 pi / theta`` of them.
    """
    theta = 2 * math.asin(min(1.0, rho / 2))
    return math.ceil(math.pi / theta), math.ceil(2 * math.pi / theta) - 1
