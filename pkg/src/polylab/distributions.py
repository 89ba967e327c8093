"""Symmetric variance-one scalar laws, seeded streams and random matrices.

Every law is rescaled so that its variance is exactly one.  Each law carries
small-ball constants ``(kappa, delta)`` with ``Pr(|xi| >= kappa) >= delta``;
defaults are closed-form.

Randomness is drawn from :class:`SeededStream` objects.  A stream is a pair
``(master_seed, stream_index)`` mapped onto a counter-based Philox generator,
so substreams are independent of each other and of the order in which they
are consumed.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Union

import numpy as np
from scipy import special, stats

from .errors import ConfigurationError, ResourceError

#: Largest matrix (in entries) :func:`sample_matrix` will allocate.
MAX_MATRIX_ENTRIES = 50_000_000

_CHUNK = 1 << 20


class Law(str, enum.Enum):
    GAUSSIAN = "gaussian"
    RADEMACHER = "rademacher"
    UNIFORM = "uniform"
    STUDENT_T = "student_t"
    PARETO = "pareto"
    TWOPOINT = "twopoint"


class Estimate(NamedTuple):
    """A Monte Carlo point estimate with its standard error."""

    value: float
    stderr: float


@dataclass(frozen=True)
class SeededStream:
    """Address of an independent random substream.

    ``tag`` lets one trial open several unrelated substreams (matrix,
    directions, ...) without colliding with other trial indices.
    """

    master_seed: int
    stream_index: int = 0
    tag: tuple = ()

    def __post_init__(self):
        if not 0 <= int(self.master_seed) < 2**64:
            raise ConfigurationError("master_seed must be a 64-bit unsigned integer")
        if int(self.stream_index) < 0:
            raise ConfigurationError("stream_index must be nonnegative")

    def generator(self) -> np.random.Generator:
        key = (int(self.stream_index),) + tuple(int(t) for t in self.tag)
        seq = np.random.SeedSequence(entropy=int(self.master_seed), spawn_key=key)
        return np.random.Generator(np.random.Philox(seq))

    def child(self, *tag: int) -> "SeededStream":
        return SeededStream(self.master_seed, self.stream_index, self.tag + tuple(tag))

    def trial(self, index: int) -> "SeededStream":
        """Stream for trial ``index`` of a campaign rooted at this stream."""
        return SeededStream(self.master_seed, index, self.tag)


RandomSource = Union[SeededStream, np.random.Generator]


def as_generator(source: RandomSource) -> np.random.Generator:
    if isinstance(source, np.random.Generator):
        return source
    if isinstance(source, SeededStream):
        return source.generator()
    raise TypeError(f"expected SeededStream or numpy Generator, got {type(source).__name__}")


@dataclass(frozen=True)
class DistributionSpec:
    """A symmetric, variance-one law together with its small-ball constants.

    Parameters
    ----------
    kind : Law or str
    dof : float, optional
        Degrees of freedom for ``student_t`` (must exceed 2).
    shape : float, optional
        Tail index for ``pareto`` (must exceed 2).
    a, p : float, optional
        ``twopoint``: ``|xi| = a`` with probability ``p``, otherwise ``|xi| = b``
        where ``b`` is fixed by the unit-variance constraint (needs ``p*a**2 <= 1``).
    kappa, delta : float, optional
        Small-ball constants.  When ``kappa`` is given without ``delta`` the
        exact mass ``Pr(|xi| >= kappa)`` is used.
    """

    kind: Law
    dof: float | None = None
    shape: float | None = None
    a: float | None = None
    p: float | None = None
    kappa: float | None = field(default=None)
    delta: float | None = field(default=None)

    def __post_init__(self):
        try:
            kind = Law(self.kind)
        except ValueError:
            raise ConfigurationError(f"unknown law {self.kind!r}") from None
        object.__setattr__(self, "kind", kind)
        if kind is Law.STUDENT_T and (self.dof is None or not self.dof > 2):
            raise ConfigurationError("student_t needs dof > 2 for finite variance")
        if kind is Law.PARETO and (self.shape is None or not self.shape > 2):
            raise ConfigurationError("pareto needs shape > 2 for finite variance")
        if kind is Law.TWOPOINT:
            if self.a is None or self.p is None or not self.a > 0 or not 0 < self.p < 1:
                raise ConfigurationError("twopoint needs a > 0 and 0 < p < 1")
            if self.p * self.a**2 > 1 + 1e-12:
                raise ConfigurationError("twopoint needs p*a^2 <= 1 to keep variance one")
        kappa, delta = self.kappa, self.delta
        if kappa is None:
            kappa, default_delta = _default_small_ball(self)
            delta = default_delta if delta is None else delta
        elif delta is None:
            delta = small_ball_mass(self, kappa)
        if not kappa > 0:
            raise ConfigurationError("kappa must be positive")
        if not 0 < delta <= 1:
            raise ConfigurationError("delta must lie in (0, 1]")
        object.__setattr__(self, "kappa", float(kappa))
        object.__setattr__(self, "delta", float(delta))

    # Convenience constructors
    @classmethod
    def gaussian(cls, **kw):
        return cls(Law.GAUSSIAN, **kw)

    @classmethod
    def rademacher(cls, **kw):
        return cls(Law.RADEMACHER, **kw)

    @classmethod
    def uniform(cls, **kw):
        return cls(Law.UNIFORM, **kw)

    @classmethod
    def student_t(cls, dof, **kw):
        return cls(Law.STUDENT_T, dof=dof, **kw)

    @classmethod
    def pareto(cls, shape, **kw):
        return cls(Law.PARETO, shape=shape, **kw)

    @classmethod
    def twopoint(cls, a, p, **kw):
        return cls(Law.TWOPOINT, a=a, p=p, **kw)

    @property
    def continuous(self) -> bool:
        return self.kind in (Law.GAUSSIAN, Law.UNIFORM, Law.STUDENT_T, Law.PARETO)

    @property
    def twopoint_low(self) -> float:
        """The second atom ``b`` of a two-point mixture."""
        return math.sqrt(max(0.0, (1 - self.p * self.a**2) / (1 - self.p)))

    def __str__(self):
        return format_dist(self)


def _fmt_num(x: float) -> str:
    return repr(float(x)).removesuffix(".0") if float(x).is_integer() else repr(float(x))


def format_dist(spec: DistributionSpec) -> str:
    """Inverse of :func:`parse_dist` (small-ball constants are not encoded)."""
    if spec.kind is Law.STUDENT_T:
        return f"student_t:{_fmt_num(spec.dof)}"
    if spec.kind is Law.PARETO:
        return f"pareto:{_fmt_num(spec.shape)}"
    if spec.kind is Law.TWOPOINT:
        return f"twopoint:a={_fmt_num(spec.a)},p={_fmt_num(spec.p)}"
    return spec.kind.value


def parse_dist(text: str, kappa: float | None = None, delta: float | None = None) -> DistributionSpec:
    """Parse names such as ``"gaussian"``, ``"student_t:5"``, ``"twopoint:a=2,p=0.125"``."""
    name, _, arg = text.strip().partition(":")
    name = name.strip().lower()
    try:
        law = Law(name)
    except ValueError:
        raise ConfigurationError(f"unknown law {name!r}") from None
    kw = {"kappa": kappa, "delta": delta}
    try:
        if law is Law.STUDENT_T:
            return DistributionSpec(law, dof=float(arg), **kw)
        if law is Law.PARETO:
            return DistributionSpec(law, shape=float(arg), **kw)
        if law is Law.TWOPOINT:
            params = dict(item.split("=", 1) for item in arg.split(",") if item)
            return DistributionSpec(law, a=float(params["a"]), p=float(params["p"]), **kw)
    except (ValueError, KeyError) as exc:
        raise ConfigurationError(f"cannot parse law parameters in {text!r}: {exc}") from None
    if arg:
        raise ConfigurationError(f"law {name!r} takes no parameters")
    return DistributionSpec(law, **kw)


def _scale(spec: DistributionSpec) -> float:
    """Standard deviation of the raw (unnormalized) law."""
    if spec.kind is Law.STUDENT_T:
        return math.sqrt(spec.dof / (spec.dof - 2))
    if spec.kind is Law.PARETO:
        return math.sqrt(spec.shape / (spec.shape - 2))
    return 1.0


def small_ball_mass(spec: DistributionSpec, kappa: float) -> float:
    """Exact ``Pr(|xi| >= kappa)`` for the normalized law."""
    k = float(kappa)
    if k <= 0:
        return 1.0
    kind = spec.kind
    if kind is Law.GAUSSIAN:
        return float(special.erfc(k / math.sqrt(2)))
    if kind is Law.RADEMACHER:
        return 1.0 if k <= 1 else 0.0
    if kind is Law.UNIFORM:
        return max(0.0, 1 - k / math.sqrt(3))
    if kind is Law.STUDENT_T:
        return float(2 * stats.t.sf(k * _scale(spec), spec.dof))
    if kind is Law.PARETO:
        y = k * _scale(spec)
        return 1.0 if y <= 1 else float(y ** (-spec.shape))
    b = spec.twopoint_low
    return (spec.p if k <= spec.a else 0.0) + ((1 - spec.p) if k <= b else 0.0)


def _default_small_ball(spec: DistributionSpec) -> tuple[float, float]:
    kind = spec.kind
    if kind is Law.RADEMACHER:
        return 1.0, 1.0
    if kind is Law.UNIFORM:
        return 1.0, 1 - 1 / math.sqrt(3)
    if kind is Law.PARETO:
        return 1 / _scale(spec), 1.0
    if kind is Law.TWOPOINT:
        b = spec.twopoint_low
        if b > 0:
            return min(spec.a, b), 1.0
        return spec.a, spec.p
    # gaussian, student_t
    return 0.5, small_ball_mass(spec, 0.5)


def sample(spec: DistributionSpec, size, rng: RandomSource) -> np.ndarray:
    """Array of iid draws of the normalized law with the given shape."""
    gen = as_generator(rng)
    kind = spec.kind
    if kind is Law.GAUSSIAN:
        return gen.standard_normal(size)
    if kind is Law.RADEMACHER:
        return 2.0 * gen.integers(0, 2, size=size, dtype=np.int8) - 1.0
    if kind is Law.UNIFORM:
        s3 = math.sqrt(3)
        return gen.uniform(-s3, s3, size)
    if kind is Law.STUDENT_T:
        return gen.standard_t(spec.dof, size) / _scale(spec)
    signs = 2.0 * gen.integers(0, 2, size=size, dtype=np.int8) - 1.0
    if kind is Law.PARETO:
        # numpy's pareto is Lomax; shift by one for the classical law on [1, inf)
        return signs * (1.0 + gen.pareto(spec.shape, size)) / _scale(spec)
    high = gen.random(size) < spec.p
    return signs * np.where(high, spec.a, spec.twopoint_low)


def sample_scalar(spec: DistributionSpec, stream: RandomSource) -> float:
    """One draw of ``xi``; deterministic for a given :class:`SeededStream`."""
    return float(sample(spec, 1, stream)[0])


def sample_matrix(
    spec: DistributionSpec,
    N: int,
    n: int,
    stream: RandomSource,
    max_entries: int = MAX_MATRIX_ENTRIES,
) -> np.ndarray:
    """``N x n`` matrix with iid entries; row ``i`` is the random vector ``X_i``."""
    N, n = int(N), int(n)
    if N < 1 or n < 1:
        raise ConfigurationError(f"need N >= 1 and n >= 1, got N={N}, n={n}")
    if N * n > max_entries:
        raise ResourceError(f"{N}x{n} matrix exceeds the cap of {max_entries} entries")
    return sample(spec, (N, n), stream)


def estimate_small_ball(
    spec: DistributionSpec, kappa: float, M: int, stream: RandomSource
) -> Estimate:
    """Monte Carlo estimate of ``Pr(|xi| >= kappa)`` with its binomial stderr."""
    M = int(M)
    if M < 100:
        raise ConfigurationError("estimate_small_ball needs M >= 100")
    gen = as_generator(stream)
    hits = 0
    for start in range(0, M, _CHUNK):
        m = min(_CHUNK, M - start)
        hits += int(np.count_nonzero(np.abs(sample(spec, m, gen)) >= kappa))
    p = hits / M
    return Estimate(p, math.sqrt(p * (1 - p) / M))
