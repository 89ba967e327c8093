"""Block decompositions of the coordinates whose block-l2 sum tracks the polar norm.

For any partition into at most ``r`` blocks, ``sum_j ||z_{I_j}||_2 <= ||z||_{L_r°}``
(the block sum is ``<z, w>`` for a ``w`` in ``L_r``).  The round-robin partition
over the nonincreasing rearrangement is also expected to stay above
``||z||_{L_r°} / sqrt(2)``; :func:`verify_sandwich` checks both sides.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .interp_norm import dual_gauge_exact, rearrange_desc


@dataclass(frozen=True)
class BlockPartition:
    """Disjoint index blocks ``I_1, ..., I_r`` and the l2 norm of ``z`` on each."""

    blocks: tuple
    block_l2: np.ndarray
    n: int

    def __post_init__(self):
        idx = np.concatenate([np.asarray(b, dtype=int) for b in self.blocks]) if self.blocks else np.array([], int)
        if idx.size != self.n or not np.array_equal(np.sort(idx), np.arange(self.n)):
            raise DomainError("blocks must be disjoint and cover {0, ..., n-1}")
        if len(self.block_l2) != len(self.blocks):
            raise DomainError("need one l2 norm per block")

    @property
    def r(self) -> int:
        return len(self.blocks)


def partition_from_blocks(z, blocks) -> BlockPartition:
    """Wrap an arbitrary list of index blocks, computing the block norms of ``z``."""
    z = np.asarray(z, dtype=float)
    blocks = tuple(np.asarray(b, dtype=int) for b in blocks)
    norms = np.array([math.sqrt(float(np.sum(z[b] ** 2))) for b in blocks])
    return BlockPartition(blocks, norms, z.size)


def round_robin_partition(z, r: int) -> BlockPartition:
    """Deal the coordinates, largest ``|z_i|`` first, into ``r`` blocks in turn.

    Sorted position ``k`` (0-based, stable ties) lands in block ``k mod r``.
    """
    z = np.asarray(z, dtype=float)
    n = z.size
    if int(r) != r or not 1 <= r <= n:
        raise DomainError(f"need an integer 1 <= r <= n, got r={r}, n={n}")
    r = int(r)
    perm = rearrange_desc(z).perm
    blocks = [np.sort(perm[j::r]) for j in range(r)]
    return partition_from_blocks(z, blocks)


def block_l2_sum(p: BlockPartition) -> float:
    return float(np.sum(p.block_l2))


@dataclass(frozen=True)
class SandwichReport:
    lower_ok: bool
    upper_ok: bool
    ratio: float
    block_sum: float
    exact: float

    @property
    def ok(self) -> bool:
        return self.lower_ok and self.upper_ok


def verify_sandwich(z, r: int, partition: BlockPartition | None = None) -> SandwichReport:
    """Check ``exact/sqrt(2) <= block sum <= exact`` for a partition of ``z``.

    Defaults to the round-robin partition.  Failures are reported, not raised.
    """
    z = np.asarray(z, dtype=float)
    p = round_robin_partition(z, r) if partition is None else partition
    s = block_l2_sum(p)
    exact = dual_gauge_exact(z, r)
    tol = 1e-9 * max(1.0, float(np.max(np.abs(z))) * math.sqrt(z.size))
    ratio = s / exact if exact > 0 else 1.0
    return SandwichReport(
        lower_ok=s >= exact / math.sqrt(2) - tol,
        upper_ok=s <= exact + tol,
        ratio=ratio,
        block_sum=s,
        exact=exact,
    )


def random_partition(n: int, r: int, rng: np.random.Generator) -> list:
    """Uniformly random assignment of ``n`` indices to at most ``r`` labelled blocks.

    Empty blocks are dropped, so fewer than ``r`` blocks may come back.
    """
    labels = rng.integers(0, r, size=n)
    return [np.flatnonzero(labels == j) for j in range(r) if np.any(labels == j)]


def random_block_sums(z, r: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Block-l2 sums of ``z`` under ``count`` random labellings into at most ``r`` blocks.

    Vectorized counterpart of :func:`random_partition` + :func:`block_l2_sum`.
    """
    z = np.asarray(z, dtype=float)
    labels = rng.integers(0, r, size=(count, z.size))
    labels += r * np.arange(count)[:, None]
    sq = np.bincount(labels.ravel(), weights=np.tile(z * z, count), minlength=count * r)
    return np.sqrt(sq).reshape(count, r).sum(axis=1)
