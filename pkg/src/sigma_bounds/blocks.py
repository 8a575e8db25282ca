"""Bounds for block-partitioned matrices.

Partition the rows of ``A`` into ``P_1..P_p`` and the columns into
``Q_1..Q_q``.  The compression matrix ``B`` has entries
``b_ij = sigma(A[P_i, Q_j])`` and satisfies ``sigma(A) <= sigma(B)``.  Since
``B`` is nonnegative, the row/column-sum bounds of :mod:`sigma_bounds.bounds`
applied to ``B`` give cheap upper bounds on ``sigma(A)^2`` in turn.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import UPPER, BoundValue, exact_zero, refined_bound, support_bound
from .errors import PartitionError
from .matrix import Matrix, is_zero
from .oracle import reference_sigma


_DENSE_STRIP_LIMIT = 1 << 20


@dataclass(frozen=True)
class BlockPartition:
    row_parts: tuple
    col_parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "row_parts", tuple(tuple(int(i) for i in part) for part in self.row_parts))
        object.__setattr__(self, "col_parts", tuple(tuple(int(i) for i in part) for part in self.col_parts))

    @classmethod
    def contiguous(cls, row_sizes, col_sizes):
        return cls(_split(row_sizes), _split(col_sizes))

    @classmethod
    def trivial(cls, m, n):
        return cls((tuple(range(m)),), (tuple(range(n)),))

    @classmethod
    def finest(cls, m, n):
        return cls(tuple((i,) for i in range(m)), tuple((j,) for j in range(n)))

    @property
    def shape(self):
        return len(self.row_parts), len(self.col_parts)

    def validate(self, m, n):
        _check_cover(self.row_parts, m, "row")
        _check_cover(self.col_parts, n, "column")


def _split(sizes):
    parts, start = [], 0
    for s in sizes:
        if s < 1:
            raise PartitionError(f"part sizes must be positive, got {list(sizes)}")
        parts.append(tuple(range(start, start + s)))
        start += s
    return tuple(parts)


def _check_cover(parts, size, what):
    if not parts:
        raise PartitionError(f"{what} partition has no parts")
    seen = []
    for part in parts:
        if not part:
            raise PartitionError(f"{what} partition contains an empty part")
        seen.extend(part)
    if sorted(seen) != list(range(size)):
        raise PartitionError(
            f"{what} parts must be disjoint and cover 0..{size - 1}, got {sorted(seen)}")


@dataclass(frozen=True)
class CompressionMatrix:
    b: Matrix
    oracles: tuple  # OracleResult per block, row-major


def compress(a, part):
    part.validate(*a.shape)
    p, q = part.shape
    values = np.zeros((p, q))
    oracles = []
    all_cols = np.arange(a.ncols)
    for i, rows in enumerate(part.row_parts):
        strip = a.submatrix(rows, all_cols)
        if strip.is_sparse and len(rows) * a.ncols <= _DENSE_STRIP_LIMIT:
            # slicing many small blocks out of CSR is slow; a dense strip is cheap at this size
            strip = strip.to_densified()
        for j, cols in enumerate(part.col_parts):
            res = reference_sigma(strip.submatrix(np.arange(len(rows)), cols))
            values[i, j] = res.sigma
            oracles.append(res)
    return CompressionMatrix(Matrix.from_dense(values), tuple(oracles))


def block_sigma_bound(a, part, compressed=None):
    """``sigma(B)`` for the compression matrix ``B``; an upper bound on ``sigma(A)``."""
    if compressed is None:
        compressed = compress(a, part)
    sigma = reference_sigma(compressed.b).sigma
    return BoundValue(UPPER, sigma, sigma * sigma, 0, 1, True)


def block_partin_bound(a, part, compressed=None):
    """Row/column-sum bounds on ``sigma(A)^2`` evaluated on ``B``.

    Returns ``{"mid": ..., "support": ...}`` where ``mid`` is
    ``max_i sum_k B_ik C_k`` (``C`` the column sums of ``B``) and ``support`` is
    ``max_{B_ij != 0} R_i C_j``.
    """
    if compressed is None:
        compressed = compress(a, part)
    else:
        part.validate(*a.shape)
    if is_zero(a):
        return {"mid": exact_zero(), "support": exact_zero()}
    return {"mid": refined_bound(compressed.b), "support": support_bound(compressed.b)}
