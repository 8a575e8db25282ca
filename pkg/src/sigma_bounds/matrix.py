"""Matrix storage and the handful of kernels every bound is built from.

A :class:`Matrix` is either dense (a row-major ``numpy`` array) or sparse in
canonical compressed-sparse-row form: column indices strictly increasing in
each row and no explicitly stored zeros.  Matrices are immutable.

The Gram operator ``x -> A (A* x)`` is always applied as two mat-vec passes;
``AA*`` itself is never formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ShapeError

REAL = "real"
COMPLEX = "complex"


def _freeze(arr):
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


def _canonical_dtype(values):
    """Downcast complex values with vanishing imaginary parts to float64."""
    values = np.asarray(values)
    if np.iscomplexobj(values):
        if values.size and np.any(values.imag != 0):
            return values.astype(np.complex128)
        return values.real.astype(np.float64)
    return values.astype(np.float64)


class Matrix:
    """An immutable real or complex ``m x n`` matrix, dense or CSR.

    Use the constructors :meth:`from_dense`, :meth:`from_csr` and
    :meth:`from_coo` rather than calling ``Matrix(...)`` directly.
    """

    __slots__ = ("_shape", "_dense", "_csr", "_mode")

    def __init__(self, shape, dense=None, csr=None):
        m, n = (int(s) for s in shape)
        if m < 1 or n < 1:
            raise ShapeError(f"matrix dimensions must be positive, got {m}x{n}")
        if (dense is None) == (csr is None):
            raise ValueError("exactly one of dense/csr storage must be given")
        self._shape = (m, n)
        self._dense = dense
        self._csr = csr
        values = dense if dense is not None else csr.data
        self._mode = COMPLEX if np.iscomplexobj(values) else REAL

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_dense(cls, array):
        arr = _canonical_dtype(np.atleast_2d(np.asarray(array)))
        if arr.ndim != 2:
            raise ShapeError(f"expected a 2-d array, got ndim={arr.ndim}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("matrix entries must be finite")
        return cls(arr.shape, dense=_freeze(arr))

    @classmethod
    def from_csr(cls, indptr, indices, data, shape):
        """Wrap CSR arrays that are already canonical; raise ValueError otherwise."""
        m, n = (int(s) for s in shape)
        indptr = np.asarray(indptr, dtype=np.int64)
        indices = np.asarray(indices, dtype=np.int64)
        data = _canonical_dtype(data)
        if indptr.shape != (m + 1,) or indptr[0] != 0:
            raise ValueError("row pointer array must have length m+1 and start at 0")
        if np.any(np.diff(indptr) < 0):
            raise ValueError("row pointers must be non-decreasing")
        if indptr[-1] != len(indices) or len(indices) != len(data):
            raise ValueError("row pointers, column indices and values disagree in length")
        if len(indices) and (indices.min() < 0 or indices.max() >= n):
            raise ValueError("column index out of range")
        for i in range(m):
            row = indices[indptr[i]:indptr[i + 1]]
            if np.any(np.diff(row) <= 0):
                raise ValueError(f"column indices in row {i} are not strictly increasing")
        if np.any(data == 0):
            raise ValueError("explicit zeros are not allowed in canonical CSR storage")
        if not np.all(np.isfinite(data)):
            raise ValueError("matrix entries must be finite")
        csr = sp.csr_matrix((_freeze(data), _freeze(indices), _freeze(indptr)), shape=(m, n))
        return cls((m, n), csr=csr)

    @classmethod
    def from_coo(cls, rows, cols, values, shape):
        """Build a sparse matrix from triplets; duplicates are summed, zeros dropped."""
        m, n = (int(s) for s in shape)
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        values = np.asarray(values)
        if not (len(rows) == len(cols) == len(values)):
            raise ValueError("triplet arrays differ in length")
        if len(rows) and (rows.min() < 0 or rows.max() >= m or cols.min() < 0 or cols.max() >= n):
            raise ValueError("triplet index out of range")
        if not np.all(np.isfinite(values)):
            raise ValueError("matrix entries must be finite")
        dtype = np.complex128 if np.iscomplexobj(values) else np.float64
        coo = sp.coo_matrix((values.astype(dtype), (rows, cols)), shape=(m, n))
        csr = coo.tocsr()
        csr.sum_duplicates()
        csr.eliminate_zeros()
        csr.sort_indices()
        return cls.from_csr(csr.indptr, csr.indices, csr.data, (m, n))

    @classmethod
    def identity(cls, m):
        return cls.from_dense(np.eye(m))

    @classmethod
    def zeros(cls, m, n, sparse=False):
        if sparse:
            return cls.from_coo([], [], np.zeros(0), (m, n))
        return cls.from_dense(np.zeros((m, n)))

    # -- basic properties -------------------------------------------------

    @property
    def shape(self):
        return self._shape

    @property
    def nrows(self):
        return self._shape[0]

    @property
    def ncols(self):
        return self._shape[1]

    @property
    def mode(self):
        return self._mode

    @property
    def is_sparse(self):
        return self._csr is not None

    @property
    def dtype(self):
        return np.complex128 if self._mode == COMPLEX else np.float64

    @property
    def nnz(self):
        if self.is_sparse:
            return int(self._csr.nnz)
        return int(np.count_nonzero(self._dense))

    @property
    def indptr(self):
        return self._csr.indptr if self.is_sparse else None

    @property
    def indices(self):
        return self._csr.indices if self.is_sparse else None

    @property
    def data(self):
        return self._csr.data if self.is_sparse else None

    def descriptor(self):
        return {"shape": list(self._shape), "nnz": self.nnz, "mode": self._mode,
                "storage": "csr" if self.is_sparse else "dense"}

    def __repr__(self):
        m, n = self._shape
        kind = "csr" if self.is_sparse else "dense"
        return f"<Matrix {m}x{n} {self._mode} {kind} nnz={self.nnz}>"

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self._shape == other._shape and np.array_equal(self.to_dense(), other.to_dense())

    __hash__ = None

    # -- conversions ------------------------------------------------------

    def to_dense(self):
        if self.is_sparse:
            return self._csr.toarray()
        return np.array(self._dense)

    def to_sparse(self):
        if self.is_sparse:
            return self
        rows, cols = np.nonzero(self._dense)
        return Matrix.from_coo(rows, cols, self._dense[rows, cols], self._shape)

    def to_densified(self):
        if not self.is_sparse:
            return self
        return Matrix.from_dense(self._csr.toarray())

    def triplets(self):
        """Return ``(rows, cols, values)`` of the nonzero entries in row-major order."""
        if self.is_sparse:
            coo = self._csr.tocoo()
            return coo.row.astype(np.int64), coo.col.astype(np.int64), coo.data.copy()
        rows, cols = np.nonzero(self._dense)
        return rows, cols, self._dense[rows, cols]

    # -- structural operations --------------------------------------------

    def _like(self, array_or_csr):
        if self.is_sparse:
            csr = array_or_csr.tocsr()
            csr.eliminate_zeros()
            csr.sort_indices()
            return Matrix.from_csr(csr.indptr, csr.indices, csr.data, csr.shape)
        return Matrix.from_dense(array_or_csr)

    def submatrix(self, rows, cols):
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        if self.is_sparse:
            return self._like(self._csr[rows][:, cols])
        return self._like(self._dense[np.ix_(rows, cols)])

    def permuted(self, row_perm, col_perm):
        """Return ``P A Q`` with row ``i`` of the result equal to row ``row_perm[i]``."""
        return self.submatrix(row_perm, col_perm)

    def scaled(self, c):
        if self.is_sparse:
            return self._like(self._csr * c)
        return self._like(self._dense * c)

    def conj_transpose(self):
        if self.is_sparse:
            return self._like(self._csr.conj().T)
        return self._like(self._dense.conj().T)

    # -- mat-vec ----------------------------------------------------------

    def _operand(self):
        return self._csr if self.is_sparse else self._dense

    def matvec(self, x):
        x = np.asarray(x)
        if x.shape != (self.ncols,):
            raise ShapeError(f"matvec expects a vector of length {self.ncols}, got {x.shape}")
        return self._operand() @ x

    def rmatvec(self, y):
        """Apply the conjugate transpose: ``A* y``."""
        y = np.asarray(y)
        if y.shape != (self.nrows,):
            raise ShapeError(f"rmatvec expects a vector of length {self.nrows}, got {y.shape}")
        op = self._operand()
        if self._mode == COMPLEX:
            # (A* y) = conj(A^T conj(y))
            return np.conj(op.T @ np.conj(y))
        return op.T @ y


@dataclass(frozen=True)
class MarginSums:
    """Row sums ``r_i`` and column sums ``c_j`` of the modulus matrix ``|A|``."""

    row_sums: np.ndarray
    col_sums: np.ndarray


def modulus_matrix(a):
    """Entrywise modulus ``|A|``; same shape and sparsity pattern, always real."""
    if a.mode == REAL and _is_nonnegative(a):
        return a
    if a.is_sparse:
        return Matrix.from_csr(a.indptr, a.indices, np.abs(a.data), a.shape)
    return Matrix.from_dense(np.abs(a.to_dense()))


def _is_nonnegative(a):
    values = a.data if a.is_sparse else a._dense
    return bool(np.all(values >= 0))


def margin_sums(a):
    mod = modulus_matrix(a)
    ones_n = np.ones(a.ncols)
    ones_m = np.ones(a.nrows)
    return MarginSums(row_sums=np.asarray(mod.matvec(ones_n), dtype=np.float64),
                      col_sums=np.asarray(mod.rmatvec(ones_m), dtype=np.float64))


def gram_apply(a, x):
    """Return ``A (A* x)`` using two mat-vec passes."""
    x = np.asarray(x)
    if x.shape != (a.nrows,):
        raise ShapeError(f"gram_apply expects a vector of length {a.nrows}, got {x.shape}")
    return a.matvec(a.rmatvec(x))


def entry_sum_gram(a):
    """Sum of all entries of ``AA*``, computed as ``||A* 1||^2``."""
    y = a.rmatvec(np.ones(a.nrows))
    return math.fsum((np.abs(y) ** 2).tolist())


def frobenius_norm_sq(a):
    values = a.data if a.is_sparse else a.to_dense().ravel()
    return math.fsum((np.abs(values) ** 2).tolist())


def is_zero(a):
    return a.nnz == 0
