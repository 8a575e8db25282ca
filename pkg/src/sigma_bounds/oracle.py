"""Reference value of the largest singular value.

Power iteration on the Gram operator ``AA*`` from several deterministically
seeded starts.  This path deliberately shares nothing with the walk engine
beyond :func:`gram_apply`: starts are random rather than the all-ones
vector, iterates are normalised in the 2-norm, and the estimate is a
Rayleigh quotient rather than a ratio of row sums.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import ShapeError
from .matrix import gram_apply, is_zero

logger = logging.getLogger(__name__)

ORACLE_SEED = 0x5EED


@dataclass(frozen=True)
class OracleResult:
    sigma: float
    iterations: int
    residual: float
    converged: bool
    restarts_used: int


def _power_iterate(a, x0, tol, max_iter, history=None):
    """Power iteration on ``AA*``.

    Returns ``(lam, v, iterations, residual, converged)`` where ``lam`` is the
    Rayleigh quotient ``||A* v||^2`` of the final unit vector ``v``.
    """
    v = x0 / np.linalg.norm(x0)
    lam = 0.0
    residual = math.inf
    for it in range(1, max_iter + 1):
        u = a.rmatvec(v)
        lam = float(np.vdot(u, u).real)
        if history is not None:
            history.append(lam)
        if lam == 0.0:
            return 0.0, v, it, 0.0, True
        w = a.matvec(u)
        residual = float(np.linalg.norm(w - lam * v)) / lam
        if residual <= tol:
            return lam, v, it, residual, True
        v = w / np.linalg.norm(w)
    return lam, v, max_iter, residual, False


def _start_vector(a, seed):
    rng = np.random.default_rng([ORACLE_SEED, seed])
    x = rng.standard_normal(a.nrows)
    if a.mode == "complex":
        x = x + 1j * rng.standard_normal(a.nrows)
    return x


def _small_gram(a):
    """The smaller of ``AA*`` and ``A*A`` as a dense array (side at most 2)."""
    d = a.to_dense()
    if a.nrows <= a.ncols:
        return d @ d.conj().T
    return d.conj().T @ d


def exact_small_sigma(a):
    """Closed-form largest singular value when ``min(m, n) <= 2``."""
    if min(a.shape) > 2:
        raise ShapeError(f"closed form needs min(m, n) <= 2, got shape {a.shape}")
    g = _small_gram(a)
    if g.shape == (1, 1):
        return math.sqrt(max(float(g[0, 0].real), 0.0))
    p, d = float(g[0, 0].real), float(g[1, 1].real)
    b = abs(g[0, 1])
    half_diff = 0.5 * (p - d)
    lam = 0.5 * (p + d) + math.hypot(half_diff, b)
    return math.sqrt(max(lam, 0.0))


def _small_residual(a, sigma):
    """Eigen-residual of the closed-form value against the small Gram matrix."""
    g = _small_gram(a)
    lam = sigma * sigma
    if lam == 0.0:
        return 0.0
    _, vecs = np.linalg.eigh(g)
    u = vecs[:, -1]
    return float(np.linalg.norm(g @ u - lam * u)) / lam


def reference_sigma(a, tol=1e-12, max_iter=10000, restarts=5):
    """Largest singular value of ``a`` by restarted power iteration.

    Non-convergence is reported through ``converged``, never raised.  When
    ``min(m, n) <= 2`` the closed form is returned after being cross-checked
    against the iteration.
    """
    if is_zero(a):
        return OracleResult(0.0, 0, 0.0, True, 0)

    small = min(a.shape) <= 2
    # the closed form is authoritative for small matrices; one start suffices to cross-check it
    n_starts = 1 if small else max(1, restarts)
    best = None
    total_iters = 0
    for k in range(n_starts):
        lam, _, its, res, conv = _power_iterate(a, _start_vector(a, k), tol, max_iter)
        total_iters += its
        # best Rayleigh quotient; ties keep the earlier restart
        if best is None or lam > best[0]:
            best = (lam, res, conv)
    lam, residual, converged = best
    sigma = math.sqrt(lam)

    if small:
        exact = exact_small_sigma(a)
        if abs(exact - sigma) > 1e-8 * max(exact, 1.0):
            logger.warning("power iteration %.17g disagrees with closed form %.17g", sigma, exact)
        return OracleResult(exact, total_iters, _small_residual(a, exact), True, n_starts)
    return OracleResult(sigma, total_iters, residual, converged, n_starts)
