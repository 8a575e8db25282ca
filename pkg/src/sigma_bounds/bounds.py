"""Upper and lower bounds on the largest singular value.

Every bound is stated on ``sigma^(2p)``; :class:`BoundValue` carries both that
raw quantity and its ``2p``-th root so callers can compare on the sigma
scale.

Upper bounds
    * :func:`schur_bound`: ``max_{i,j} r_i c_j``
    * :func:`refined_bound`: ``max_i sum_j |a_ij| c_j``
    * :func:`support_bound`: ``max_{a_ij != 0} r_i c_j``
    * :func:`walk_upper_bound`: ``max_k w^{r+p}_{|A|}(k) / w^r_{|A|}(k)``

Lower bound
    * :func:`walk_lower_bound`: ``w_A^{r+p} / w_A^r``

``r_i``/``c_j`` are row/column sums of ``|A|`` and ``w^r`` are the walk
quantities of :mod:`sigma_bounds.walks`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInputError, TheoremInapplicableError
from .matrix import (entry_sum_gram, frobenius_norm_sq, gram_apply, is_zero,
                     margin_sums, modulus_matrix)
from .walks import LN2, WalkLedger

UPPER = "upper"
LOWER = "lower"
ESTIMATE = "estimate"

DEFAULT_REL_TOL = 1e-9
DEFAULT_R_MAX = 1000
DEGENERACY_TOL = 1e-12

_TINY = 1e-300


@dataclass(frozen=True)
class BoundValue:
    kind: str
    value: float
    raw: float
    r: int
    p: int
    certified: bool

    @classmethod
    def from_log(cls, kind, log_raw, r, p, certified=True):
        """Build from ``log(raw)``; ``value`` is computed in log space so it
        stays finite even when ``raw`` overflows."""
        if log_raw == -math.inf:
            return cls(kind, 0.0, 0.0, r, p, certified)
        try:
            raw = math.exp(log_raw)
        except OverflowError:
            raw = math.inf
        return cls(kind, math.exp(log_raw / (2 * p)), raw, r, p, certified)

    @classmethod
    def from_raw(cls, kind, raw, r, p, certified=True):
        raw = float(raw)
        return cls(kind, raw ** (1.0 / (2 * p)), raw, r, p, certified)

    def to_dict(self):
        return {"kind": self.kind, "value": self.value, "raw": self.raw,
                "r": self.r, "p": self.p, "certified": self.certified}

    @classmethod
    def from_dict(cls, d):
        return cls(d["kind"], d["value"], d["raw"], d["r"], d["p"], d["certified"])


def exact_zero(kind=UPPER, r=0, p=1):
    """The exact answer sigma = 0 for an all-zero matrix."""
    return BoundValue(kind, 0.0, 0.0, r, p, True)


def _require_nonzero(a, what):
    if is_zero(a):
        raise DegenerateInputError(f"{what}: matrix is all-zero, sigma = 0 exactly")


# -- row/column-sum bounds -------------------------------------------------

def schur_bound(a):
    _require_nonzero(a, "schur_bound")
    ms = margin_sums(a)
    return BoundValue.from_raw(UPPER, float(ms.row_sums.max() * ms.col_sums.max()), 0, 1)


def refined_bound(a):
    _require_nonzero(a, "refined_bound")
    mod = modulus_matrix(a)
    ms = margin_sums(a)
    return BoundValue.from_raw(UPPER, float(np.max(mod.matvec(ms.col_sums))), 0, 1)


def support_bound(a):
    _require_nonzero(a, "support_bound")
    ms = margin_sums(a)
    rows, cols, _ = a.triplets()
    return BoundValue.from_raw(UPPER, float(np.max(ms.row_sums[rows] * ms.col_sums[cols])), 0, 1)


# -- walk-ratio bounds -----------------------------------------------------

def _check_rp(r, p):
    if r < 0 or p < 1:
        raise ValueError(f"need r >= 0 and p >= 1, got r={r}, p={p}")


def upper_from_ledger(ledger, r, p):
    """Walk upper bound from a ledger built on ``|A|`` (extended as needed)."""
    _check_rp(r, p)
    ledger.extend(r + p)
    den, num = ledger.level(r), ledger.level(r + p)
    live = den.v > 0
    if not np.any(live):
        raise DegenerateInputError(f"walk on |A| has died at level {r}; no admissible row")
    best = float(np.max(num.v[live] / den.v[live]))
    if best == 0.0:
        return BoundValue.from_log(UPPER, -math.inf, r, p)
    log_raw = (num.exponent - den.exponent) * LN2 + math.log(best)
    return BoundValue.from_log(UPPER, log_raw, r, p)


def lower_from_ledger(ledger, r, p):
    """Walk lower bound from a ledger built on ``A`` itself (extended as needed).

    The caller is responsible for ruling out the degenerate case first.
    """
    _check_rp(r, p)
    ledger.extend(r + p)
    den, num = ledger.level(r), ledger.level(r + p)
    t_den, t_num = den.total_scaled(), num.total_scaled()
    if not t_den > 0:
        raise AssertionError(f"walk total w^{r} = {t_den} vanished although sum(AA*) > 0")
    if t_num <= 0:
        return BoundValue.from_log(LOWER, -math.inf, r, p)
    log_raw = (num.exponent - den.exponent) * LN2 + math.log(t_num / t_den)
    return BoundValue.from_log(LOWER, log_raw, r, p)


def walk_upper_bound(a, r, p, ledger=None):
    _require_nonzero(a, "walk_upper_bound")
    if ledger is None:
        ledger = WalkLedger(modulus_matrix(a))
    return upper_from_ledger(ledger, r, p)


@dataclass(frozen=True)
class DegeneracyReport:
    w1_zero: bool
    gram_ones_residual: float
    entry_sum: float


def degeneracy_check(a):
    """Detect ``sum(AA*) == 0``, i.e. the all-ones vector is a null vector of AA*."""
    s = entry_sum_gram(a)
    w1_zero = s <= DEGENERACY_TOL * frobenius_norm_sq(a)
    residual = float(np.linalg.norm(gram_apply(a, np.ones(a.nrows))))
    return DegeneracyReport(w1_zero, residual, s)


def require_applicable(a):
    d = degeneracy_check(a)
    if d.w1_zero:
        raise TheoremInapplicableError(
            "walk-total lower bound is inapplicable: sum(AA*) = 0, so the all-ones "
            "vector is a null vector of AA* and every walk total w^r (r >= 1) is zero",
            entry_sum=d.entry_sum, gram_ones_residual=d.gram_ones_residual)
    return d


def walk_lower_bound(a, r, p, ledger=None):
    _check_rp(r, p)
    require_applicable(a)
    if ledger is None:
        ledger = WalkLedger(a)
    return lower_from_ledger(ledger, r, p)


def row_ratio_estimate(ledger, r, p):
    """``max_k Re(w_A^{r+p}(k) / w_A^r(k))`` over rows with ``w_A^r(k) != 0``.

    Diagnostic only; unlike the two walk bounds this is not certified for
    signed or complex matrices at finite ``r``.
    """
    ledger.extend(r + p)
    den, num = ledger.level(r), ledger.level(r + p)
    live = den.v != 0
    if not np.any(live):
        return None
    ratios = np.real(num.v[live] / den.v[live])
    best = float(np.max(ratios))
    if best <= 0:
        return None
    try:
        return math.exp((num.exponent - den.exponent) * LN2 + math.log(best))
    except OverflowError:
        return math.inf


# -- sandwich estimator ----------------------------------------------------

@dataclass
class SandwichResult:
    estimate: BoundValue
    upper_trace: list = field(default_factory=list)
    lower_trace: list = field(default_factory=list)
    row_ratio_trace: list = field(default_factory=list)
    converged: bool = False
    r_stop: int = 0

    def to_dict(self):
        return {"estimate": self.estimate.to_dict(), "upper_trace": list(self.upper_trace),
                "lower_trace": list(self.lower_trace),
                "row_ratio_trace": list(self.row_ratio_trace),
                "converged": self.converged, "r_stop": self.r_stop}

    @classmethod
    def from_dict(cls, d):
        return cls(BoundValue.from_dict(d["estimate"]), list(d["upper_trace"]),
                   list(d["lower_trace"]), list(d["row_ratio_trace"]),
                   d["converged"], d["r_stop"])


def sandwich_estimate(a, p=1, rel_tol=DEFAULT_REL_TOL, r_max=DEFAULT_R_MAX):
    """Squeeze ``sigma^(2p)`` between walk upper bounds on ``|A|`` and walk
    lower bounds on ``A`` for ``r = 0, 1, ...`` until the relative gap drops
    below ``rel_tol`` or ``r`` reaches ``r_max``.

    For nonnegative matrices the gap closes whenever the dominant singular
    subspace is not orthogonal to the all-ones vector.  For signed or complex
    matrices the upper trace may converge to ``sigma(|A|)^(2p)`` instead, in
    which case ``converged`` stays False.  The returned estimate is always the
    last (certified) lower bound.
    """
    if p < 1 or rel_tol <= 0 or r_max < 0:
        raise ValueError("need p >= 1, rel_tol > 0, r_max >= 0")
    require_applicable(a)
    up_ledger = WalkLedger(modulus_matrix(a))
    lo_ledger = WalkLedger(a)
    result = None
    for r in range(r_max + 1):
        upper = upper_from_ledger(up_ledger, r, p)
        lower = lower_from_ledger(lo_ledger, r, p)
        if result is None:
            result = SandwichResult(estimate=lower)
        result.upper_trace.append(upper.raw)
        result.lower_trace.append(lower.raw)
        result.row_ratio_trace.append(row_ratio_estimate(lo_ledger, r, p))
        result.r_stop = r
        result.estimate = BoundValue(ESTIMATE, lower.value, lower.raw, r, p, True)
        gap = (upper.raw - lower.raw) / max(lower.raw, _TINY)
        if gap < rel_tol:
            result.converged = True
            break
    return result

