"""Walk quantities ``w^r(k)`` (row sums of ``(AA*)^r``) and totals ``w^r``.

The iterate ``v_r`` is proportional to ``(AA*)^r 1``.  After every step it
is rebased by an exact power of two so that its max-norm lies in ``[1, 2)``;
the exponent that was divided out is accumulated separately.  Rebasing by a
power of two never rounds, so integer matrices keep exact iterates for as
long as the integers fit in the mantissa, and exact zeros stay zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .matrix import gram_apply

LN2 = math.log(2.0)
REBASE_THRESHOLD = 2.0


@dataclass(frozen=True)
class WalkState:
    """Scaled iterate at power ``r``: ``w^r(k) = 2**exponent * v[k]``."""

    r: int
    v: np.ndarray
    exponent: int = 0

    @property
    def log_scale(self):
        return self.exponent * LN2

    @property
    def dead(self):
        return not np.any(self.v)

    def reconstruct(self):
        """Unscaled row sums ``w^r(k)``; may overflow to inf for large ``r``."""
        return np.ldexp(self.v, self.exponent) if np.isrealobj(self.v) else (
            np.ldexp(self.v.real, self.exponent) + 1j * np.ldexp(self.v.imag, self.exponent))

    def total_scaled(self):
        """Exactly rounded sum of the scaled row values (real part)."""
        return math.fsum(np.real(self.v).tolist())


def walk_init(a):
    return WalkState(r=0, v=np.ones(a.nrows), exponent=0)


def _rebase(v):
    norm = float(np.max(np.abs(v))) if v.size else 0.0
    if norm == 0.0:
        return v, 0
    _, e = math.frexp(norm)  # norm = f * 2**e with f in [0.5, 1)
    shift = e - 1
    if np.iscomplexobj(v):
        return np.ldexp(v.real, -shift) + 1j * np.ldexp(v.imag, -shift), shift
    return np.ldexp(v, -shift), shift


def walk_step(a, state):
    """Advance one power of ``AA*`` and rebase."""
    if state.dead:
        return WalkState(r=state.r + 1, v=state.v, exponent=state.exponent)
    raw = gram_apply(a, state.v)
    v, shift = _rebase(raw)
    return WalkState(r=state.r + 1, v=v, exponent=state.exponent + shift)


@dataclass
class WalkLedger:
    """Every level ``0..depth`` of a walk on one matrix.

    ``ledger.extend(d)`` grows the ledger in place; levels already computed
    are never recomputed.
    """

    matrix: object
    states: list = field(default_factory=list)

    def __post_init__(self):
        if not self.states:
            self.states.append(walk_init(self.matrix))

    @property
    def depth(self):
        return self.states[-1].r

    def extend(self, depth):
        while self.depth < depth:
            self.states.append(walk_step(self.matrix, self.states[-1]))
        return self

    def level(self, r):
        if not 0 <= r <= self.depth:
            raise IndexError(f"walk level {r} not recorded (depth {self.depth})")
        return self.states[r]

    @property
    def totals(self):
        """``(r, total_scaled, log_scale)`` for each recorded level."""
        return [(s.r, s.total_scaled(), s.log_scale) for s in self.states]


def build_ledger(a, depth):
    return WalkLedger(a).extend(depth)


def walk_row_values(ledger, r):
    """Return ``(v, log_scale)`` at level ``r``; ``w^r(k) = exp(log_scale) * v[k]``."""
    s = ledger.level(r)
    return s.v, s.log_scale


def walk_total(ledger, r):
    """Return ``(total_scaled, log_scale)`` with ``w^r = exp(log_scale) * total_scaled``."""
    s = ledger.level(r)
    return s.total_scaled(), s.log_scale


def reconstruct_total(ledger, r):
    s = ledger.level(r)
    return math.ldexp(s.total_scaled(), s.exponent)
