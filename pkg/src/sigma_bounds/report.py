"""Bound reports and the serialisable document emitted by the CLI."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field

from .bounds import (LOWER, UPPER, BoundValue, SandwichResult, exact_zero,
                     lower_from_ledger, refined_bound, schur_bound, support_bound,
                     upper_from_ledger, require_applicable)
from .errors import TheoremInapplicableError
from .matrix import is_zero, modulus_matrix
from .oracle import OracleResult, reference_sigma
from .walks import WalkLedger

SCHEMA_VERSION = 1

INAPPLICABLE = "theorem-inapplicable"


@dataclass
class BoundReport:
    bounds: dict
    descriptor: dict
    oracle: OracleResult | None = None
    errors: dict = field(default_factory=dict)
    exact_zero: bool = False

    def check_consistency(self, slack=1e-8):
        """Every certified lower bound must not exceed any certified upper bound."""
        lowers = [b.value for b in self.bounds.values() if b.kind == LOWER and b.certified]
        uppers = [b.value for b in self.bounds.values() if b.kind == UPPER and b.certified]
        return all(lo <= up * (1 + slack) for lo in lowers for up in uppers)


def compute_bounds(a, r=0, p=1, oracle=True):
    """Schur, refined, support and both walk bounds at ``(r, p)``.

    An all-zero matrix yields the exact answer ``sigma = 0`` for every entry.
    When the walk lower bound is inapplicable it is omitted from ``bounds`` and
    recorded under ``errors`` instead.
    """
    desc = a.descriptor()
    if is_zero(a):
        bounds = {name: exact_zero(UPPER) for name in ("schur", "refined", "support")}
        bounds["walk_upper"] = exact_zero(UPPER, r, p)
        bounds["walk_lower"] = exact_zero(LOWER, r, p)
        orc = OracleResult(0.0, 0, 0.0, True, 0) if oracle else None
        return BoundReport(bounds, desc, orc, {}, True)

    bounds = {
        "schur": schur_bound(a),
        "refined": refined_bound(a),
        "support": support_bound(a),
        "walk_upper": upper_from_ledger(WalkLedger(modulus_matrix(a)), r, p),
    }
    errors = {}
    try:
        require_applicable(a)
        bounds["walk_lower"] = lower_from_ledger(WalkLedger(a), r, p)
    except TheoremInapplicableError as exc:
        errors["walk_lower"] = {"code": INAPPLICABLE, "message": str(exc),
                                "entry_sum": exc.entry_sum,
                                "gram_ones_residual": exc.gram_ones_residual}
    orc = reference_sigma(a) if oracle else None
    return BoundReport(bounds, desc, orc, errors, False)


class Stopwatch:
    """Per-stage wall time in milliseconds, from a monotonic clock."""

    def __init__(self):
        self.timings = {}

    @contextmanager
    def stage(self, name):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = (time.perf_counter() - t0) * 1e3


@dataclass
class ReportDocument:
    command: str
    matrix: dict | None = None
    params: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)
    oracle: OracleResult | None = None
    estimate: SandwichResult | None = None
    blocks: dict | None = None
    bench: list | None = None
    timings_ms: dict = field(default_factory=dict)

    def to_dict(self, timings=True):
        d = {
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "matrix": self.matrix,
            "params": self.params,
            "bounds": {k: v.to_dict() for k, v in self.bounds.items()},
            "errors": self.errors,
            "oracle": asdict(self.oracle) if self.oracle is not None else None,
            "estimate": self.estimate.to_dict() if self.estimate is not None else None,
            "blocks": self.blocks,
            "bench": self.bench,
        }
        if timings:
            d["timings_ms"] = self.timings_ms
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(
            command=d["command"],
            matrix=d["matrix"],
            params=d["params"],
            bounds={k: BoundValue.from_dict(v) for k, v in d["bounds"].items()},
            errors=d["errors"],
            oracle=OracleResult(**d["oracle"]) if d["oracle"] is not None else None,
            estimate=SandwichResult.from_dict(d["estimate"]) if d["estimate"] is not None else None,
            blocks=d["blocks"],
            bench=d["bench"],
            timings_ms=d.get("timings_ms", {}),
        )

    def dumps(self, timings=True):
        return json.dumps(self.to_dict(timings=timings), sort_keys=True, indent=2)

    @classmethod
    def loads(cls, text):
        return cls.from_dict(json.loads(text))


def _fmt(x):
    if x is None:
        return "-"
    if isinstance(x, float):
        return f"{x:.10g}"
    return str(x)


def render_human(doc):
    """Plain-text rendering of a report document."""
    out = []
    if doc.matrix:
        m = doc.matrix
        out.append(f"matrix: {m['shape'][0]}x{m['shape'][1]} {m['mode']} nnz={m['nnz']}"
                   + (f"  ({m['source']})" if m.get("source") else ""))
    if doc.params:
        out.append("params: " + " ".join(f"{k}={_fmt(v)}" for k, v in sorted(doc.params.items())))
    if doc.bounds:
        out.append("")
        out.append(f"{'bound':<14}{'kind':<10}{'sigma':>18}{'raw (sigma^2p)':>22}{'r':>5}{'p':>4}")
        for name, b in doc.bounds.items():
            out.append(f"{name:<14}{b.kind:<10}{_fmt(b.value):>18}{_fmt(b.raw):>22}{b.r:>5}{b.p:>4}")
    for name, err in doc.errors.items():
        out.append(f"{name}: {err['code']}: {err['message']}")
    if doc.oracle is not None:
        o = doc.oracle
        out.append("")
        out.append(f"oracle sigma = {_fmt(o.sigma)}  sigma^2 = {_fmt(o.sigma ** 2)}  "
                   f"iterations={o.iterations} residual={o.residual:.3g} converged={o.converged}")
    if doc.estimate is not None:
        e = doc.estimate
        out.append("")
        out.append(f"estimate sigma = {_fmt(e.estimate.value)}  converged={e.converged}  r_stop={e.r_stop}")
        out.append(f"{'r':>5}{'upper':>22}{'lower':>22}")
        for r, (u, lo) in enumerate(zip(e.upper_trace, e.lower_trace)):
            out.append(f"{r:>5}{_fmt(u):>22}{_fmt(lo):>22}")
    if doc.blocks is not None:
        b = doc.blocks
        out.append("")
        out.append(f"block partition {len(b['compression'])}x{len(b['compression'][0])}")
        for row in b["compression"]:
            out.append("  " + " ".join(f"{v:12.6g}" for v in row))
        out.append(f"sigma(B) = {_fmt(b['block_sigma']['value'])}")
        out.append(f"sqrt(mid) = {_fmt(b['mid']['value'])}  sqrt(support) = {_fmt(b['support']['value'])}")
    if doc.bench is not None:
        out.append("")
        if doc.bench:
            cols = list(doc.bench[0].keys())
            out.append("  ".join(f"{c:>12}" for c in cols))
            for row in doc.bench:
                out.append("  ".join(f"{_fmt(row[c]):>12}" for c in cols))
    if doc.timings_ms:
        out.append("")
        out.append("timings (ms): " + " ".join(f"{k}={v:.2f}" for k, v in doc.timings_ms.items()))
    return "\n".join(out) + "\n"
