"""``sigma-bounds`` command line interface.

Exit codes: 0 success, 1 usage/config error, 2 file or parse error,
3 walk lower bound inapplicable (sum(AA*) = 0), 4 internal error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor

from .blocks import BlockPartition, block_partin_bound, block_sigma_bound, compress
from .bounds import sandwich_estimate
from .errors import (ConfigError, MatrixMarketError, PartitionError, SigmaBoundsError,
                     TheoremInapplicableError)
from .generators import generate, parse_spec
from .mmio import read_matrix_market
from .oracle import reference_sigma
from .report import INAPPLICABLE, ReportDocument, Stopwatch, compute_bounds, render_human

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_INAPPLICABLE = 3
EXIT_INTERNAL = 4

COMMANDS = ("bounds", "estimate", "oracle", "blocks", "bench")

logger = logging.getLogger("sigma_bounds")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="sigma-bounds",
                description="Certified bounds on the largest singular value of a matrix.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("file", nargs="?", help="Matrix Market input (not used by bench)")
    p.add_argument("--r", type=int, default=0, help="walk level r (default 0)")
    p.add_argument("--p", type=int, default=1, help="walk power p (default 1)")
    p.add_argument("--tol", type=float, default=1e-9, help="relative gap for estimate")
    p.add_argument("--r-max", type=int, default=1000, help="iteration cap for estimate")
    p.add_argument("--row-parts", help="contiguous row part sizes, e.g. 2,2")
    p.add_argument("--col-parts", help="contiguous column part sizes, e.g. 3,1")
    p.add_argument("--gen", help="generator spec for bench, e.g. 'signed(10,10,0.5)'")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1, help="worker threads for bench")
    p.add_argument("--no-oracle", action="store_true", help="skip the reference sigma")
    p.add_argument("--format", choices=("human", "json", "json-like"), default="human")
    p.add_argument("--no-timings", action="store_true",
                   help="omit timing fields from machine-readable output")
    return p


def validate(args):
    if args.r < 0:
        raise ConfigError("--r must be >= 0")
    if args.p < 1:
        raise ConfigError("--p must be >= 1")
    if not args.tol > 0:
        raise ConfigError("--tol must be > 0")
    if args.r_max < 1:
        raise ConfigError("--r-max must be >= 1")
    if args.trials < 1:
        raise ConfigError("--trials must be >= 1")
    if args.jobs < 1:
        raise ConfigError("--jobs must be >= 1")
    if args.command == "bench":
        if not args.gen:
            raise ConfigError("bench needs --gen")
        parse_spec(args.gen)
    elif not args.file:
        raise ConfigError(f"{args.command} needs an input file")
    if args.command == "blocks" and not (args.row_parts and args.col_parts):
        raise ConfigError("blocks needs --row-parts and --col-parts")


def _sizes(text, flag):
    try:
        sizes = [int(t) for t in text.split(",")]
    except ValueError:
        raise ConfigError(f"{flag} must be comma-separated integers, got {text!r}") from None
    return sizes


def _load(args, doc, watch):
    with watch.stage("parse"):
        a = read_matrix_market(args.file)
    doc.matrix = dict(a.descriptor(), source=str(args.file))
    return a


def cmd_bounds(args, doc, watch):
    a = _load(args, doc, watch)
    doc.params = {"r": args.r, "p": args.p}
    with watch.stage("bounds"):
        rep = compute_bounds(a, args.r, args.p, oracle=False)
    doc.bounds = rep.bounds
    doc.errors = rep.errors
    if not args.no_oracle:
        with watch.stage("oracle"):
            doc.oracle = reference_sigma(a)
    return EXIT_INAPPLICABLE if rep.errors else EXIT_OK


def cmd_estimate(args, doc, watch):
    a = _load(args, doc, watch)
    doc.params = {"p": args.p, "rel_tol": args.tol, "r_max": args.r_max}
    if not args.no_oracle:
        with watch.stage("oracle"):
            doc.oracle = reference_sigma(a)
    try:
        with watch.stage("estimate"):
            doc.estimate = sandwich_estimate(a, args.p, args.tol, args.r_max)
    except TheoremInapplicableError as exc:
        doc.errors = {"estimate": {"code": INAPPLICABLE, "message": str(exc),
                                   "entry_sum": exc.entry_sum,
                                   "gram_ones_residual": exc.gram_ones_residual}}
        return EXIT_INAPPLICABLE
    return EXIT_OK


def cmd_oracle(args, doc, watch):
    a = _load(args, doc, watch)
    with watch.stage("oracle"):
        doc.oracle = reference_sigma(a)
    return EXIT_OK


def cmd_blocks(args, doc, watch):
    a = _load(args, doc, watch)
    part = BlockPartition.contiguous(_sizes(args.row_parts, "--row-parts"),
                                     _sizes(args.col_parts, "--col-parts"))
    doc.params = {"row_parts": args.row_parts, "col_parts": args.col_parts}
    with watch.stage("compress"):
        comp = compress(a, part)
    with watch.stage("blocks"):
        sig = block_sigma_bound(a, part, comp)
        chain = block_partin_bound(a, part, comp)
    doc.blocks = {
        "compression": comp.b.to_dense().tolist(),
        "block_sigma": sig.to_dict(),
        "mid": chain["mid"].to_dict(),
        "support": chain["support"].to_dict(),
    }
    if not args.no_oracle:
        with watch.stage("oracle"):
            doc.oracle = reference_sigma(a)
    return EXIT_OK


def _ratio(bound, sigma):
    return None if bound is None or sigma == 0 else bound.value / sigma


def bench_trial(spec, seed, trial, r, p):
    """One bench row: every bound and its tightness ratio ``bound / sigma``."""
    a = generate(spec, [seed, trial])
    rep = compute_bounds(a, r, p, oracle=True)
    sigma = rep.oracle.sigma
    b = rep.bounds
    row = {"trial": trial, "m": a.nrows, "n": a.ncols, "nnz": a.nnz, "sigma": sigma,
           "oracle_converged": rep.oracle.converged}
    for name in ("schur", "refined", "support", "walk_upper", "walk_lower"):
        row[name] = _ratio(b.get(name), sigma)
    uppers = [row[k] for k in ("schur", "refined", "support", "walk_upper") if row[k] is not None]
    lower = row["walk_lower"]
    row["sound"] = all(u >= 1 - 1e-8 for u in uppers) and (lower is None or lower <= 1 + 1e-8)
    return row


def cmd_bench(args, doc, watch):
    doc.params = {"gen": args.gen, "trials": args.trials, "seed": args.seed,
                  "r": args.r, "p": args.p}
    spec = parse_spec(args.gen)
    with watch.stage("bench"):
        def run_one(t):
            return bench_trial(spec, args.seed, t, args.r, args.p)
        if args.jobs > 1:
            with ThreadPoolExecutor(args.jobs) as pool:
                rows = list(pool.map(run_one, range(args.trials)))
        else:
            rows = [run_one(t) for t in range(args.trials)]
    doc.bench = rows
    return EXIT_OK if all(r["sound"] for r in rows) else EXIT_INTERNAL


HANDLERS = {"bounds": cmd_bounds, "estimate": cmd_estimate, "oracle": cmd_oracle,
            "blocks": cmd_blocks, "bench": cmd_bench}


def run(argv=None, stdout=None, stderr=None):
    """Run the CLI; return ``(document or None, exit code)`` and write output."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        validate(args)
    except (UsageError, ConfigError) as exc:
        print(f"sigma-bounds: usage error: {exc}", file=stderr)
        return None, EXIT_USAGE

    doc = ReportDocument(command=args.command)
    watch = Stopwatch()
    try:
        code = HANDLERS[args.command](args, doc, watch)
    except (ConfigError, PartitionError) as exc:
        print(f"sigma-bounds: config error: {exc}", file=stderr)
        return None, EXIT_USAGE
    except (MatrixMarketError, OSError) as exc:
        print(f"sigma-bounds: parse error: {exc}", file=stderr)
        return None, EXIT_PARSE
    except SigmaBoundsError as exc:
        print(f"sigma-bounds: error: {exc}", file=stderr)
        return None, EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - the CLI must map everything to an exit code
        logger.exception("internal error")
        print(f"sigma-bounds: internal error: {exc}", file=stderr)
        return None, EXIT_INTERNAL

    doc.timings_ms = {} if args.no_timings else watch.timings
    if args.format == "human":
        stdout.write(render_human(doc))
    else:
        stdout.write(doc.dumps(timings=not args.no_timings) + "\n")
    for name, err in doc.errors.items():
        print(f"sigma-bounds: {name}: {err['code']}: {err['message']}", file=stderr)
    return doc, code


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    _, code = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
