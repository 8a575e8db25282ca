"""Acceptance criteria.

Each test covers one criterion at its stated tolerance and records a
PASS/FAIL line that is printed in the pytest terminal summary.
"""

import io
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from conftest import FIXTURES, record_acceptance
from oracles import int_walks
from sigma_bounds import (BlockPartition, Matrix, TheoremInapplicableError, block_partin_bound,
                          block_sigma_bound, compress, degeneracy_check, entry_sum_gram,
                          generate, gram_apply, modulus_matrix, read_matrix_market,
                          reference_sigma, refined_bound, sandwich_estimate, schur_bound,
                          support_bound, walk_lower_bound, walk_upper_bound, write_matrix_market)
from sigma_bounds.cli import run
from sigma_bounds.generators import star
from sigma_bounds.walks import WalkLedger, build_ledger, reconstruct_total


@contextmanager
def criterion(number, title):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        record_acceptance(f"[FAIL] {number}. {title} ({time.perf_counter() - t0:.2f}s): {exc!s:.200}")
        raise
    record_acceptance(f"[PASS] {number}. {title} ({time.perf_counter() - t0:.2f}s)")


def rel_close(got, want, tol):
    return abs(got - want) <= tol * abs(want)


def sweep_matrices(count, seed, max_dim=40, kinds=("uniform-nonneg", "signed", "complex")):
    """Seeded mix of random matrices with densities drawn from [0.1, 1.0]."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        kind = kinds[i % len(kinds)]
        m, n = (int(x) for x in rng.integers(1, max_dim + 1, 2))
        density = float(rng.uniform(0.1, 1.0))
        a = generate(f"{kind}({m},{n},{density})", [seed, i])
        if i % 2:
            a = a.to_sparse()
        out.append(a)
    return out


@pytest.fixture(scope="module")
def sweep():
    return sweep_matrices(500, 20260101)


# 1 ---------------------------------------------------------------------------

def test_criterion_1_star_tightness():
    with criterion(1, "star K(1,n) tightness, n in {2,3,10,100}"):
        t0 = time.perf_counter()
        for n in (2, 3, 10, 100):
            a = star(n)
            assert rel_close(schur_bound(a).raw, n * n, 1e-10)
            assert rel_close(refined_bound(a).raw, n, 1e-10)
            assert rel_close(walk_lower_bound(a, 0, 1).raw, n, 1e-10)
            assert rel_close(reference_sigma(a).sigma ** 2, n, 1e-10)
        elapsed = time.perf_counter() - t0
        assert elapsed < 1.0, f"runtime {elapsed:.2f}s >= 1s"


# 2 ---------------------------------------------------------------------------

def test_criterion_2_soundness_sweep(sweep):
    with criterion(2, "walk bound soundness on 500 random matrices"):
        t0 = time.perf_counter()
        checked = 0
        for a in sweep:
            orc = reference_sigma(a)
            assert orc.converged, f"oracle did not converge on {a!r}"
            if a.nnz == 0:
                continue
            s2 = orc.sigma ** 2
            up = WalkLedger(modulus_matrix(a))
            applicable = not degeneracy_check(a).w1_zero
            lo = WalkLedger(a) if applicable else None
            for r in (0, 1, 2, 4, 8):
                for p in (1, 2, 3):
                    target = s2 ** p
                    slack = 1e-8 * max(1.0, target)
                    u = walk_upper_bound(a, r, p, ledger=up).raw
                    assert u >= target - slack, (a, r, p, u, target)
                    if applicable:
                        low = walk_lower_bound(a, r, p, ledger=lo).raw
                        assert low <= target + slack, (a, r, p, low, target)
                    checked += 1
        assert checked > 0
        elapsed = time.perf_counter() - t0
        assert elapsed < 60.0, f"runtime {elapsed:.1f}s >= 60s"


# 3 ---------------------------------------------------------------------------

def test_criterion_3_chain_ordering(sweep):
    with criterion(3, "refined <= support <= Schur, walk_upper(0,1) == refined"):
        for a in sweep:
            if a.nnz == 0:
                continue
            refined, support, schur = refined_bound(a).raw, support_bound(a).raw, schur_bound(a).raw
            assert refined <= support * (1 + 1e-12)
            assert support <= schur * (1 + 1e-12)
            assert rel_close(walk_upper_bound(a, 0, 1).raw, refined, 1e-12)


# 4 ---------------------------------------------------------------------------

def test_criterion_4_convergence():
    with criterion(4, "sandwich convergence on 100 positive matrices"):
        t0 = time.perf_counter()
        rng = np.random.default_rng(4)
        for i in range(100):
            m, n = (int(x) for x in rng.integers(1, 21, 2))
            a = generate(f"uniform-nonneg({m},{n},1.0)", [4, i])
            res = sandwich_estimate(a, p=1, rel_tol=1e-6, r_max=500)
            sigma = reference_sigma(a).sigma
            assert res.converged, (i, a)
            assert rel_close(res.estimate.value, sigma, 1e-5), (i, res.estimate.value, sigma)
        elapsed = time.perf_counter() - t0
        assert elapsed < 30.0, f"runtime {elapsed:.1f}s >= 30s"


# 5 ---------------------------------------------------------------------------

def degenerate_matrices(count, seed):
    """Row-pairs (b, -b) in shuffled order, so that A* 1 = 0."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        k, n = (int(x) for x in rng.integers(1, 6, 2))
        b = rng.integers(-3, 4, (k, n))
        rows = np.vstack([b, -b])
        rows = rows[rng.permutation(2 * k)]
        a = Matrix.from_dense(rows)
        out.append((rows.astype(int).tolist(), a.to_sparse() if i % 2 else a))
    return out


def test_criterion_5_degeneracy():
    with criterion(5, "sum(AA*) = 0 detected, walks vanish, lower bound inapplicable"):
        for rows, a in degenerate_matrices(50, 5):
            assert entry_sum_gram(a) == 0
            assert degeneracy_check(a).w1_zero
            exact = int_walks(rows, 5)
            led = build_ledger(a, 5)
            for r in range(1, 6):
                assert sum(exact[r]) == 0
                assert reconstruct_total(led, r) == 0
            assert np.linalg.norm(gram_apply(a, np.ones(a.nrows))) <= 1e-12
            with pytest.raises(TheoremInapplicableError):
                walk_lower_bound(a, 0, 1)


# 6 ---------------------------------------------------------------------------

def random_partition(rng, m, n):
    def split(size):
        perm = rng.permutation(size)
        k = int(rng.integers(1, size + 1))
        cuts = np.sort(rng.choice(np.arange(1, size), size=k - 1, replace=False)) if k > 1 else []
        return tuple(tuple(int(i) for i in part) for part in np.split(perm, cuts))
    return BlockPartition(split(m), split(n))


def test_criterion_6_block_bounds():
    with criterion(6, "block compression chain, trivial and finest partitions"):
        rng = np.random.default_rng(6)
        mats = sweep_matrices(200, 6, max_dim=24)
        for a in mats:
            sigma = reference_sigma(a).sigma
            part = random_partition(rng, *a.shape)
            comp = compress(a, part)
            sig_b = block_sigma_bound(a, part, comp).value
            chain = block_partin_bound(a, part, comp)
            mid, sup = math.sqrt(chain["mid"].raw), math.sqrt(chain["support"].raw)
            assert sigma <= sig_b * (1 + 1e-8)
            assert sig_b <= mid * (1 + 1e-8)
            assert mid <= sup * (1 + 1e-8)

            trivial = BlockPartition.trivial(*a.shape)
            assert abs(block_sigma_bound(a, trivial).value - sigma) <= 1e-10 * sigma

            if a.nnz == 0:
                continue
            finest = block_partin_bound(a, BlockPartition.finest(*a.shape))
            mod = modulus_matrix(a)
            assert rel_close(finest["mid"].raw, refined_bound(mod).raw, 1e-12)
            assert rel_close(finest["support"].raw, support_bound(mod).raw, 1e-12)


# 7 ---------------------------------------------------------------------------

def test_criterion_7_integer_walks():
    with criterion(7, "walk engine vs big-integer oracle, r <= 6"):
        rng = np.random.default_rng(7)
        for i in range(200):
            m, n = (int(x) for x in rng.integers(1, 6, 2))
            rows = rng.integers(-3, 4, (m, n)).tolist()
            a = Matrix.from_dense(rows)
            exact = int_walks(rows, 6)
            led = build_ledger(a.to_sparse() if i % 2 else a, 6)
            for r in range(7):
                got = led.level(r).reconstruct()
                for k, want in enumerate(exact[r]):
                    assert abs(got[k] - want) <= 1e-9 * abs(want), (rows, r, k)
                total = sum(exact[r])
                assert abs(reconstruct_total(led, r) - total) <= 1e-9 * abs(total)


# 8 ---------------------------------------------------------------------------

def test_criterion_8_worked_ladder():
    with criterion(8, "[[1,2],[3,4]] bound ladder"):
        a = Matrix.from_dense([[1.0, 2.0], [3.0, 4.0]])
        s2 = (30 + math.sqrt(884)) / 2
        ladder = {
            "schur": (schur_bound(a).raw, 42),
            "refined": (refined_bound(a).raw, 36),
            "walk_upper(1,1)": (walk_upper_bound(a, 1, 1).raw, 1076 / 36),
            "walk_lower(0,1)": (walk_lower_bound(a, 0, 1).raw, 26),
            "walk_lower(1,1)": (walk_lower_bound(a, 1, 1).raw, 1552 / 52),
            "oracle": (reference_sigma(a).sigma ** 2, s2),
        }
        for name, (got, want) in ladder.items():
            assert rel_close(got, want, 1e-10), (name, got, want)
        v = {k: g for k, (g, _) in ladder.items()}
        assert (v["walk_lower(0,1)"] <= v["walk_lower(1,1)"] <= v["oracle"]
                <= v["walk_upper(1,1)"] <= v["refined"] <= v["schur"])


# 9 ---------------------------------------------------------------------------

def _cli_json(*argv):
    out, err = io.StringIO(), io.StringIO()
    _, code = run(list(argv) + ["--format", "json", "--no-timings"], stdout=out, stderr=err)
    return code, out.getvalue()


def test_criterion_9_cli_determinism_and_round_trip(tmp_path):
    with criterion(9, "Matrix Market round-trip and byte-identical reports"):
        fixtures = sorted(FIXTURES.glob("*.mtx"))
        assert fixtures
        for path in fixtures:
            a = read_matrix_market(path)
            out = tmp_path / path.name
            write_matrix_market(a, out)
            assert read_matrix_market(out) == a, path.name

        configs = [
            ["bench", "--gen", "complex(8,6,0.5)", "--trials", "6", "--seed", "11", "--r", "2", "--p", "2"],
            ["bench", "--gen", "uniform-nonneg(5,9,0.4)", "--trials", "6", "--seed", "11", "--jobs", "3"],
            ["bounds", str(FIXTURES / "signed44.mtx"), "--r", "3", "--p", "2"],
            ["estimate", str(FIXTURES / "star4.mtx")],
            ["blocks", str(FIXTURES / "signed44.mtx"), "--row-parts", "1,3", "--col-parts", "2,2"],
        ]
        for argv in configs:
            first = _cli_json(*argv)
            second = _cli_json(*argv)
            assert first[0] == 0 and first == second, argv
            assert "timings_ms" not in first[1]
