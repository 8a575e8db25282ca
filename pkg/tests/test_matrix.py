import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import explicit_gram, naive_margins
from sigma_bounds import Matrix, ShapeError, entry_sum_gram, gram_apply, margin_sums, modulus_matrix
from sigma_bounds.generators import star
from sigma_bounds.matrix import frobenius_norm_sq

# zero or moderate magnitudes: squares of tiny entries underflow and make
# relative comparisons meaningless
finite = st.one_of(st.just(0.0), st.floats(1e-6, 10), st.floats(-10, -1e-6))


@st.composite
def matrices(draw, max_dim=6):
    m = draw(st.integers(1, max_dim))
    n = draw(st.integers(1, max_dim))
    re = draw(arrays(np.float64, (m, n), elements=finite))
    if draw(st.booleans()):
        re = re + 1j * draw(arrays(np.float64, (m, n), elements=finite))
    a = Matrix.from_dense(re)
    return a.to_sparse() if draw(st.booleans()) else a


# -- construction ------------------------------------------------------------

def test_dense_and_sparse_agree():
    d = np.array([[0, 1.5, 0], [2, 0, -3]])
    a = Matrix.from_dense(d)
    s = a.to_sparse()
    assert s.is_sparse and not a.is_sparse
    assert s == a
    assert s.nnz == a.nnz == 3
    assert list(s.indptr) == [0, 1, 3]
    assert list(s.indices) == [1, 0, 2]


def test_from_coo_sums_duplicates_and_drops_zeros():
    a = Matrix.from_coo([0, 0, 1, 1], [1, 1, 0, 0], [1.0, 2.0, 5.0, -5.0], (2, 2))
    assert a.nnz == 1
    np.testing.assert_array_equal(a.to_dense(), [[0, 3], [0, 0]])


@pytest.mark.parametrize("indptr,indices,data", [
    ([0, 2, 2], [1, 0], [1.0, 2.0]),      # unsorted
    ([0, 2, 2], [1, 1], [1.0, 2.0]),      # duplicate
    ([0, 1, 1], [0], [0.0]),              # explicit zero
    ([0, 1, 1], [5], [1.0]),              # out of range
    ([0, 2, 1], [0, 1], [1.0, 1.0]),      # decreasing row pointer
])
def test_from_csr_rejects_noncanonical(indptr, indices, data):
    with pytest.raises(ValueError):
        Matrix.from_csr(indptr, indices, data, (2, 2))


def test_rejects_nonfinite():
    with pytest.raises(ValueError):
        Matrix.from_dense([[1.0, np.nan]])
    with pytest.raises(ValueError):
        Matrix.from_coo([0], [0], [np.inf], (1, 1))


def test_complex_with_zero_imaginary_is_real():
    assert Matrix.from_dense(np.array([[1 + 0j, 2]])).mode == "real"
    assert Matrix.from_dense(np.array([[1 + 1j, 2]])).mode == "complex"


def test_immutable():
    a = Matrix.from_dense([[1.0, 2.0]])
    with pytest.raises(ValueError):
        a._dense[0, 0] = 5


# -- modulus_matrix ------------------------------------------------------------

def test_modulus_sign_removal():
    np.testing.assert_array_equal(modulus_matrix(Matrix.from_dense([[1, -2], [3, 4]])).to_dense(),
                                  [[1, 2], [3, 4]])


def test_modulus_complex_345():
    m = modulus_matrix(Matrix.from_dense(np.array([[3 + 4j]])))
    assert m.mode == "real"
    assert m.to_dense()[0, 0] == 5.0


def test_modulus_identity_fixed_point():
    assert modulus_matrix(Matrix.identity(4)) == Matrix.identity(4)


def test_modulus_keeps_sparsity_pattern():
    a = Matrix.from_dense([[0, -1j, 0], [2, 0, -3]]).to_sparse()
    m = modulus_matrix(a)
    assert m.is_sparse
    assert list(m.indices) == list(a.indices) and list(m.indptr) == list(a.indptr)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_modulus_idempotent(a):
    once = modulus_matrix(a)
    assert modulus_matrix(once) == once


# -- margin_sums ---------------------------------------------------------------

def test_margin_sums_2x2(a22):
    ms = margin_sums(a22)
    np.testing.assert_array_equal(ms.row_sums, [3, 7])
    np.testing.assert_array_equal(ms.col_sums, [4, 6])
    r, c = naive_margins(a22.to_dense())
    np.testing.assert_array_equal(ms.row_sums, r)
    np.testing.assert_array_equal(ms.col_sums, c)


def test_margin_sums_star():
    ms = margin_sums(star(3))
    np.testing.assert_array_equal(ms.row_sums, [3, 1, 1, 1])
    np.testing.assert_array_equal(ms.col_sums, [3, 1, 1, 1])


def test_margin_sums_zero():
    ms = margin_sums(Matrix.zeros(3, 2, sparse=True))
    assert not ms.row_sums.any() and not ms.col_sums.any()


@settings(max_examples=60, deadline=None)
@given(matrices(), st.randoms(use_true_random=False))
def test_margin_sums_invariants(a, rnd):
    ms = margin_sums(a)
    assert np.all(ms.row_sums >= 0) and np.all(ms.col_sums >= 0)
    total = ms.row_sums.sum()
    assert abs(total - ms.col_sums.sum()) <= 1e-12 * max(total, 1e-300)
    rp = list(range(a.nrows))
    cp = list(range(a.ncols))
    rnd.shuffle(rp)
    rnd.shuffle(cp)
    mp = margin_sums(a.permuted(rp, cp))
    np.testing.assert_allclose(mp.row_sums, ms.row_sums[rp], rtol=1e-14)
    np.testing.assert_allclose(mp.col_sums, ms.col_sums[cp], rtol=1e-14)


# -- gram_apply / entry_sum_gram -----------------------------------------------

def test_gram_apply_identity():
    np.testing.assert_array_equal(gram_apply(Matrix.identity(3), np.ones(3)), [1, 1, 1])


def test_gram_apply_2x2(a22):
    g = explicit_gram(a22.to_dense())
    np.testing.assert_array_equal(g, [[5, 11], [11, 25]])
    np.testing.assert_array_equal(gram_apply(a22, np.ones(2)), [16, 36])
    np.testing.assert_array_equal(gram_apply(a22.to_sparse(), np.ones(2)), [16, 36])


def test_gram_apply_cancelling_rows():
    np.testing.assert_array_equal(gram_apply(Matrix.from_dense([[1], [-1]]), np.ones(2)), [0, 0])


def test_gram_apply_real_fast_path(a22):
    assert np.isrealobj(gram_apply(a22, np.ones(2)))
    assert np.isrealobj(gram_apply(a22.to_sparse(), np.ones(2)))


def test_gram_apply_shape_error(a22):
    with pytest.raises(ShapeError):
        gram_apply(a22, np.ones(3))


@settings(max_examples=100, deadline=None)
@given(matrices(), st.integers(0, 2**32 - 1))
def test_gram_apply_matches_explicit(a, seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(a.nrows) + 1j * rng.standard_normal(a.nrows)
    got = gram_apply(a, x)
    want = explicit_gram(a.to_dense()) @ x
    # relative to the result, floored at the componentwise rounding scale |A||A*||x|
    d = np.abs(a.to_dense())
    scale = max(np.linalg.norm(want), np.linalg.norm(d @ (d.T @ np.abs(x))))
    assert np.linalg.norm(got - want) <= 1e-12 * scale


def test_entry_sum_gram_examples(a22):
    assert entry_sum_gram(Matrix.from_dense([[1], [-1]])) == 0
    assert entry_sum_gram(a22) == 52
    assert entry_sum_gram(Matrix.identity(5)) == 5


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_entry_sum_gram_matches_gram_ones(a):
    s = entry_sum_gram(a)
    assert s >= 0
    via_apply = gram_apply(a, np.ones(a.nrows)).sum()
    # relative to s, floored at the Gram scale m*||A||_F^2 when s cancels to ~0
    scale = max(s, a.nrows * frobenius_norm_sq(a))
    assert abs(via_apply.imag) <= 1e-12 * scale
    assert abs(s - via_apply.real) <= 1e-12 * scale
