from math import comb

import pytest
import sympy
from hypothesis import given, strategies as st

from volrig.inclusion import inclusion_matrix, inclusion_rank, scaled_C_reduction_check, uniform_C_check


@st.composite
def params(draw):
    n = draw(st.integers(2, 7))
    s = draw(st.integers(1, n))
    t = draw(st.integers(1, s))
    return n, s, t


@given(params())
def test_line_sums(nst):
    n, s, t = nst
    A = inclusion_matrix(n, s, t).matrix
    assert all(sum(r) == comb(s, t) for r in A.data)
    assert all(sum(A.data[i][j] for i in range(A.nrows)) == comb(n - t, s - t) for j in range(A.ncols))


@given(params())
def test_rank_matches_sympy(nst):
    n, s, t = nst
    A = inclusion_matrix(n, s, t).matrix
    assert inclusion_rank(n, s, t) == sympy.Matrix(A.data).rank()


@pytest.mark.parametrize("n", range(4, 13))
def test_edge_inclusion_full_rank(n):
    # Pairs against s-subsets: full rank whenever 2 <= s <= n - 2.
    for s in range(2, n - 1):
        assert inclusion_rank(n, s, 2) == min(comb(n, s), comb(n, 2))


def test_bad_parameters():
    with pytest.raises(ValueError):
        inclusion_matrix(4, 2, 3)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_scaled_reduction(d):
    v = scaled_C_reduction_check(d)
    assert v.passed, v.computed


def test_scaled_reduction_values():
    v = scaled_C_reduction_check(3)
    assert (v.computed["alpha"], v.computed["beta"], v.computed["gamma"]) == ("1/8", "1/8", "-1/32")


@pytest.mark.parametrize("d,k", [(3, 1), (4, 2), (5, 3), (5, 2)])
def test_uniform_lengths(d, k):
    v = uniform_C_check(d, k)
    assert v.passed
    assert v.computed["rank"] == min(comb(d + 1, k + 1), comb(d + 1, 2))
