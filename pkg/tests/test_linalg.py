import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from volrig.linalg import (
    BadPrimeError,
    RationalMatrix,
    bareiss,
    det_exact,
    rank_exact,
    rank_mod,
    rank_modp,
    solve,
    to_fraction,
)

small = st.integers(-6, 6)


@st.composite
def matrices(draw, max_dim=6):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    rows = draw(st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))
    return RationalMatrix.from_rows(rows)


@given(matrices())
def test_rank_matches_sympy(M):
    assert rank_exact(M) == sympy.Matrix(M.data).rank()


@given(matrices())
def test_rank_of_transpose(M):
    assert rank_exact(M) == rank_exact(M.T)


@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n),
                                                     min_size=n, max_size=n)))
def test_det_matches_sympy(rows):
    M = RationalMatrix.from_rows(rows)
    assert det_exact(M) == sympy.Matrix(rows).det()


def test_rational_entries():
    M = RationalMatrix.from_rows([[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 4), Fraction(1, 6)]])
    assert rank_exact(M) == 1
    assert det_exact(M) == 0
    assert M.integer_rows() == [[3, 2], [3, 2]]


def test_floats_rejected():
    with pytest.raises(TypeError):
        to_fraction(0.5)


def test_bareiss_no_swell_on_20x20():
    # Bareiss keeps every intermediate entry a minor, so its size is bounded
    # by Hadamard's bound rather than growing exponentially.
    rng = random.Random(7)
    rows = [[rng.randint(-1000, 1000) for _ in range(20)] for _ in range(20)]
    res = bareiss([r[:] for r in rows])
    assert res.rank == 20
    hadamard = 1
    for r in rows:
        hadamard *= sum(x * x for x in r)
    bound_bits = hadamard.bit_length() // 2 + 1
    biggest = max(abs(x).bit_length() for r in res.echelon for x in r)
    assert biggest <= bound_bits
    assert abs(res.echelon[19][19]) == abs(sympy.Matrix(rows).det())


def test_modp_matches_exact_on_random_8x8():
    rng = random.Random(11)
    for trial in range(100):
        r = rng.randint(1, 8)
        A = [[rng.randint(-5, 5) for _ in range(r)] for _ in range(8)]
        B = [[rng.randint(-5, 5) for _ in range(8)] for _ in range(r)]
        M = RationalMatrix.from_rows(A) @ RationalMatrix.from_rows(B)
        exact = rank_exact(M)
        assert exact <= r
        assert rank_modp(M, seed=trial) == exact


def test_modp_bad_prime_detected():
    M = RationalMatrix.from_rows([[Fraction(1, 7)]])
    with pytest.raises(BadPrimeError):
        rank_modp(M, prime=7)


def test_rank_mod_small_prime_can_undercount():
    # det = 3, so the rank drops mod 3.
    rows = [[2, 1], [1, 2]]
    assert rank_exact(RationalMatrix.from_rows(rows)) == 2
    assert rank_mod(rows, 3) == 1


@given(matrices(5), st.lists(small, min_size=5, max_size=5))
def test_solve_consistent(M, x):
    x = x[: M.ncols]
    b = [sum(a * y for a, y in zip(row, x)) for row in M.data]
    sol = solve(M, b)
    assert sol is not None
    assert [sum(a * y for a, y in zip(row, sol)) for row in M.data] == b


def test_solve_inconsistent():
    M = RationalMatrix.from_rows([[1, 1], [2, 2]])
    assert solve(M, [1, 3]) is None


def test_json_roundtrip():
    M = RationalMatrix.from_rows([[Fraction(-1, 3), 2]])
    assert RationalMatrix.from_json(M.to_json()) == M
