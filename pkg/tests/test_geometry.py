from fractions import Fraction
from itertools import combinations

import pytest
import sympy
from hypothesis import assume, given, strategies as st

from volrig.geometry import (
    DegenerateError,
    Embedding,
    altitude_vector,
    barycenter_squared_distance,
    cm_gradient,
    cm_squared_volume,
    embedded_table,
    gram_squared_volume,
    random_rational_embedding,
    regular_simplex_embedding,
    volume_quadratic,
)

coord = st.integers(-9, 9)


@st.composite
def simplices(draw, kmax=4):
    k = draw(st.integers(1, kmax))
    d = draw(st.integers(k, k + 1))
    pts = draw(st.lists(st.lists(coord, min_size=d, max_size=d), min_size=k + 1, max_size=k + 1))
    return Embedding.from_points(pts), k


def _sym_cm(table):
    m = len(table)
    k = m - 1
    M = sympy.zeros(m + 1, m + 1)
    for i in range(m):
        for j in range(m):
            M[i, j] = table[i][j]
        M[i, m] = M[m, i] = 1
    return sympy.Rational((-1) ** (k + 1), sympy.factorial(k) ** 2 * 2**k) * M.det()


@given(simplices())
def test_cm_equals_gram(sk):
    p, k = sk
    face = tuple(range(k + 1))
    assert cm_squared_volume(embedded_table(p, face)) == gram_squared_volume([p[v] for v in face])


def test_known_volumes():
    assert cm_squared_volume([[0, 1], [1, 0]]) == 1
    # Unit equilateral triangle: area sqrt(3)/4.
    assert cm_squared_volume(regular_simplex_embedding(2).table) == Fraction(3, 16)
    # Regular unit tetrahedron: volume 1/(6 sqrt 2).
    assert cm_squared_volume(regular_simplex_embedding(3).table) == Fraction(1, 72)
    # Right triangle with legs 3, 4.
    assert cm_squared_volume([[0, 9, 16], [9, 0, 25], [16, 25, 0]]) == 36


def test_table_validation():
    with pytest.raises(ValueError):
        cm_squared_volume([[0, 1], [2, 0]])
    with pytest.raises(ValueError):
        cm_squared_volume([[1, 1], [1, 0]])


@pytest.mark.parametrize("k", [2, 3, 4])
def test_volume_quadratic_matches_sympy(k):
    t = sympy.Symbol("t")
    rng_vals = [[0] * (k + 1) for _ in range(k + 1)]
    val = 3
    for i, j in combinations(range(k + 1), 2):
        val = (val * 7 + 5) % 11 + 4
        rng_vals[i][j] = rng_vals[j][i] = val
    sym = [[t if {i, j} == {0, 1} else rng_vals[i][j] for j in range(k + 1)] for i in range(k + 1)]
    poly = sympy.Poly(sympy.expand(_sym_cm(sym)), t)
    coeffs = dict(zip([m[0] for m in poly.monoms()], poly.coeffs()))
    q = volume_quadratic([[Fraction(x) for x in r] for r in rng_vals])
    assert q.A == Fraction(str(coeffs.get(2, 0)))
    assert q.B == Fraction(str(coeffs.get(1, 0)))
    assert q.C == Fraction(str(coeffs.get(0, 0)))
    assert poly.degree() == 2


def test_volume_quadratic_degenerate_base():
    table = [[0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 0], [1, 1, 0, 0]]
    with pytest.raises(DegenerateError):
        volume_quadratic(table)


@given(simplices(kmax=3))
def test_cm_gradient_matches_sympy(sk):
    p, k = sk
    table = embedded_table(p, tuple(range(k + 1)))
    syms = {(i, j): sympy.Symbol(f"x{i}{j}") for i, j in combinations(range(k + 1), 2)}
    sym = [[0 if i == j else syms[(min(i, j), max(i, j))] for j in range(k + 1)] for i in range(k + 1)]
    f = _sym_cm(sym)
    subs = {syms[e]: sympy.Rational(str(table[e[0]][e[1]])) for e in syms}
    grad = cm_gradient(table)
    for e, s in syms.items():
        assert grad[e] == Fraction(str(sympy.diff(f, s).subs(subs)))


@given(simplices())
def test_altitude_identity(sk):
    # |h|^2 vol^2(base) = k^2 vol^2(simplex), from vol_k = vol_{k-1} |h| / k.
    p, k = sk
    sigma = tuple(range(k + 1))
    full = gram_squared_volume([p[v] for v in sigma])
    for v in sigma:
        base = [p[u] for u in sigma if u != v]
        wb = gram_squared_volume(base)
        assume(wb != 0)
        h = altitude_vector(p, sigma, v)
        assert sum(x * x for x in h) * wb == k * k * full


@given(simplices())
def test_altitude_orthogonal_to_base(sk):
    p, k = sk
    sigma = tuple(range(k + 1))
    v = sigma[0]
    base = sigma[1:]
    assume(gram_squared_volume([p[u] for u in base]) != 0)
    h = altitude_vector(p, sigma, v)
    for u in base[1:]:
        e = [a - b for a, b in zip(p[u], p[base[0]])]
        assert sum(x * y for x, y in zip(h, e)) == 0


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_centroid_distance(d):
    T = regular_simplex_embedding(d, with_centroid=True).table
    for j in range(1, d + 2):
        assert T[0][j] == Fraction(d, 2 * (d + 1))
    # The MDS reconstruction realizes the table in R^d.
    P = regular_simplex_embedding(d, with_centroid=True).float_points()
    for i in range(d + 2):
        for j in range(d + 2):
            assert abs(((P[i] - P[j]) ** 2).sum() - float(T[i][j])) < 1e-9


def test_barycenter_weights_validated():
    with pytest.raises(ValueError):
        barycenter_squared_distance([[0, 1], [1, 0]], [1, 1], 0)


def test_random_embedding_deterministic():
    a = random_rational_embedding(5, 3, "s", bits=10)
    b = random_rational_embedding(5, 3, "s", bits=10)
    c = random_rational_embedding(5, 3, "t", bits=10)
    assert a == b and a != c
    assert Embedding.from_json(a.to_json()) == a
