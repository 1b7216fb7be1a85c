from fractions import Fraction
from math import factorial

import pytest
import sympy

from volrig.complex import build_example_41, complete_complex, from_facets
from volrig.geometry import Embedding, random_rational_embedding, squared_edge_lengths
from volrig.matrices import (
    build_B,
    build_B_altitude,
    build_B_local,
    build_C,
    build_L_D_P,
    build_R,
    build_R_complex,
    fd_jacobian_check,
    lee_scale,
)


def _symbolic_B(X, p):
    """Differentiate Gram-determinant squared volumes symbolically."""
    d, k = p.d, X.dim
    xs = {(v, c): sympy.Symbol(f"p{v}_{c}") for v in X.vertices for c in range(d)}
    subs = {xs[(v, c)]: sympy.Rational(str(p[v][c])) for v in X.vertices for c in range(d)}
    rows = []
    for sigma in X.top_faces:
        base = sigma[0]
        E = sympy.Matrix([[xs[(u, c)] - xs[(base, c)] for c in range(d)] for u in sigma[1:]])
        vol2 = (E * E.T).det() / factorial(k) ** 2
        rows.append([Fraction(str(sympy.diff(vol2, xs[(v, c)]).subs(subs)))
                     for v in X.vertices for c in range(d)])
    return rows


@pytest.mark.parametrize("n,k,d", [(4, 2, 3), (4, 1, 2), (4, 3, 3)])
def test_B_matches_symbolic_derivative(n, k, d):
    X = complete_complex(n, k)
    p = random_rational_embedding(n, d, "sym", bits=4)
    B = build_B(X, p)
    assert [list(r) for r in B.matrix.data] == _symbolic_B(X, p)


def test_R_row_layout():
    p = Embedding.from_points([[0, 0], [3, 1], [1, 5]])
    R = build_R((0, 1, 2), [(0, 1)], p)
    assert list(R.matrix.data[0]) == [-6, -2, 6, 2, 0, 0]
    assert R.col_labels == ((0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1))


def test_graph_B_is_R():
    X = complete_complex(5, 1)
    p = random_rational_embedding(5, 2, 1)
    assert build_B(X, p).matrix == build_R_complex(X, p).matrix


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_three_assemblies_agree(seed):
    X, _ = build_example_41()
    p = random_rational_embedding(9, 3, seed)
    B = build_B(X, p).matrix
    assert B == build_B_local(X, p).matrix == build_B_altitude(X, p).matrix


def test_lee_constant():
    assert lee_scale(1) == -2 and lee_scale(2) == Fraction(-1, 2) and lee_scale(3) == Fraction(-2, 9)
    X = complete_complex(5, 3)
    p = random_rational_embedding(5, 4, 3)
    L, D, P = build_L_D_P(X, p)
    LDP = L.matrix @ D.matrix @ P.matrix
    assert LDP.scale(lee_scale(3)) == build_B(X, p).matrix
    assert LDP.scale(Fraction(-2, 36)) != build_B(X, p).matrix


def test_C_needs_lengths_and_purity():
    X = complete_complex(4, 2)
    with pytest.raises(ValueError):
        build_C(X, {})
    Y = from_facets(4, [(0, 1, 2), (2, 3)])
    with pytest.raises(ValueError):
        build_C(Y, {e: Fraction(1) for e in Y.edges})


def test_C_row_sum_identity():
    # Squared volume is homogeneous of degree k in squared lengths, so
    # sum_e d_e * dV/dd_e = k V.
    from volrig.geometry import face_squared_volume

    X = complete_complex(5, 3)
    p = random_rational_embedding(5, 3, 9)
    lengths = squared_edge_lengths(X, p)
    C = build_C(X, lengths)
    for sigma, row in zip(C.row_labels, C.matrix.data):
        euler = sum(g * lengths[e] for g, e in zip(row, C.col_labels))
        assert euler == 3 * face_squared_volume(sigma, lengths)


@pytest.mark.parametrize("X,d", [(complete_complex(4, 2), 3), (complete_complex(5, 3), 4),
                                 (build_example_41()[0], 3)])
def test_finite_differences(X, d):
    p = random_rational_embedding(X.n_vertices, d, "fd", bits=6)
    assert fd_jacobian_check(X, p) < 1e-5


def test_labels_json():
    X = complete_complex(4, 2)
    B = build_B(X, random_rational_embedding(4, 3, 0))
    js = B.to_json()
    assert js["rows"][0] == [0, 1, 2] and js["cols"][0] == [0, 0]
    assert len(js["entries"]) == 4


def _affine_motions(p, verts):
    """Translations and trace-free linear velocity fields, flattened."""
    d = p.d
    fields = []
    for c in range(d):
        fields.append([Fraction(int(j == c)) for v in verts for j in range(d)])
    mats = [(i, j) for i in range(d) for j in range(d) if i != j]
    mats += [(i, i) for i in range(d - 1)]
    for i, j in mats:
        vec = []
        for v in verts:
            vel = [Fraction(0)] * d
            vel[i] += p[v][j]
            if i == j:
                vel[d - 1] -= p[v][d - 1]
            vec.extend(vel)
        fields.append(vec)
    return fields


@pytest.mark.parametrize("n,d", [(4, 2), (5, 3), (6, 3)])
def test_volume_preserving_motions_in_kernel(n, d):
    from volrig.linalg import RationalMatrix, rank_exact

    X = complete_complex(n, d)
    p = random_rational_embedding(n, d, "motion")
    B = build_B(X, p).matrix
    F = _affine_motions(p, X.vertices)
    assert len(F) == d * d + d - 1
    assert rank_exact(RationalMatrix.from_rows(F)) == len(F)
    for f in F:
        assert all(sum(a * b for a, b in zip(row, f)) == 0 for row in B.data)
