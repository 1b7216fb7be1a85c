"""Exact builders for the rigidity matrix R, the Cayley-Menger Jacobian C,
the volume rigidity matrix B = C R, and the altitude factorization L D P."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

import numpy as np

from .complex import Face, SimplicialComplex
from .geometry import (
    DegenerateError,
    Embedding,
    altitude_vector,
    cm_gradient,
    embedded_table,
    face_squared_volume,
    face_table,
    squared_edge_lengths,
)
from .linalg import RationalMatrix, block_diag_scalars, matmul


@dataclass(frozen=True)
class IndexedMatrix:
    """A RationalMatrix with labelled rows and columns."""

    matrix: RationalMatrix
    row_labels: tuple
    col_labels: tuple

    def __post_init__(self):
        if len(self.row_labels) != self.matrix.nrows or len(self.col_labels) != self.matrix.ncols:
            raise ValueError("label counts do not match the matrix shape")

    @property
    def shape(self):
        return self.matrix.shape

    def rank(self) -> int:
        return self.matrix.rank()

    def rows_for(self, labels: Sequence) -> RationalMatrix:
        index = {lab: i for i, lab in enumerate(self.row_labels)}
        return self.matrix.take_rows([index[lab] for lab in labels])

    def to_json(self) -> dict:
        return {
            "rows": [list(x) if isinstance(x, tuple) else x for x in self.row_labels],
            "cols": [list(x) if isinstance(x, tuple) else x for x in self.col_labels],
            "entries": self.matrix.to_json(),
        }


def vertex_columns(vertices: Sequence[int], d: int) -> tuple[tuple[int, int], ...]:
    """Column labels: vertex-major, coordinate-minor."""
    return tuple((v, c) for v in vertices for c in range(d))


def build_R(vertices: Sequence[int], edges: Sequence[Face], p: Embedding) -> IndexedMatrix:
    """Jacobian of the squared edge-length map of a graph."""
    d = p.d
    vertices = tuple(vertices)
    if not p.covers(vertices):
        raise ValueError("embedding does not cover the vertex set")
    col = {v: i for i, v in enumerate(vertices)}
    zero = Fraction(0)
    rows = []
    for u, v in edges:
        row = [zero] * (d * len(vertices))
        for c in range(d):
            diff = p[u][c] - p[v][c]
            row[d * col[u] + c] = 2 * diff
            row[d * col[v] + c] = -2 * diff
        rows.append(tuple(row))
    M = RationalMatrix(len(rows), d * len(vertices), tuple(rows))
    return IndexedMatrix(M, tuple(edges), vertex_columns(vertices, d))


def build_R_complex(X: SimplicialComplex, p: Embedding) -> IndexedMatrix:
    return build_R(X.vertices, X.edges, p)


def _require_pure(X: SimplicialComplex) -> int:
    k = X.dim
    if k < 1:
        raise ValueError("need a complex of dimension >= 1")
    if not X.is_pure():
        raise ValueError("complex is not pure")
    return k


def build_C(X: SimplicialComplex, lengths: Mapping[Face, Fraction]) -> IndexedMatrix:
    """Jacobian of squared k-volumes with respect to squared edge lengths."""
    _require_pure(X)
    edges = X.edges
    missing = [e for e in edges if e not in lengths]
    if missing:
        raise ValueError(f"no squared length for edges {missing[:3]}")
    col = {e: i for i, e in enumerate(edges)}
    zero = Fraction(0)
    rows = []
    for sigma in X.top_faces:
        row = [zero] * len(edges)
        grad = cm_gradient(face_table(sigma, lengths))
        for (i, j), g in grad.items():
            row[col[(sigma[i], sigma[j])]] = g
        rows.append(tuple(row))
    M = RationalMatrix(len(rows), len(edges), tuple(rows))
    return IndexedMatrix(M, X.top_faces, edges)


def build_B(X: SimplicialComplex, p: Embedding) -> IndexedMatrix:
    """Volume rigidity matrix, assembled as C(X, f(p)) times R(G, p)."""
    C = build_C(X, squared_edge_lengths(X, p))
    R = build_R_complex(X, p)
    return IndexedMatrix(matmul(C.matrix, R.matrix), C.row_labels, R.col_labels)


def build_B_local(X: SimplicialComplex, p: Embedding) -> IndexedMatrix:
    """B assembled simplex by simplex from the local CM gradient.

    Row sigma, block v is the sum over u in sigma of dvol^2/dd_uv * 2(p(v)-p(u)).
    Shares no code path with the global product in ``build_B``.
    """
    _require_pure(X)
    d = p.d
    verts = X.vertices
    col = {v: i for i, v in enumerate(verts)}
    zero = Fraction(0)
    rows = []
    for sigma in X.top_faces:
        row = [zero] * (d * len(verts))
        grad = cm_gradient(embedded_table(p, sigma))
        for (i, j), g in grad.items():
            u, v = sigma[i], sigma[j]
            for c in range(d):
                diff = 2 * g * (p[u][c] - p[v][c])
                row[d * col[u] + c] += diff
                row[d * col[v] + c] -= diff
        rows.append(tuple(row))
    M = RationalMatrix(len(rows), d * len(verts), tuple(rows))
    return IndexedMatrix(M, X.top_faces, vertex_columns(verts, d))


def lee_scale(k: int) -> Fraction:
    """Scalar c with B = c * L D P.

    Comes from vol_k = vol_{k-1} * |h| / k. The value -2/(k!)^2 agrees
    only for k <= 2.
    """
    return Fraction(-2, k * k)


def build_L_D_P(X: SimplicialComplex, p: Embedding) -> tuple[IndexedMatrix, IndexedMatrix, IndexedMatrix]:
    """Altitude matrix L, diagonal of squared (k-1)-volumes D, and the
    identity-block incidence pattern P."""
    k = _require_pure(X)
    d = p.d
    ridges = X.faces_of_dim(k - 1)
    ridge_cols = tuple((tau, c) for tau in ridges for c in range(d))
    rcol = {tau: i for i, tau in enumerate(ridges)}
    zero = Fraction(0)

    rows = []
    for sigma in X.top_faces:
        row = [zero] * (d * len(ridges))
        for v in sigma:
            tau = tuple(u for u in sigma if u != v)
            h = altitude_vector(p, sigma, v)
            for c in range(d):
                row[d * rcol[tau] + c] = h[c]
        rows.append(tuple(row))
    L = IndexedMatrix(RationalMatrix(len(rows), d * len(ridges), tuple(rows)), X.top_faces, ridge_cols)

    lengths = squared_edge_lengths(X, p)
    vols = []
    for tau in ridges:
        vol = face_squared_volume(tau, lengths)
        if vol == 0:
            raise DegenerateError(f"face {tau} is degenerate")
        vols.append(vol)
    D = IndexedMatrix(block_diag_scalars(vols, d), ridge_cols, ridge_cols)

    verts = X.vertices
    vcol = {v: i for i, v in enumerate(verts)}
    prow = []
    for tau in ridges:
        for c in range(d):
            row = [zero] * (d * len(verts))
            for v in tau:
                row[d * vcol[v] + c] = Fraction(1)
            prow.append(tuple(row))
    P = IndexedMatrix(
        RationalMatrix(len(prow), d * len(verts), tuple(prow)), ridge_cols, vertex_columns(verts, d)
    )
    return L, D, P


def build_B_altitude(X: SimplicialComplex, p: Embedding) -> IndexedMatrix:
    """B from altitudes: block (sigma, v) is 2 vol^2(sigma - v) h_{sigma,v} / k^2."""
    k = _require_pure(X)
    d = p.d
    verts = X.vertices
    col = {v: i for i, v in enumerate(verts)}
    lengths = squared_edge_lengths(X, p)
    zero = Fraction(0)
    rows = []
    for sigma in X.top_faces:
        row = [zero] * (d * len(verts))
        for v in sigma:
            tau = tuple(u for u in sigma if u != v)
            w = 2 * face_squared_volume(tau, lengths) / (k * k)
            h = altitude_vector(p, sigma, v)
            for c in range(d):
                row[d * col[v] + c] = w * h[c]
        rows.append(tuple(row))
    M = RationalMatrix(len(rows), d * len(verts), tuple(rows))
    return IndexedMatrix(M, X.top_faces, vertex_columns(verts, d))


def altitude_sum(p: Embedding, sigma: Face, lengths: Mapping[Face, Fraction]) -> list[Fraction]:
    """Sum over v in sigma of vol^2(sigma - v) * h_{sigma, v}; zero for any simplex."""
    total = [Fraction(0)] * p.d
    for v in sigma:
        tau = tuple(u for u in sigma if u != v)
        w = face_squared_volume(tau, lengths)
        h = altitude_vector(p, sigma, v)
        total = [t + w * x for t, x in zip(total, h)]
    return total


# -- floating-point Jacobian check ----------------------------------------

def _float_sq_volume(pts: np.ndarray) -> float:
    E = pts[1:] - pts[0]
    k = len(E)
    return float(np.linalg.det(E @ E.T)) / factorial(k) ** 2


def fd_jacobian_check(X: SimplicialComplex, p: Embedding, step: float = 1e-6) -> float:
    """Worst deviation between B and central finite differences of the
    squared volumes, relative to the largest entry of each row."""
    _require_pure(X)
    B = build_B(X, p).matrix.to_float()
    P = p.as_float()
    scale = max(1.0, float(np.abs(P).max()))
    h = step * scale
    verts = X.vertices
    d = p.d
    worst = 0.0
    for r, sigma in enumerate(X.top_faces):
        idx = list(sigma)
        row_scale = float(np.abs(B[r]).max()) or 1.0
        for v in sigma:
            j = idx.index(v)
            for c in range(d):
                local = P[idx].copy()
                local[j, c] += h
                up = _float_sq_volume(local)
                local[j, c] -= 2 * h
                down = _float_sq_volume(local)
                fd = (up - down) / (2 * h)
                exact = B[r, d * verts.index(v) + c]
                worst = max(worst, abs(fd - exact) / row_scale)
    return worst
