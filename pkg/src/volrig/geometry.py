"""Embeddings, Cayley-Menger volumes, altitudes and the special length
tables used for regular simplices."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Mapping, Sequence

import numpy as np

from .complex import Face, SimplicialComplex
from .linalg import RationalMatrix, format_fraction, frac_det, solve, to_fraction

Table = list[list[Fraction]]
SquaredLengths = dict[Face, Fraction]


class DegenerateError(ValueError):
    """Points expected to be affinely independent are not."""


@dataclass(frozen=True)
class Embedding:
    """Vertex-indexed points with rational coordinates in R^d."""

    d: int
    points: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        for pt in self.points:
            if len(pt) != self.d:
                raise ValueError(f"point {pt} does not have {self.d} coordinates")

    @classmethod
    def from_points(cls, points: Sequence[Sequence], d: int | None = None) -> "Embedding":
        pts = tuple(tuple(to_fraction(x) for x in pt) for pt in points)
        if d is None:
            d = len(pts[0]) if pts else 0
        return cls(d, pts)

    @property
    def n(self) -> int:
        return len(self.points)

    def __getitem__(self, v: int) -> tuple[Fraction, ...]:
        return self.points[v]

    def covers(self, vertices) -> bool:
        return all(0 <= v < len(self.points) for v in vertices)

    def to_json(self) -> dict:
        return {"d": self.d, "points": [[format_fraction(x) for x in pt] for pt in self.points]}

    @classmethod
    def from_json(cls, data: dict | str) -> "Embedding":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_points(data["points"], d=int(data["d"]))

    def as_float(self) -> np.ndarray:
        return np.array([[float(x) for x in pt] for pt in self.points], dtype=float).reshape(self.n, self.d)


def _sub(a, b):
    return [x - y for x, y in zip(a, b)]


def _dot(a, b):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def squared_distance(p: Embedding, u: int, v: int) -> Fraction:
    diff = _sub(p[u], p[v])
    return _dot(diff, diff)


def squared_edge_lengths(X: SimplicialComplex, p: Embedding) -> SquaredLengths:
    """Squared length of every edge of X under p."""
    if not p.covers(X.vertices):
        raise ValueError("embedding does not cover the vertex set")
    return {e: squared_distance(p, *e) for e in X.edges}


def random_rational_embedding(n: int, d: int, seed, bits: int = 20) -> Embedding:
    """Integer coordinates drawn uniformly from [-2^bits, 2^bits]."""
    if n < 1 or d < 1:
        raise ValueError("need n, d >= 1")
    rng = random.Random(f"embedding:{seed}")
    lim = 1 << bits
    return Embedding(d, tuple(tuple(Fraction(rng.randint(-lim, lim)) for _ in range(d)) for _ in range(n)))


def random_squared_lengths(edges: Sequence[Face], seed, bits: int = 20) -> SquaredLengths:
    """Independent random positive integers, one per edge."""
    rng = random.Random(f"lengths:{seed}")
    return {e: Fraction(rng.randint(1, 1 << bits)) for e in edges}


# -- Cayley-Menger -------------------------------------------------------

def cm_prefactor(k: int) -> Fraction:
    return Fraction((-1) ** (k + 1), factorial(k) ** 2 * 2**k)


def bordered_cm(table: Sequence[Sequence]) -> Table:
    """The (k+2)x(k+2) bordered matrix of squared distances."""
    m = len(table)
    out = [[to_fraction(table[i][j]) for j in range(m)] + [Fraction(1)] for i in range(m)]
    out.append([Fraction(1)] * m + [Fraction(0)])
    return out


def _check_table(table) -> None:
    m = len(table)
    for i in range(m):
        if len(table[i]) != m:
            raise ValueError("squared-length table must be square")
        if table[i][i] != 0:
            raise ValueError("squared-length table needs a zero diagonal")
        for j in range(i):
            if table[i][j] != table[j][i]:
                raise ValueError("squared-length table must be symmetric")


def cm_squared_volume(table: Sequence[Sequence]) -> Fraction:
    """Squared k-volume of a simplex from its (k+1)x(k+1) squared-length table.

    Degenerate or non-realizable tables give values <= 0 rather than errors.
    """
    _check_table(table)
    k = len(table) - 1
    if k == 0:
        return Fraction(1)
    return cm_prefactor(k) * frac_det(bordered_cm(table))


def face_table(face: Face, lengths: Mapping[Face, Fraction]) -> Table:
    """Squared-length table of a face, from the edge map."""
    m = len(face)
    t = [[Fraction(0)] * m for _ in range(m)]
    for i, j in combinations(range(m), 2):
        t[i][j] = t[j][i] = to_fraction(lengths[(face[i], face[j])])
    return t


def face_squared_volume(face: Face, lengths: Mapping[Face, Fraction]) -> Fraction:
    return cm_squared_volume(face_table(face, lengths))


def embedded_table(p: Embedding, face: Sequence[int]) -> Table:
    m = len(face)
    t = [[Fraction(0)] * m for _ in range(m)]
    for i, j in combinations(range(m), 2):
        t[i][j] = t[j][i] = squared_distance(p, face[i], face[j])
    return t


def gram_squared_volume(points: Sequence[Sequence[Fraction]]) -> Fraction:
    """Squared volume via the Gram determinant of edge vectors from the first point."""
    k = len(points) - 1
    if k == 0:
        return Fraction(1)
    vecs = [_sub(q, points[0]) for q in points[1:]]
    G = [[_dot(a, b) for b in vecs] for a in vecs]
    return frac_det(G) / factorial(k) ** 2


def cm_gradient(table: Sequence[Sequence]) -> dict[tuple[int, int], Fraction]:
    """Partial derivatives of the squared volume in each squared length.

    Each squared length sits in two symmetric cells of the bordered matrix,
    so its derivative is twice the matching cofactor times the prefactor.
    Keys are local vertex pairs ``(i, j)`` with ``i < j``.
    """
    _check_table(table)
    k = len(table) - 1
    cm = bordered_cm(table)
    pref = 2 * cm_prefactor(k)
    out = {}
    size = len(cm)
    for i, j in combinations(range(k + 1), 2):
        minor = [[cm[r][c] for c in range(size) if c != j] for r in range(size) if r != i]
        cof = (-1) ** (i + j) * frac_det(minor)
        out[(i, j)] = pref * cof
    return out


# -- altitudes -------------------------------------------------------------

def affine_projection(p: Embedding, base: Sequence[int], x: Sequence[Fraction]) -> list[Fraction]:
    """Orthogonal projection of x onto the affine span of p(base)."""
    origin = p[base[0]]
    dirs = [_sub(p[b], origin) for b in base[1:]]
    if not dirs:
        return list(origin)
    G = RationalMatrix.from_rows([[_dot(a, b) for b in dirs] for a in dirs])
    rhs = [_dot(_sub(x, origin), a) for a in dirs]
    if G.rank() < len(dirs):
        raise DegenerateError(f"base {tuple(base)} is affinely dependent")
    lam = solve(G, rhs)
    assert lam is not None
    foot = list(origin)
    for c, a in zip(lam, dirs):
        foot = [f + c * ai for f, ai in zip(foot, a)]
    return foot


def altitude_foot(p: Embedding, sigma: Sequence[int], v: int) -> list[Fraction]:
    if v not in sigma:
        raise ValueError(f"vertex {v} not in {tuple(sigma)}")
    base = [u for u in sigma if u != v]
    return affine_projection(p, base, p[v])


def altitude_vector(p: Embedding, sigma: Sequence[int], v: int) -> list[Fraction]:
    """Vector from the foot of the altitude on ``sigma - {v}`` to p(v)."""
    return _sub(p[v], altitude_foot(p, sigma, v))


# -- regular simplices --------------------------------------------------------

@dataclass(frozen=True)
class LengthTable:
    """Exact squared distances between labelled points, with no coordinates.

    Used where only Cayley-Menger quantities matter; ``float_points`` gives
    a realization for floating cross-checks.
    """

    table: tuple[tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.table)

    def lengths(self, edges: Sequence[Face]) -> SquaredLengths:
        return {e: self.table[e[0]][e[1]] for e in edges}

    def float_points(self) -> np.ndarray:
        D = np.array([[float(x) for x in r] for r in self.table])
        n = len(D)
        J = np.eye(n) - np.ones((n, n)) / n
        G = -0.5 * J @ D @ J
        w, V = np.linalg.eigh(G)
        w = np.clip(w, 0, None)
        order = np.argsort(w)[::-1]
        return V[:, order] * np.sqrt(w[order])


def barycenter_squared_distance(table: Sequence[Sequence], weights: Sequence, j: int) -> Fraction:
    """Squared distance from point j to the affine combination of all points.

    Uses |sum w_i x_i - x_j|^2 = sum w_i d_ij - 1/2 sum w_i w_l d_il for
    weights summing to one.
    """
    w = [to_fraction(x) for x in weights]
    if sum(w) != 1:
        raise ValueError("affine weights must sum to 1")
    m = len(table)
    first = sum((w[i] * to_fraction(table[i][j]) for i in range(m)), Fraction(0))
    second = sum((w[i] * w[l] * to_fraction(table[i][l]) for i in range(m) for l in range(m)), Fraction(0))
    return first - second / 2


def regular_simplex_embedding(d: int, with_centroid: bool = False) -> LengthTable:
    """Regular d-simplex with unit squared edges.

    With ``with_centroid`` the centroid is point 0 and the simplex vertices
    are 1..d+1; otherwise the simplex vertices are 0..d.
    """
    if d < 1:
        raise ValueError("need d >= 1")
    m = d + 1
    simplex = [[Fraction(int(i != j)) for j in range(m)] for i in range(m)]
    if not with_centroid:
        return LengthTable(tuple(tuple(r) for r in simplex))
    w = [Fraction(1, m)] * m
    c = [barycenter_squared_distance(simplex, w, j) for j in range(m)]
    table = [[Fraction(0)] + c]
    for i in range(m):
        table.append([c[i]] + simplex[i])
    return LengthTable(tuple(tuple(r) for r in table))


# -- the volume quadratic ------------------------------------------------------

@dataclass(frozen=True)
class VolumeQuadratic:
    """Squared volume as A t^2 + B t + C in the squared length t of edge {0,1}."""

    A: Fraction
    B: Fraction
    C: Fraction
    k: int

    def __call__(self, t) -> Fraction:
        t = to_fraction(t)
        return (self.A * t + self.B) * t + self.C

    def derivative(self, t) -> Fraction:
        return 2 * self.A * to_fraction(t) + self.B

    @property
    def critical_point(self) -> Fraction:
        return -self.B / (2 * self.A)

    @property
    def discriminant(self) -> Fraction:
        return self.B * self.B - 4 * self.A * self.C


def _with_t(table: Sequence[Sequence], t: Fraction) -> Table:
    m = len(table)
    out = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            if {i, j} == {0, 1}:
                out[i][j] = t
            elif i != j:
                out[i][j] = to_fraction(table[i][j])
    return out


def volume_quadratic(table: Sequence[Sequence]) -> VolumeQuadratic:
    """Exact coefficients of the squared volume as a function of ``table[0][1]``.

    The entry at (0, 1) is ignored. Requires the simplex on vertices 2..k to
    be nondegenerate.
    """
    k = len(table) - 1
    if k < 2:
        raise ValueError("need a simplex of dimension >= 2")
    base = [[to_fraction(table[i][j]) for j in range(2, k + 1)] for i in range(2, k + 1)]
    if k > 2 and cm_squared_volume(base) <= 0:
        raise DegenerateError("the face opposite edge {0,1} is degenerate")
    f0, f1, f2 = (cm_squared_volume(_with_t(table, Fraction(t))) for t in (0, 1, 2))
    A = (f2 - 2 * f1 + f0) / 2
    B = f1 - f0 - A
    return VolumeQuadratic(A, B, f0, k)
