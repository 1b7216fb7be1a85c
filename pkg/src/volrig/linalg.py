"""Exact rational matrices: rank, determinant, solving, and a prime-field
rank for fast randomized trials."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

import sympy

# Mersenne prime 2^61 - 1.
DEFAULT_PRIME = (1 << 61) - 1


class BadPrimeError(ArithmeticError):
    """A denominator vanishes modulo the chosen prime."""


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact entries")
    return Fraction(x)


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class RationalMatrix:
    """Dense row-major matrix of Fractions."""

    nrows: int
    ncols: int
    data: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], ncols: int | None = None) -> "RationalMatrix":
        data = tuple(tuple(to_fraction(x) for x in row) for row in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for row in data:
            if len(row) != ncols:
                raise ValueError("ragged rows")
        return cls(len(data), ncols, data)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RationalMatrix":
        zero = Fraction(0)
        return cls(nrows, ncols, tuple((zero,) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.data[i]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    __hash__ = None  # type: ignore[assignment]

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        return matmul(self, other)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return RationalMatrix(
            self.nrows,
            self.ncols,
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)),
        )

    def __neg__(self) -> "RationalMatrix":
        return self.scale(-1)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self + (-other)

    def scale(self, c) -> "RationalMatrix":
        c = to_fraction(c)
        return RationalMatrix(self.nrows, self.ncols, tuple(tuple(c * x for x in r) for r in self.data))

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.ncols, self.nrows, tuple(zip(*self.data)) if self.nrows else ())

    @property
    def T(self) -> "RationalMatrix":
        return self.transpose()

    def take_rows(self, idx: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix(len(idx), self.ncols, tuple(self.data[i] for i in idx))

    def take_cols(self, idx: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix(self.nrows, len(idx), tuple(tuple(r[j] for j in idx) for r in self.data))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)

    def rank(self) -> int:
        return rank_exact(self)

    def det(self) -> Fraction:
        return det_exact(self)

    def integer_rows(self) -> list[list[int]]:
        """Rows scaled by their denominator lcm; same row space."""
        out = []
        for r in self.data:
            m = lcm(*(x.denominator for x in r)) if r else 1
            out.append([int(x * m) for x in r])
        return out

    def to_float(self):
        import numpy as np

        return np.array([[float(x) for x in r] for r in self.data], dtype=float).reshape(self.shape)

    def to_json(self) -> list[list[str]]:
        return [[format_fraction(x) for x in r] for r in self.data]

    @classmethod
    def from_json(cls, rows: list[list[str]]) -> "RationalMatrix":
        return cls.from_rows(rows)

    def __repr__(self) -> str:
        return f"RationalMatrix({self.nrows}x{self.ncols})"


def matmul(A: RationalMatrix, B: RationalMatrix) -> RationalMatrix:
    if A.ncols != B.nrows:
        raise ValueError(f"cannot multiply {A.shape} by {B.shape}")
    zero = Fraction(0)
    out = []
    for row in A.data:
        acc = [zero] * B.ncols
        for a, brow in zip(row, B.data):
            if a:
                for j, b in enumerate(brow):
                    if b:
                        acc[j] += a * b
        out.append(tuple(acc))
    return RationalMatrix(A.nrows, B.ncols, tuple(out))


def block_diag_scalars(values: Sequence, block: int) -> RationalMatrix:
    """Diagonal matrix with each value repeated ``block`` times."""
    diag = [to_fraction(v) for v in values for _ in range(block)]
    n = len(diag)
    zero = Fraction(0)
    return RationalMatrix(n, n, tuple(tuple(diag[i] if i == j else zero for j in range(n)) for i in range(n)))


# -- fraction-free elimination ------------------------------------------

@dataclass
class BareissResult:
    rank: int
    echelon: list[list[int]]
    pivot_cols: list[int]
    swaps: int


def bareiss(rows: list[list[int]]) -> BareissResult:
    """Fraction-free row echelon form of an integer matrix.

    Pivot is the first nonzero entry at or below the current row, scanning
    columns left to right. Every division is exact; a nonzero remainder
    raises ``ArithmeticError``.
    """
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    prev = 1
    r = 0
    swaps = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if a[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
            swaps += 1
        piv = a[r][c]
        prow = a[r]
        for i in range(r + 1, m):
            row = a[i]
            f = row[c]
            for j in range(c + 1, n):
                q, rem = divmod(piv * row[j] - f * prow[j], prev)
                if rem:
                    raise ArithmeticError("inexact Bareiss division")
                row[j] = q
            row[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return BareissResult(r, a, pivots, swaps)


def rank_exact(M: RationalMatrix) -> int:
    """Exact rank over Q."""
    if M.nrows == 0 or M.ncols == 0:
        return 0
    rows = M.integer_rows()
    # Eliminate along the shorter side.
    if M.nrows > M.ncols:
        rows = [list(c) for c in zip(*rows)]
    return bareiss(rows).rank


def det_exact(M: RationalMatrix) -> Fraction:
    if M.nrows != M.ncols:
        raise ValueError("determinant of a non-square matrix")
    if M.nrows == 0:
        return Fraction(1)
    scale = Fraction(1)
    rows = []
    for r in M.data:
        m = lcm(*(x.denominator for x in r))
        scale /= m
        rows.append([int(x * m) for x in r])
    res = bareiss(rows)
    if res.rank < M.nrows:
        return Fraction(0)
    sign = -1 if res.swaps % 2 else 1
    return sign * res.echelon[-1][-1] * scale


def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix."""
    n = len(rows)
    if n == 0:
        return 1
    res = bareiss([list(r) for r in rows])
    if res.rank < n:
        return 0
    return (-1 if res.swaps % 2 else 1) * res.echelon[-1][-1]


def frac_det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    return det_exact(RationalMatrix.from_rows(rows, ncols=len(rows)))


def solve(A: RationalMatrix, b: Sequence) -> list[Fraction] | None:
    """One exact solution of ``A x = b``, or None when inconsistent.

    Free variables are set to zero.
    """
    b = [to_fraction(x) for x in b]
    if len(b) != A.nrows:
        raise ValueError("right-hand side length mismatch")
    aug = [list(r) + [bi] for r, bi in zip(A.data, b)]
    n = A.ncols
    r = 0
    pivots = []
    for c in range(n):
        p = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == len(aug):
            break
    if any(row[-1] != 0 for row in aug[r:]):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = aug[i][-1]
    return x


# Name kept to match the documented operation.
solve_least_structure = solve


# -- prime field ----------------------------------------------------------

def random_prime(rng: random.Random, bits: int = 62) -> int:
    return int(sympy.nextprime(rng.getrandbits(bits) | (1 << (bits - 1))))


@dataclass(frozen=True)
class PrimeFieldMatrix:
    nrows: int
    ncols: int
    modulus: int
    data: tuple[tuple[int, ...], ...]

    @classmethod
    def reduce(cls, M: RationalMatrix, p: int) -> "PrimeFieldMatrix":
        rows = []
        for r in M.data:
            out = []
            for x in r:
                den = x.denominator % p
                if den == 0:
                    raise BadPrimeError(f"denominator {x.denominator} vanishes mod {p}")
                out.append(x.numerator * pow(den, -1, p) % p)
            rows.append(tuple(out))
        return cls(M.nrows, M.ncols, p, tuple(rows))

    def rank(self) -> int:
        return rank_mod(self.data, self.modulus)


def rank_mod(rows: Sequence[Sequence[int]], p: int) -> int:
    """Rank of an integer matrix over GF(p)."""
    a = [[x % p for x in r] for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        prow = a[r]
        inv = pow(prow[c], -1, p)
        for i in range(r + 1, m):
            row = a[i]
            f = row[c]
            if f:
                f = f * inv % p
                for j in range(c, n):
                    if prow[j]:
                        row[j] = (row[j] - f * prow[j]) % p
        r += 1
    return r


def rank_modp(M: RationalMatrix, prime: int | None = None, seed: int | None = None) -> int:
    """Rank of M reduced modulo a prime; never exceeds the rational rank.

    With no prime given, a random 62-bit prime is drawn from ``seed``.
    Raises BadPrimeError if some denominator vanishes modulo the prime.
    """
    if prime is None:
        prime = random_prime(random.Random(seed))
    if M.nrows == 0 or M.ncols == 0:
        return 0
    return PrimeFieldMatrix.reduce(M, prime).rank()
