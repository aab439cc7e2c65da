"""Exact integer matrix kernel.

Matrices are immutable row tuples of Python ints.  Determinants use Bareiss
fraction-free elimination, characteristic polynomials use Berkowitz's
division-free recurrence (so the same code runs over any commutative ring
whose elements support ``+``, ``-`` and ``*``), and the Smith normal form
tracks both transformation matrices.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .polynomials import IntPoly

Rational = Fraction


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class IntMatrix:
    rows: tuple[tuple[int, ...], ...]
    ncols: int

    def __init__(self, rows: Iterable[Iterable[int]] = (), ncols: int | None = None):
        r = tuple(tuple(int(x) for x in row) for row in rows)
        if ncols is None:
            ncols = len(r[0]) if r else 0
        if any(len(row) != ncols for row in r):
            raise DimensionError("ragged matrix")
        object.__setattr__(self, "rows", r)
        object.__setattr__(self, "ncols", ncols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(([int(i == j) for j in range(n)] for i in range(n)), ncols=n)

    @classmethod
    def zeros(cls, m: int, n: int) -> "IntMatrix":
        return cls(([0] * n for _ in range(m)), ncols=n)

    @classmethod
    def diag(cls, entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return cls(([entries[i] if i == j else 0 for j in range(n)] for i in range(n)), ncols=n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(zip(*self.rows), ncols=self.nrows) if self.rows else IntMatrix.zeros(self.ncols, 0)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch")
        return IntMatrix(([a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)), ncols=self.ncols)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(([-a for a in r] for r in self.rows), ncols=self.ncols)

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(([c * a for a in r] for r in self.rows), ncols=self.ncols)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.rows)) if other.rows else []
        return IntMatrix(
            ([sum(a * b for a, b in zip(r, c)) for c in cols] if cols else [0] * other.ncols for r in self.rows),
            ncols=other.ncols,
        )

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.rows)

    def direct_sum(self, other: "IntMatrix") -> "IntMatrix":
        return block_diag([self, other])

    def __repr__(self):
        return f"IntMatrix({self.tolist()})"


def block_diag(blocks: Sequence[IntMatrix]) -> IntMatrix:
    n = sum(b.ncols for b in blocks)
    rows: list[list[int]] = []
    offset = 0
    for b in blocks:
        for r in b.rows:
            rows.append([0] * offset + list(r) + [0] * (n - offset - b.ncols))
        offset += b.ncols
    return IntMatrix(rows, ncols=n)


def as_matrix(A) -> IntMatrix:
    return A if isinstance(A, IntMatrix) else IntMatrix(A)


# ---------------------------------------------------------------------------


def det(A) -> int:
    """Determinant by Bareiss elimination (every division is exact)."""
    A = as_matrix(A)
    if not A.is_square:
        raise DimensionError(f"det needs a square matrix, got {A.shape}")
    n = A.nrows
    if n == 0:
        return 1
    M = [list(r) for r in A.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * pivot - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = pivot
    return sign * M[n - 1][n - 1]


def berkowitz(M: Sequence[Sequence], one, zero) -> list:
    """Characteristic polynomial ``det(xI - M)`` over a commutative ring.

    Returns ascending coefficients ``[c_0, ..., c_n]`` with ``c_n = one``.
    Only ring operations are used, no division.
    """
    n = len(M)
    if n == 0:
        return [one]
    # vector of coefficients, descending, for the leading k x k block
    poly = [one, zero - M[0][0]]
    for k in range(1, n):
        # M = [[A, R], [C, a]] with A the leading k x k block
        a = M[k][k]
        R = [M[i][k] for i in range(k)]  # column above the diagonal entry
        C = [M[k][j] for j in range(k)]  # row left of the diagonal entry
        # Toeplitz column: 1, -a, -C R, -C A R, -C A^2 R, ...
        col = [one, zero - a]
        vec = R
        for _ in range(k):
            s = zero
            for x, y in zip(C, vec):
                s = s + x * y
            col.append(zero - s)
            vec = [_dot([M[i][j] for j in range(k)], vec, zero) for i in range(k)]
        # new poly = Toeplitz(col) * poly
        new = []
        for i in range(k + 2):
            s = zero
            for j in range(min(i, k) + 1):
                if i - j < len(col):
                    s = s + col[i - j] * poly[j]
            new.append(s)
        poly = new
    return list(reversed(poly))


def _dot(u, v, zero):
    s = zero
    for x, y in zip(u, v):
        s = s + x * y
    return s


def char_poly(A) -> IntPoly:
    """``det(xI - A)`` with exact integer coefficients."""
    A = as_matrix(A)
    if not A.is_square:
        raise DimensionError(f"char_poly needs a square matrix, got {A.shape}")
    return IntPoly(berkowitz(A.rows, 1, 0))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SnfResult:
    U: IntMatrix
    D: IntMatrix
    W: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.shape)))


def smith_normal_form(A) -> SnfResult:
    """``U A W = D`` with ``U``, ``W`` unimodular and ``d_1 | d_2 | ...``.

    Pivot: smallest nonzero absolute value in the remaining block, ties broken
    by row then column index, so the transforms are reproducible.
    """
    A = as_matrix(A)
    m, n = A.shape
    D = [list(r) for r in A.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    W = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in W:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):  # row dst += c * row src
        if c:
            D[dst] = [a + c * b for a, b in zip(D[dst], D[src])]
            U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, c):  # col dst += c * col src
        if c:
            for row in D:
                row[dst] += c * row[src]
            for row in W:
                row[dst] += c * row[src]

    def neg_row(i):
        D[i] = [-a for a in D[i]]
        U[i] = [-a for a in U[i]]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = abs(D[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // p))
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // p))
                    if D[t][j]:
                        dirty = True
            if not dirty:
                # divisibility of the remaining block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if D[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(bad, t, 1)
                continue
            # move the smallest remainder into the pivot position
            best = None
            for i in range(t, m):
                if D[i][t] and (best is None or abs(D[i][t]) < best[0]):
                    best = (abs(D[i][t]), i, t)
            for j in range(t, n):
                if D[t][j] and (best is None or abs(D[t][j]) < best[0]):
                    best = (abs(D[t][j]), t, j)
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
        if D[t][t] < 0:
            neg_row(t)
        t += 1
    return SnfResult(IntMatrix(U, ncols=m), IntMatrix(D, ncols=n), IntMatrix(W, ncols=n))


def invariant_factors(A) -> tuple[int, ...]:
    return smith_normal_form(A).diagonal


# ---------------------------------------------------------------------------


def solve_mod(A, q: int) -> list[tuple[int, ...]]:
    """Generators of ``{x in (Z/q)^n : A^T x = 0 mod q}``.

    With ``U A^T W = D`` the condition becomes ``d_i y_i = 0 mod q`` for
    ``y = W^{-1} x``, so the columns of ``W`` scaled by ``q / gcd(d_i, q)``
    generate the solution module (for any ``q >= 2``, prime or not).
    """
    A = as_matrix(A)
    if q < 2:
        raise ValueError("modulus must be at least 2")
    n = A.nrows
    snf = smith_normal_form(A.T)
    d = snf.diagonal
    gens = []
    for i in range(n):
        di = d[i] if i < len(d) else 0
        step = q // gcd(di, q)
        v = tuple((step * snf.W[r, i]) % q for r in range(n))
        if any(v):
            gens.append(v)
    return gens


def in_solution_set(A, q: int, x: Sequence[int]) -> bool:
    A = as_matrix(A)
    return all(c % q == 0 for c in A.T.apply(x))


def span_mod(gens: Sequence[Sequence[int]], q: int, n: int) -> set[tuple[int, ...]]:
    """All ``Z/q`` combinations of ``gens`` (closure under addition)."""
    span = {tuple([0] * n)}
    for g in gens:
        g = tuple(x % q for x in g)
        new = set(span)
        frontier = list(span)
        while frontier:
            nxt = []
            for v in frontier:
                w = tuple((a + b) % q for a, b in zip(v, g))
                if w not in new:
                    new.add(w)
                    nxt.append(w)
            frontier = nxt
        span = new
    return span


def inverse_rational(A) -> list[list[Fraction]]:
    """Exact inverse over Q by Gauss-Jordan."""
    A = as_matrix(A)
    if not A.is_square:
        raise DimensionError("inverse needs a square matrix")
    n = A.nrows
    M = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(A.rows)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[p] = M[p], M[c]
        pv = M[c][c]
        M[c] = [x / pv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [row[n:] for row in M]


def unimodular_inverse(A) -> IntMatrix:
    inv = inverse_rational(A)
    if any(x.denominator != 1 for r in inv for x in r):
        raise ValueError("matrix is not unimodular")
    return IntMatrix([[int(x) for x in r] for r in inv], ncols=len(inv))
