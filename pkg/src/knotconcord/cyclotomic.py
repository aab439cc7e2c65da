"""Exact arithmetic in Z[zeta] for zeta = exp(2 pi i k / N).

Elements live in Z[x]/(x^N - 1), which maps onto Z[zeta] by x -> zeta; the
kernel is generated by the N-th cyclotomic polynomial, so reducing modulo it
gives a canonical form and an exact zero test.

Signs of real elements are certified with exact rational interval
arithmetic: a real element z equals Q(y)/2 for an integer polynomial Q in
y = 2 cos(2 pi k / N), and y is isolated by a rational interval that is
bisected until the enclosure of Q excludes zero.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .polynomials import IntPoly, compact_form, count_roots, cyclotomic, lucas_poly, refine_root, sturm_sequence


class CertificationError(ArithmeticError):
    """Raised when a sign cannot be certified within the refinement budget."""


class CycInt:
    __slots__ = ("n", "c")

    def __init__(self, n: int, coeffs):
        self.n = n
        self.c = coeffs if isinstance(coeffs, list) else list(coeffs)

    @classmethod
    def const(cls, n: int, a: int) -> "CycInt":
        c = [0] * n
        c[0] = a
        return cls(n, c)

    @classmethod
    def zeta_power(cls, n: int, e: int, a: int = 1) -> "CycInt":
        c = [0] * n
        c[e % n] = a
        return cls(n, c)

    def __add__(self, other):
        if isinstance(other, int):
            c = self.c[:]
            c[0] += other
            return CycInt(self.n, c)
        return CycInt(self.n, [a + b for a, b in zip(self.c, other.c)])

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.n, [-a for a in self.c])

    def __sub__(self, other):
        if isinstance(other, int):
            return self + (-other)
        return CycInt(self.n, [a - b for a, b in zip(self.c, other.c)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        n = self.n
        if isinstance(other, int):
            return CycInt(n, [a * other for a in self.c])
        out = [0] * n
        bs = [(j, b) for j, b in enumerate(other.c) if b]
        for i, a in enumerate(self.c):
            if a:
                for j, b in bs:
                    k = i + j
                    if k >= n:
                        k -= n
                    out[k] += a * b
        return CycInt(n, out)

    __rmul__ = __mul__

    def conj(self) -> "CycInt":
        n = self.n
        return CycInt(n, [self.c[(-i) % n] for i in range(n)])

    def reduced(self) -> tuple[int, ...]:
        """Canonical coefficients modulo the N-th cyclotomic polynomial."""
        return reduce_mod_cyclotomic(self.c, self.n)

    def is_zero(self) -> bool:
        return not any(self.reduced())

    def __eq__(self, other):
        if isinstance(other, int):
            other = CycInt.const(self.n, other)
        return isinstance(other, CycInt) and self.n == other.n and self.reduced() == other.reduced()

    def __hash__(self):
        return hash((self.n, self.reduced()))

    def to_complex(self, k: int = 1) -> complex:
        w = complex(math.cos(2 * math.pi * k / self.n), math.sin(2 * math.pi * k / self.n))
        return sum(a * w**i for i, a in enumerate(self.c))

    def __repr__(self):
        return f"CycInt({self.n}, {self.reduced()})"


def reduce_mod_cyclotomic(coeffs, n: int) -> tuple[int, ...]:
    phi = cyclotomic(n).coeffs
    d = len(phi) - 1
    c = list(coeffs)
    # phi is monic: long division stays integral
    for k in range(len(c) - 1, d - 1, -1):
        a = c[k]
        if a:
            for j in range(d + 1):
                c[k - d + j] -= a * phi[j]
    c = c[:d]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


# ---------------------------------------------------------------------------
# real embedding


@lru_cache(maxsize=None)
def _minpoly_2cos(n: int) -> IntPoly:
    """Minimal polynomial of 2 cos(2 pi / n) for n >= 3."""
    return compact_form(cyclotomic(n))


@lru_cache(maxsize=4096)
def isolate_2cos(k: int, n: int) -> tuple[IntPoly, Fraction, Fraction]:
    """``(psi, lo, hi)`` with ``y = 2 cos(2 pi k/n)`` the unique root of ``psi`` in ``[lo, hi]``."""
    if gcd(k, n) != 1:
        raise ValueError("k must be coprime to n")
    if n <= 2:
        y = 2 if n == 1 else -2
        return IntPoly([-y, 1]), Fraction(y), Fraction(y)
    psi = _minpoly_2cos(n)
    y0 = 2 * math.cos(2 * math.pi * k / n)
    if psi.degree == 1:
        y = Fraction(-psi.coeffs[0], psi.coeffs[1])
        return psi, y, y
    seq = sturm_sequence(psi)
    approx = Fraction(y0)
    delta = Fraction(1, 1 << 20)
    while True:
        lo, hi = approx - delta, approx + delta
        cnt = count_roots(seq, lo, hi)
        if cnt == 1:
            if psi(hi) == 0 and hi != approx:
                delta /= 2
                continue
            return psi, lo, hi
        if cnt == 0:
            delta *= 2
        else:
            delta /= 2
        if delta < Fraction(1, 1 << 60) or delta > 4:
            raise CertificationError("failed to isolate 2cos(2 pi k/n)")


def real_poly_in_2cos(z: CycInt) -> IntPoly:
    """``Q`` with ``2 z = Q(zeta + 1/zeta)``, valid when ``z`` is real."""
    n = z.n
    Q = IntPoly()
    for j, a in enumerate(z.c):
        if a:
            # Re(zeta^j) = C_j(y) / 2, and z = Re z
            Q = Q + a * lucas_poly(min(j, n - j) if n > 1 else 0)
    return Q


def _enclose(Q: IntPoly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Interval Horner enclosure of ``Q`` over ``[lo, hi]``."""
    a = b = Fraction(0)
    for c in reversed(Q.coeffs):
        prods = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(prods) + c, max(prods) + c
    return a, b


def real_sign(z: CycInt, k: int = 1, max_bisections: int = 4000) -> int:
    """Certified sign of a real element of Z[zeta_n] under zeta -> exp(2 pi i k/n)."""
    n = z.n
    if n <= 2:
        return _sgn(_exact_small(z))
    if z.is_zero():
        return 0
    Q = real_poly_in_2cos(z)
    psi, lo, hi = isolate_2cos(k % n, n)
    if lo == hi:
        return _sgn(Q(lo))
    # nonzero by the exact test, so refinement terminates
    width = hi - lo
    for _ in range(max_bisections):
        a, b = _enclose(Q, lo, hi)
        if a > 0:
            return 1
        if b < 0:
            return -1
        width /= 16
        lo, hi = refine_root(psi, lo, hi, width)
        if lo == hi:
            return _sgn(Q(lo))
    raise CertificationError("could not separate a nonzero algebraic number from 0")


def _exact_small(z: CycInt) -> int:
    if z.n == 1:
        return z.c[0]
    return z.c[0] - z.c[1]


def _sgn(x) -> int:
    return (x > 0) - (x < 0)
