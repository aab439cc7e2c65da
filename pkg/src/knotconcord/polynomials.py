"""Dense univariate integer polynomials and the exact root tools built on them.

Coefficients are stored in ascending degree order.  Everything here is exact:
rational arithmetic uses :class:`fractions.Fraction`, and real roots are
isolated with Sturm sequences over rational intervals.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd, isqrt
from typing import Iterable, Sequence


def _trim(coeffs: Iterable) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class IntPoly:
    """Integer polynomial, ascending coefficients, zero polynomial is ``()``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = _trim(int(x) for x in coeffs)
        object.__setattr__(self, "coeffs", c)

    def __setattr__(self, name, value):
        raise AttributeError("IntPoly is immutable")

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "IntPoly":
        return cls([0] * degree + [coeff])

    @classmethod
    def constant(cls, c: int) -> "IntPoly":
        return cls([c])

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def primitive(self) -> "IntPoly":
        """Divide out the content and make the leading coefficient positive."""
        g = self.content()
        if g == 0:
            return self
        if self.lc < 0:
            g = -g
        return IntPoly(c // g for c in self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPoly([other])
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = IntPoly([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def derivative(self) -> "IntPoly":
        return IntPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def reciprocal(self) -> "IntPoly":
        """``t^deg f(1/t)``."""
        return IntPoly(reversed(self.coeffs))

    def shift_down(self) -> tuple["IntPoly", int]:
        """Strip factors of ``t``; returns the quotient and the power removed."""
        k = 0
        while k < len(self.coeffs) and self.coeffs[k] == 0:
            k += 1
        return IntPoly(self.coeffs[k:]), k

    def divmod_exact(self, other: "IntPoly") -> tuple["IntPoly", "IntPoly"] | None:
        """Division over Z; ``None`` if the quotient is not integral."""
        q, r = poly_divmod_q(self.coeffs, other.coeffs)
        if any(x.denominator != 1 for x in q) or any(x.denominator != 1 for x in r):
            return None
        return IntPoly(int(x) for x in q), IntPoly(int(x) for x in r)

    def exact_quotient(self, other: "IntPoly") -> "IntPoly | None":
        """``self / other`` if it divides exactly over Z, else ``None``."""
        res = self.divmod_exact(other)
        if res is None or not res[1].is_zero():
            return None
        return res[0]

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    def to_string(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if a == 1 else f"{a}{mono}"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    __str__ = to_string


def _as_poly(x) -> IntPoly:
    if isinstance(x, IntPoly):
        return x
    if isinstance(x, int):
        return IntPoly([x])
    raise TypeError(f"cannot coerce {type(x).__name__} to IntPoly")


# ---------------------------------------------------------------------------
# rational polynomial helpers (tuples of Fractions, ascending)


def poly_divmod_q(a: Sequence, b: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    a = [Fraction(x) for x in _trim(a)]
    b = [Fraction(x) for x in _trim(b)]
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lb = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        coef = a[k + len(b) - 1] / lb
        q[k] = coef
        if coef:
            for j, bj in enumerate(b):
                a[k + j] -= coef * bj
    return list(_trim(q)), list(_trim(a[: len(b) - 1]))


def _q_to_primitive(coeffs: Sequence[Fraction]) -> IntPoly:
    coeffs = _trim(coeffs)
    if not coeffs:
        return IntPoly()
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    return IntPoly(int(c * den) for c in coeffs).primitive()


def poly_gcd(a: IntPoly, b: IntPoly) -> IntPoly:
    """Primitive gcd over Q (positive leading coefficient)."""
    x = [Fraction(c) for c in a.coeffs]
    y = [Fraction(c) for c in b.coeffs]
    while y:
        _, r = poly_divmod_q(x, y)
        x, y = y, r
    if not x:
        return IntPoly()
    return _q_to_primitive(x)


def squarefree_decomposition(f: IntPoly) -> list[tuple[IntPoly, int]]:
    """Yun's algorithm over Q.

    Returns ``[(s, e), ...]`` with ``f = c * prod s^e`` for a rational constant
    ``c``; each ``s`` is primitive, squarefree and non-constant.
    """
    if f.degree <= 0:
        return []

    def deriv(p):
        return [Fraction(k) * x for k, x in enumerate(p) if k]

    def sub(p, q):
        return list(_trim(x - y for x, y in zip_longest0(p, q)))

    def gcd_q(p, q):
        if not _trim(q):
            return _q_to_primitive(p)
        return poly_gcd(_q_to_primitive(p), _q_to_primitive(q))

    fq = [Fraction(c) for c in f.coeffs]
    a0 = gcd_q(fq, deriv(fq))
    b, _ = poly_divmod_q(fq, a0.coeffs)
    c, _ = poly_divmod_q(deriv(fq), a0.coeffs)
    d = sub(c, deriv(b))
    out = []
    i = 1
    while len(_trim(b)) > 1:
        a = gcd_q(b, d)
        if a.degree > 0:
            out.append((a, i))
        b, _ = poly_divmod_q(b, a.coeffs)
        c, _ = poly_divmod_q(d, a.coeffs) if _trim(d) else ([], [])
        d = sub(c, deriv(b))
        i += 1
    return out


def zip_longest0(a: Sequence, b: Sequence):
    n = max(len(a), len(b))
    for k in range(n):
        yield (a[k] if k < len(a) else 0), (b[k] if k < len(b) else 0)


# ---------------------------------------------------------------------------
# Sturm sequences and real root isolation


def sturm_sequence(f: IntPoly) -> list[IntPoly]:
    """Sturm chain of ``f`` with every member rescaled by a positive constant."""
    seq = [f, f.derivative()]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        _, r = poly_divmod_q(seq[-2].coeffs, seq[-1].coeffs)
        if not r:
            break
        den = 1
        for c in r:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [-int(c * den) for c in r]
        g = 0
        for c in ints:
            g = gcd(g, c)
        seq.append(IntPoly(c // g for c in ints))
    return [p for p in seq if not p.is_zero()]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _variations(seq: Sequence[IntPoly], x: Fraction) -> int:
    signs = [s for s in (_sign(p(x)) for p in seq) if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def count_roots(seq: Sequence[IntPoly], lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots in the half-open interval ``(lo, hi]``."""
    return _variations(seq, lo) - _variations(seq, hi)


def cauchy_bound(f: IntPoly) -> Fraction:
    lc = abs(f.lc)
    return 1 + Fraction(max((abs(c) for c in f.coeffs[:-1]), default=0), lc)


def isolate_real_roots(
    f: IntPoly, lo: Fraction | None = None, hi: Fraction | None = None
) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals for the distinct real roots of ``f`` inside ``(lo, hi)``.

    Each returned ``(a, b)`` holds exactly one root; ``a == b`` marks an exact
    rational root.  Intervals come back sorted and pairwise disjoint.
    """
    if f.degree <= 0:
        return []
    f = f.primitive()
    sq = poly_gcd(f, f.derivative())
    if sq.degree > 0:
        f = f.exact_quotient(sq)
    seq = sturm_sequence(f)
    bound = cauchy_bound(f)
    lo = -bound if lo is None else Fraction(lo)
    hi = bound if hi is None else Fraction(hi)
    out: list[tuple[Fraction, Fraction]] = []
    # open interval: discard a root sitting exactly on hi
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = count_roots(seq, a, b)
        if n == 0:
            continue
        if n == 1:
            if f(b) == 0:
                if b != hi:
                    out.append((b, b))
            else:
                out.append((a, b))
            continue
        m = (a + b) / 2
        stack.append((m, b))
        stack.append((a, m))
    out.sort()
    return out


def refine_root(f: IntPoly, a: Fraction, b: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    """Shrink an isolating interval of a simple root of ``f`` by bisection."""
    if a == b:
        return a, b
    fa = _sign(f(a))
    while b - a > width:
        m = (a + b) / 2
        fm = _sign(f(m))
        if fm == 0:
            return m, m
        if fa == 0 or fm == fa:
            # root is strictly inside (m, b]
            a, fa = m, fm
        else:
            b = m
    return a, b


# ---------------------------------------------------------------------------
# palindromic polynomials and the substitution y = t + 1/t


@lru_cache(maxsize=None)
def lucas_poly(k: int) -> IntPoly:
    """``C_k`` with ``C_k(t + 1/t) = t^k + t^-k`` (``C_0 = 2``)."""
    if k == 0:
        return IntPoly([2])
    if k == 1:
        return IntPoly([0, 1])
    y = IntPoly([0, 1])
    return y * lucas_poly(k - 1) - lucas_poly(k - 2)


def is_palindromic(f: IntPoly) -> bool:
    return f.coeffs == tuple(reversed(f.coeffs))


def compact_form(f: IntPoly) -> IntPoly:
    """For palindromic ``f`` of degree ``2d`` return ``g`` with ``f(t) = t^d g(t + 1/t)``."""
    if not is_palindromic(f) or f.degree % 2:
        raise ValueError("compact_form needs a palindromic polynomial of even degree")
    d = f.degree // 2
    g = IntPoly([f.coeffs[d]])
    for k in range(1, d + 1):
        g = g + f.coeffs[d + k] * lucas_poly(k)
    return g


# ---------------------------------------------------------------------------
# cyclotomic polynomials


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> IntPoly:
    """The n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("n must be positive")
    f = IntPoly([-1] + [0] * (n - 1) + [1])
    for d in range(1, n):
        if n % d == 0:
            f = f.exact_quotient(cyclotomic(d))
    return f


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def cyclotomic_factors(f: IntPoly) -> tuple[dict[int, int], IntPoly]:
    """Split off every cyclotomic factor of ``f``.

    Returns ``({n: multiplicity}, remaining cofactor)``.
    """
    rest = f
    found: dict[int, int] = {}
    if f.is_zero():
        raise ValueError("zero polynomial")
    n = 1
    # phi(n) >= sqrt(n/2), so n <= 2 deg^2 covers every candidate
    limit = max(2, 2 * f.degree * f.degree)
    while n <= limit and rest.degree > 0:
        if euler_phi(n) <= rest.degree:
            phi_n = cyclotomic(n)
            while True:
                q = rest.exact_quotient(phi_n)
                if q is None:
                    break
                rest = q
                found[n] = found.get(n, 0) + 1
        n += 1
    return found, rest


# ---------------------------------------------------------------------------
# factorization over Z (Kronecker)


class DegreeCapExceeded(ValueError):
    pass


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _interpolate(xs: Sequence[int], ys: Sequence[int]) -> list[Fraction]:
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xs[j] * basis[k + 1]
            denom *= xs[i] - xs[j]
        for k in range(n):
            coeffs[k] += ys[i] * basis[k] / denom
    return coeffs


def _find_factor(f: IntPoly, d: int) -> IntPoly | None:
    """A factor of degree exactly ``d`` of primitive ``f``, or ``None``."""
    if d == 2 and f.degree == 2:
        return None
    # choose d+1 evaluation points with few divisors
    candidates = []
    for x in range(-3 * (d + 2), 3 * (d + 2) + 1):
        v = f(x)
        if v == 0:
            return IntPoly([-x, 1]) if d == 1 else None
        candidates.append((len(_divisors(v)), abs(x), x, v))
    candidates.sort()
    pts = candidates[: d + 1]
    xs = [p[2] for p in pts]
    div_sets = []
    for i, p in enumerate(pts):
        ds = _divisors(p[3])
        div_sets.append(ds if i == 0 else ds + [-x for x in ds])
    for ys in product(*div_sets):
        coeffs = _interpolate(xs, ys)
        if any(c.denominator != 1 for c in coeffs):
            continue
        g = IntPoly(int(c) for c in coeffs)
        if g.degree != d:
            continue
        if f.exact_quotient(g) is not None:
            return g.primitive()
    return None


def factor_squarefree(f: IntPoly, degree_cap: int = 12) -> list[IntPoly]:
    """Irreducible factors over Z of a primitive squarefree polynomial.

    Kronecker's method: exponential in the degree, hence the cap.
    """
    f = f.primitive()
    if f.degree <= 1:
        return [f] if f.degree == 1 else []
    if f.degree > degree_cap:
        raise DegreeCapExceeded(f"degree {f.degree} exceeds factoring cap {degree_cap}")
    if f.degree == 2:
        a, b, c = f.coeffs[2], f.coeffs[1], f.coeffs[0]
        disc = b * b - 4 * a * c
        if disc < 0 or isqrt(disc) ** 2 != disc:
            return [f]
    for d in range(1, f.degree // 2 + 1):
        g = _find_factor(f, d)
        if g is not None:
            h = f.exact_quotient(g)
            return sorted(factor_squarefree(g, degree_cap) + factor_squarefree(h, degree_cap), key=lambda p: (p.degree, p.coeffs))
    return [f]


def quadratic_discriminant(f: IntPoly) -> int:
    if f.degree != 2:
        raise ValueError("not a quadratic")
    c, b, a = f.coeffs
    return b * b - 4 * a * c


def is_perfect_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def simplest_rational_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational with smallest denominator strictly inside ``(lo, hi)``."""
    if not lo < hi:
        raise ValueError("empty interval")
    # Stern-Brocot descent
    from math import floor

    fl = floor(lo)
    if fl + 1 < hi:
        return Fraction(fl + 1)
    a0 = fl
    lo_r, hi_r = lo - a0, hi - a0
    # now 0 <= lo_r < hi_r <= 1; work with reciprocals
    if lo_r == 0:
        # pick 1/n with 1/n < hi_r
        n = floor(1 / hi_r) + 1
        return a0 + Fraction(1, n)
    inner = simplest_rational_between(1 / hi_r, 1 / lo_r)
    return a0 + 1 / inner
