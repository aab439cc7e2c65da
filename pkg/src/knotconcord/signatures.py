"""Exact Tristram-Levine signatures.

For ``p = k/N`` the form ``(1 - w) V + (1 - w^-1) V^T`` with ``w = e^{2 pi i p}``
has entries in Z[zeta_N].  Its characteristic polynomial is computed exactly
(Berkowitz, no division), the sign of every coefficient is certified through
:func:`cyclotomic.real_sign`, and Descartes' rule, which is exact for
real-rooted polynomials, turns the sign pattern into the inertia.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cyclotomic import CycInt, CertificationError, real_sign
from .exact_linalg import IntMatrix, berkowitz
from .mp import acos_over_2pi_bounds
from .polynomials import (
    IntPoly,
    compact_form,
    cyclotomic_factors,
    isolate_real_roots,
    refine_root,
    simplest_rational_between,
)
from .branched_cover import cover_homology
from .seifert import BANDED_FORM, KnotExpr, Mirror, Sum, Torus2q, Unknot, alexander_from_matrix, mirror, seifert_matrix

__all__ = [
    "CertificationError",
    "SignatureValue",
    "SignatureProfile",
    "JumpPoint",
    "tl_form",
    "tl_signature",
    "knot_signature",
    "signature_profile",
    "torus_signature_oracle",
    "signature_combination",
    "reduce_argument",
]


@dataclass(frozen=True)
class SignatureValue:
    signature: int
    nullity: int

    def __str__(self):
        return f"signature={self.signature} nullity={self.nullity}"


def _as_fraction(p) -> Fraction:
    return p if isinstance(p, Fraction) else Fraction(p)


def reduce_argument(p) -> Fraction:
    """Representative of ``p`` in ``[0, 1/2]`` under ``p ~ p + 1 ~ -p``."""
    p = _as_fraction(p) % 1
    return min(p, 1 - p)


def tl_form(V: IntMatrix, p) -> list[list[CycInt]]:
    """The Hermitian matrix ``(1 - w) V + (1 - w^-1) V^T`` over Z[zeta_N].

    ``p = k/N`` in lowest terms and ``w = zeta_N^k``; entries are
    :class:`CycInt` elements evaluated at ``zeta_N = e^{2 pi i/N}``.
    """
    p = _as_fraction(p) % 1
    N, k = p.denominator, p.numerator
    n = V.nrows
    H = []
    for i in range(n):
        row = []
        for j in range(n):
            a, b = V[i, j], V[j, i]
            c = [0] * N
            c[0] += a + b
            c[k] -= a
            c[(N - k) % N] -= b
            row.append(CycInt(N, c))
        H.append(row)
    return H


def _inertia(coeff_signs: list[int], n: int) -> SignatureValue:
    nullity = 0
    while nullity < len(coeff_signs) and coeff_signs[nullity] == 0:
        nullity += 1
    signs = [s for s in coeff_signs if s]
    pos = sum(1 for u, v in zip(signs, signs[1:]) if u != v)
    neg = n - nullity - pos
    return SignatureValue(pos - neg, nullity)


def tl_signature(V: IntMatrix, p) -> SignatureValue:
    """Signature and nullity of the Tristram-Levine form of ``V`` at ``p``."""
    p = _as_fraction(p) % 1
    n = V.nrows
    if n == 0:
        return SignatureValue(0, 0)
    if p == 0:
        return SignatureValue(0, n)
    return _tl_signature_cached(V, p)


@lru_cache(maxsize=8192)
def _tl_signature_cached(V: IntMatrix, p: Fraction) -> SignatureValue:
    n = V.nrows
    N = p.denominator
    if N == 2:
        # w = -1: the form is 2 (V + V^T), an integer matrix
        S = [[2 * (V[i, j] + V[j, i]) for j in range(n)] for i in range(n)]
        cp = berkowitz(S, 1, 0)
        return _inertia([(c > 0) - (c < 0) for c in cp], n)
    H = tl_form(V, p)
    cp = berkowitz(H, CycInt.const(N, 1), CycInt.const(N, 0))
    signs = [real_sign(c) for c in cp]
    return _inertia(signs, n)


@lru_cache(maxsize=8192)
def knot_signature(k: KnotExpr, p) -> SignatureValue:
    """Signature via additivity over sums and mirror antisymmetry."""
    p = _as_fraction(p)
    if isinstance(k, Unknot):
        return SignatureValue(0, 0)
    if isinstance(k, Mirror):
        s = knot_signature(k.inner, p)
        return SignatureValue(-s.signature, s.nullity)
    if isinstance(k, Sum):
        parts = [knot_signature(q, p) for q in k.parts]
        return SignatureValue(sum(s.signature for s in parts), sum(s.nullity for s in parts))
    if isinstance(k, Torus2q) and k.q < 0:
        s = knot_signature(Torus2q(-k.q), p)
        return SignatureValue(-s.signature, s.nullity)
    return tl_signature(seifert_matrix(k), p)


# ---------------------------------------------------------------------------
# torus knot closed form


def torus_signature_oracle(q: int, p) -> int:
    """Closed-form signature of T(2, q) at ``p`` (actual value at jump points).

    The Alexander roots sit at ``p = (2k - 1)/(2q)`` for ``k = 1..(q-1)/2`` in
    ``(0, 1/2)``; each one passed adds 2, and sitting on one adds 1.
    """
    if q < 0:
        return -torus_signature_oracle(-q, p)
    if q % 2 == 0 or q < 3:
        raise ValueError("q must be odd and at least 3")
    m = reduce_argument(p)
    if m == 0:
        return 0
    total = 0
    for k in range(1, (q - 1) // 2 + 1):
        jump = Fraction(2 * k - 1, 2 * q)
        if jump < m:
            total += 2
        elif jump == m:
            total += 1
    return total


# ---------------------------------------------------------------------------
# profiles


@dataclass(frozen=True)
class JumpPoint:
    """A singular argument in ``(0, 1/2)``.

    ``exact`` is set for roots of unity; otherwise ``lo < p < hi`` is a
    rational enclosure, and ``defining_poly`` / ``y_interval`` pin down
    ``y = 2 cos(2 pi p)`` as a root of an integer polynomial.
    """

    lo: Fraction
    hi: Fraction
    exact: Fraction | None = None
    defining_poly: IntPoly | None = None
    y_interval: tuple[Fraction, Fraction] | None = None

    @property
    def approx(self) -> float:
        return float(self.exact) if self.exact is not None else float((self.lo + self.hi) / 2)

    def render(self) -> str:
        if self.exact is not None:
            return f"{self.exact.numerator}/{self.exact.denominator}"
        # irrational: shortest rational within 1e-10 (marked approximate)
        c = (self.lo + self.hi) / 2
        eps = Fraction(1, 10**10)
        mid = simplest_rational_between(c - eps, c + eps)
        return f"~{mid.numerator}/{mid.denominator}"


@dataclass(frozen=True)
class ProfileInterval:
    lo: Fraction | JumpPoint
    hi: Fraction | JumpPoint
    signature: int
    sample: Fraction


@dataclass(frozen=True)
class SignatureProfile:
    intervals: tuple[ProfileInterval, ...]
    jumps: tuple[JumpPoint, ...]

    def values(self) -> list[int]:
        return [iv.signature for iv in self.intervals]

    def value_at(self, p) -> int:
        """Profile value at a nonsingular argument (``p`` reduced into ``[0, 1/2]``)."""
        m = reduce_argument(p)
        if m == 0:
            return 0
        for jump in self.jumps:
            if jump.exact == m or (jump.exact is None and jump.lo < m < jump.hi):
                raise ValueError("argument is (or may be) a jump point")
        for iv in self.intervals:
            lo = _upper(iv.lo)
            hi = _lower(iv.hi)
            if lo <= m <= hi:
                return iv.signature
        raise ValueError("argument falls inside a jump enclosure")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p_lo", "p_hi", "signature"])
        for iv in self.intervals:
            w.writerow([_render(iv.lo), _render(iv.hi), iv.signature])
        return buf.getvalue()


def _render(x) -> str:
    if isinstance(x, JumpPoint):
        return x.render()
    return f"{x.numerator}/{x.denominator}"


def _upper(x) -> Fraction:
    return x.exact if isinstance(x, JumpPoint) and x.exact is not None else (x.hi if isinstance(x, JumpPoint) else x)


def _lower(x) -> Fraction:
    return x.exact if isinstance(x, JumpPoint) and x.exact is not None else (x.lo if isinstance(x, JumpPoint) else x)


def jump_points(V: IntMatrix) -> list[JumpPoint]:
    """Arguments in ``(0, 1/2)`` where the Tristram-Levine form is singular.

    These are the unit-circle roots of the Alexander polynomial.  Roots of
    unity are found exactly from the cyclotomic factors; the remaining ones
    are isolated with Sturm sequences in ``y = t + 1/t``.
    """
    if V.nrows == 0:
        return []
    delta = alexander_from_matrix(V).poly
    found, rest = cyclotomic_factors(delta)
    jumps: list[JumpPoint] = []
    for m in sorted(found):
        for k in range(1, m):
            if math.gcd(k, m) == 1 and 2 * k < m:
                x = Fraction(k, m)
                jumps.append(JumpPoint(x, x, exact=x))
    if rest.degree > 0:
        g = compact_form(rest)
        for a, b in isolate_real_roots(g, Fraction(-2), Fraction(2)):
            if a != b:
                a, b = refine_root(g, a, b, Fraction(1, 1 << 64))
            # p = acos(y/2)/(2 pi) is decreasing in y
            plo, phi = acos_over_2pi_bounds(a, b)
            jumps.append(JumpPoint(plo, phi, exact=None, defining_poly=g, y_interval=(a, b)))
    jumps.sort(key=lambda j: j.lo)
    return jumps


def signature_profile(V: IntMatrix) -> SignatureProfile:
    """Piecewise-constant signature function on ``(0, 1/2]``."""
    if V.nrows == 0:
        return SignatureProfile((), ())
    jumps = jump_points(V)
    bounds: list = [Fraction(0)] + jumps + [Fraction(1, 2)]
    intervals = []
    for left, right in zip(bounds, bounds[1:]):
        lo = _upper(left)
        hi = _lower(right)
        if right == Fraction(1, 2):
            sample = Fraction(1, 2)
        else:
            sample = simplest_rational_between(lo, hi)
        value = tl_signature(V, sample)
        if value.nullity:
            raise CertificationError("profile sample point landed on a singular argument")
        intervals.append(ProfileInterval(left, right, value.signature, sample))
    return SignatureProfile(tuple(intervals), tuple(jumps))


def knot_profile(k: KnotExpr) -> SignatureProfile:
    return signature_profile(seifert_matrix(k))


# ---------------------------------------------------------------------------


def banded_meridian_multiplier() -> int:
    """``r`` with ``m_2 = r m_1`` in the double cover of the banded knot."""
    return cover_homology(BANDED_FORM).relation_multiplier(1, 0)


def signature_combination(a: int, C: KnotExpr) -> int:
    """``sigma_{a/5}(C) + sigma_{ra/5}(-C)`` where ``r`` is the band meridian multiplier."""
    if a % 5 == 0:
        raise ValueError("a must be nonzero mod 5")
    r = banded_meridian_multiplier()
    s1 = knot_signature(C, reduce_argument(Fraction(a, 5)))
    s2 = knot_signature(mirror(C), reduce_argument(Fraction(r * a, 5)))
    return s1.signature + s2.signature
