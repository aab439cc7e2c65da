"""High-precision helpers on private mpmath contexts (no shared global state)."""
from __future__ import annotations

from fractions import Fraction

from mpmath.ctx_mp import MPContext


def _ctx(prec: int) -> MPContext:
    ctx = MPContext()
    ctx.prec = prec
    return ctx


def _to_fraction(ctx: MPContext, x) -> Fraction:
    m, e = ctx.mpf(x).man_exp
    return Fraction(int(m)) * (Fraction(2) ** e)


def acos_over_2pi_bounds(ylo: Fraction, yhi: Fraction, prec: int = 256) -> tuple[Fraction, Fraction]:
    """Rational ``(lo, hi)`` with ``lo < acos(y/2)/(2 pi) < hi`` for all ``y`` in ``[ylo, yhi]``.

    The margin is far larger than the working precision error, and both
    endpoints must lie strictly inside (-2, 2).
    """
    if not -2 < ylo <= yhi < 2:
        raise ValueError("y must lie in (-2, 2)")
    ctx = _ctx(prec)
    margin = Fraction(1, 1 << (prec // 2))

    def p_of(y: Fraction):
        return ctx.acos(ctx.mpf(y.numerator) / y.denominator / 2) / (2 * ctx.pi)

    lo = _to_fraction(ctx, p_of(yhi)) - margin
    hi = _to_fraction(ctx, p_of(ylo)) + margin
    return lo, hi
