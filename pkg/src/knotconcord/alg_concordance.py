"""Algebraic sliceness: Fox-Milnor test, bounded metabolizer search, verdicts."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .exact_linalg import IntMatrix, block_diag, smith_normal_form
from .polynomials import (
    DegreeCapExceeded,
    IntPoly,
    factor_squarefree,
    is_perfect_square,
    quadratic_discriminant,
    squarefree_decomposition,
)
from .seifert import KnotExpr, LaurentPoly, alexander, alexander_from_matrix, seifert_matrix
from .signatures import knot_signature, signature_profile, tl_signature

log = logging.getLogger(__name__)

DEFAULT_BOUND = 3


class InvalidAlexanderError(ValueError):
    pass


class SearchBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class FoxMilnorResult:
    passed: bool
    reason: str
    f: IntPoly | None = None
    obstruction: IntPoly | None = None  # symmetric irreducible factor of odd multiplicity

    def __bool__(self):
        return self.passed


def _is_self_reciprocal(p: IntPoly) -> bool:
    r = p.reciprocal()
    return r == p or r == -p


def fox_milnor(delta: LaurentPoly | IntPoly, degree_cap: int = 12) -> FoxMilnorResult:
    """Does ``delta = +-t^k f(t) f(1/t)`` for some integer polynomial ``f``?

    Equivalent to: every irreducible factor equal (up to sign) to its own
    reciprocal occurs with even multiplicity.  Only the odd-multiplicity part
    is factored, by Kronecker's method, so the degree cap applies to it.
    """
    poly = delta.poly if isinstance(delta, LaurentPoly) else delta
    poly, _ = poly.shift_down()
    if poly.is_zero() or abs(poly(1)) != 1:
        raise InvalidAlexanderError(f"not an Alexander polynomial: value at 1 is {poly(1) if not poly.is_zero() else 0}")
    if poly.degree == 0:
        return FoxMilnorResult(True, "constant polynomial", f=IntPoly([1]))
    f = IntPoly([1])
    odd = IntPoly([1])
    for s, e in squarefree_decomposition(poly):
        f = f * s ** (e // 2)
        if e % 2:
            odd = odd * s
    if odd.degree <= 0:
        return FoxMilnorResult(True, "every factor has even multiplicity", f=f)
    if odd.degree == 2:
        disc = quadratic_discriminant(odd)
        if not is_perfect_square(disc):
            return FoxMilnorResult(
                False,
                f"odd-multiplicity part {odd} is irreducible: discriminant {disc} is not a perfect square",
                obstruction=odd,
            )
    factors = factor_squarefree(odd, degree_cap)
    pending = list(factors)
    while pending:
        p = pending.pop(0)
        if _is_self_reciprocal(p):
            return FoxMilnorResult(False, f"symmetric irreducible factor {p} occurs to an odd power", obstruction=p)
        mate = p.reciprocal().primitive()
        if mate not in pending:
            # cannot happen for a genuinely symmetric input
            return FoxMilnorResult(False, f"factor {p} has no reciprocal partner", obstruction=p)
        pending.remove(mate)
        f = f * p
    # confirm the certificate
    ff = f * f.reciprocal()
    if ff.primitive() != poly.primitive():
        raise AssertionError("Fox-Milnor certificate failed to reproduce the polynomial")
    return FoxMilnorResult(True, "odd part splits as g(t) g(1/t)", f=f)


# ---------------------------------------------------------------------------
# metabolizers


@dataclass(frozen=True)
class MetabolizerWitness:
    basis: tuple[tuple[int, ...], ...]
    bound: int

    def verify(self, V: IntMatrix) -> bool:
        n = V.nrows
        if len(self.basis) * 2 != n:
            return False
        for x in self.basis:
            for y in self.basis:
                if _form(V, x, y) != 0:
                    return False
        if not self.basis:
            return True
        d = smith_normal_form(IntMatrix(self.basis)).diagonal
        return all(x == 1 for x in d)


def _form(V: IntMatrix, x: Sequence[int], y: Sequence[int]) -> int:
    s = 0
    for i, a in enumerate(x):
        if a:
            row = V.rows[i]
            for j, b in enumerate(y):
                if b:
                    s += a * row[j] * b
    return s


def _obstructed(V: IntMatrix) -> str | None:
    """A quick reason no metabolizer can exist, if one is found."""
    s = tl_signature(V, Fraction(1, 2))
    if s.signature != 0:
        return f"sigma_1/2 = {s.signature}"
    try:
        fm = fox_milnor(alexander_from_matrix(V))
    except (DegreeCapExceeded, InvalidAlexanderError):
        return None
    if not fm.passed:
        return f"Fox-Milnor: {fm.reason}"
    return None


def find_metabolizer(
    V: IntMatrix, bound: int = DEFAULT_BOUND, prefilter: bool = True, max_nodes: int | None = None
) -> MetabolizerWitness | None:
    """Search rank-g primitive sublattices in Hermite normal form with entries in [-bound, bound].

    Rows are chosen in lexicographic order (pivot column, pivot, tail), so the
    first witness found is canonical.  ``None`` only certifies absence within
    the bound, unless ``prefilter`` found a signature or Fox-Milnor obstruction.
    Exceeding ``max_nodes`` candidate rows raises :class:`SearchBudgetExceeded`.
    """
    n = V.nrows
    if n % 2:
        raise ValueError("Seifert matrix must have even size")
    g = n // 2
    if g == 0:
        return MetabolizerWitness((), bound)
    if prefilter and _obstructed(V) is not None:
        return None
    tail_values = range(-bound, bound + 1)
    visited = 0

    def rows_after(prev_pivot: int, chosen: list[tuple[int, ...]], pivots: list[int]):
        remaining = g - len(chosen)
        for c in range(prev_pivot + 1, n - remaining + 1):
            for pv in range(1, bound + 1):
                # HNF: entries above the new pivot reduced into [0, pv)
                if any(not (0 <= row[c] < pv) for row in chosen):
                    continue
                for tail in product(tail_values, repeat=n - c - 1):
                    yield c, (0,) * c + (pv,) + tail

    def search(chosen: list[tuple[int, ...]], pivots: list[int]):
        nonlocal visited
        if len(chosen) == g:
            d = smith_normal_form(IntMatrix(chosen)).diagonal
            if all(x == 1 for x in d):
                return list(chosen)
            return None
        prev = pivots[-1] if pivots else -1
        for c, y in rows_after(prev, chosen, pivots):
            visited += 1
            if max_nodes is not None and visited > max_nodes:
                raise SearchBudgetExceeded(f"metabolizer search exceeded {max_nodes} candidates")
            if _form(V, y, y) != 0:
                continue
            if any(_form(V, x, y) != 0 or _form(V, y, x) != 0 for x in chosen):
                continue
            found = search(chosen + [y], pivots + [c])
            if found is not None:
                return found
        return None

    basis = search([], [])
    if basis is None:
        return None
    w = MetabolizerWitness(tuple(basis), bound)
    assert w.verify(V)
    return w


@dataclass(frozen=True)
class OrderCheck:
    status: str  # "yes" | "inconclusive"
    witness: MetabolizerWitness | None = None
    note: str = ""


def algebraic_order_at_most_two(V: IntMatrix, bound: int = DEFAULT_BOUND) -> OrderCheck:
    """Is ``V (+) V`` metabolic (found within the bound)?"""
    VV = block_diag([V, V])
    w = find_metabolizer(VV, bound)
    if w is not None:
        return OrderCheck("yes", w)
    reason = _obstructed(VV)
    if reason:
        return OrderCheck("inconclusive", None, f"V+V obstructed ({reason}): infinite algebraic order")
    return OrderCheck("inconclusive", None, f"no witness with entries bounded by {bound}")


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class SliceVerdict:
    tag: str  # "AlgebraicallySlice" | "NotSlice" | "Inconclusive"
    witness: MetabolizerWitness | None = None
    obstruction: dict = field(default_factory=dict)
    bound: int | None = None

    def to_dict(self) -> dict:
        d: dict = {"verdict": self.tag}
        if self.witness is not None:
            d["witness"] = [list(v) for v in self.witness.basis]
        if self.obstruction:
            d["obstruction"] = self.obstruction
        if self.bound is not None:
            d["bound"] = self.bound
        return d


_SAMPLE_POINTS = (
    Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(1, 5), Fraction(2, 5),
    Fraction(1, 6), Fraction(1, 7), Fraction(2, 7), Fraction(3, 7),
)


def slice_verdict(k: KnotExpr, bound: int = DEFAULT_BOUND, max_nodes: int | None = 2_000_000) -> SliceVerdict:
    """Strongest certificate we can find: obstruction, witness, or neither."""
    V = seifert_matrix(k)
    if V.nrows == 0:
        return SliceVerdict("AlgebraicallySlice", MetabolizerWitness((), bound), bound=bound)
    delta = alexander(k)
    try:
        fm = fox_milnor(delta)
    except DegreeCapExceeded:
        fm = None
        log.info("Fox-Milnor skipped: degree cap")
    if fm is not None and not fm.passed:
        return SliceVerdict(
            "NotSlice", obstruction={"type": "FoxMilnor", "alexander": str(delta), "reason": fm.reason}
        )
    points = list(_SAMPLE_POINTS)
    if V.nrows <= 8:
        points += [iv.sample for iv in signature_profile(V).intervals]
    for p in points:
        s = knot_signature(k, p)
        if s.nullity == 0 and s.signature != 0:
            return SliceVerdict(
                "NotSlice",
                obstruction={"type": "SignatureNonzero", "p": f"{p.numerator}/{p.denominator}", "signature": s.signature},
            )
    try:
        w = find_metabolizer(V, bound, prefilter=False, max_nodes=max_nodes)
    except SearchBudgetExceeded as exc:
        return SliceVerdict("Inconclusive", obstruction={"note": str(exc)}, bound=bound)
    if w is not None:
        return SliceVerdict("AlgebraicallySlice", w, bound=bound)
    return SliceVerdict("Inconclusive", bound=bound)
