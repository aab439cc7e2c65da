"""Formal Casson-Gordon values for banded knots and the non-concordance engine.

The invariant of the figure-eight-like orbit knot is never evaluated; it is
carried as an opaque symbol (:class:`BaseTermId`).  Satellite corrections are
exact: tying ``C`` into the band through meridian ``m`` shifts the value by
``2 sigma_{chi(m)/q}(C)``.  An obstruction is certified when, after using the
relations forced by a known slice knot, the symbols cancel and a nonzero
rational number remains on every metabolizer.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .branched_cover import (
    Character,
    LinkingForm,
    characters,
    characters_vanishing_on,
    cover_homology,
    linking_form,
    summand_meridian_basis,
)
from .exact_linalg import block_diag
from .seifert import (
    FIGURE_EIGHT,
    T27,
    GenusOneBanded,
    KnotExpr,
    Sum,
    Unknot,
    build_K,
    describe,
    dumps,
    iterated_sum,
    seifert_matrix,
)
from .signatures import knot_signature, reduce_argument

PROVENANCE = {"geometric-step": "paper-asserted"}


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, order=True)
class BaseTermId:
    orbit: str
    q: int
    a: int  # canonical class representative in 1..q//2

    def __post_init__(self):
        a = self.a % self.q
        if a == 0:
            raise ValueError("base terms need a nontrivial character")
        object.__setattr__(self, "a", min(a, self.q - a))

    def __str__(self):
        return f"cg[{self.orbit};q={self.q};a=+-{self.a}]"


def orbit_id(k: GenusOneBanded) -> str:
    """Identifier of the banded knot with both bands emptied."""
    orbit = GenusOneBanded(Unknot(), Unknot())
    return "figure8" if orbit == FIGURE_EIGHT else dumps(orbit)


class FormalCG:
    """``rational + sum(coeff * base_term)`` with exact rational coefficients."""

    __slots__ = ("rational", "terms")

    def __init__(self, rational=0, terms: dict | Iterable = ()):
        self.rational = Fraction(rational)
        items = terms.items() if isinstance(terms, dict) else terms
        clean: dict[BaseTermId, Fraction] = {}
        for b, c in items:
            clean[b] = clean.get(b, Fraction(0)) + Fraction(c)
        self.terms = {b: c for b, c in sorted(clean.items()) if c != 0}

    @classmethod
    def base(cls, b: BaseTermId) -> "FormalCG":
        return cls(0, {b: 1})

    def __add__(self, other: "FormalCG") -> "FormalCG":
        return FormalCG(self.rational + other.rational, list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> "FormalCG":
        return FormalCG(-self.rational, {b: -c for b, c in self.terms.items()})

    def __sub__(self, other: "FormalCG") -> "FormalCG":
        return self + (-other)

    def scale(self, c) -> "FormalCG":
        c = Fraction(c)
        return FormalCG(self.rational * c, {b: v * c for b, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, FormalCG) and self.rational == other.rational and self.terms == other.terms

    def __hash__(self):
        return hash((self.rational, tuple(self.terms.items())))

    def is_zero(self) -> bool:
        return self.rational == 0 and not self.terms

    @property
    def is_rational(self) -> bool:
        return not self.terms

    def __repr__(self):
        return f"FormalCG({self})"

    def __str__(self):
        parts = []
        for b, c in self.terms.items():
            coef = "" if c == 1 else ("-" if c == -1 else f"{_fmt(c)}*")
            parts.append(f"{coef}{b}")
        if self.rational or not parts:
            parts.append(_fmt(self.rational))
        return " + ".join(parts).replace("+ -", "- ")

    def to_dict(self) -> dict:
        return {"rational": _frac(self.rational), "base_terms": {str(b): _frac(c) for b, c in self.terms.items()}}


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else _frac(x)


# ---------------------------------------------------------------------------
# values


def _require_banded(k) -> GenusOneBanded:
    if not isinstance(k, GenusOneBanded):
        raise TypeError(f"Casson-Gordon values are implemented for banded knots only, got {describe(k)}")
    return k


def band_character_values(k: GenusOneBanded, a: int) -> tuple[int, int, int]:
    """``(q, chi(m_1), chi(m_2))`` for the character with ``chi(m_1) = a``.

    The second value is read off the character solver for the cover, not
    assumed.
    """
    h = cover_homology(seifert_matrix(k))
    q = h.order
    a %= q
    for ch in characters(h, q):
        c1, c2 = ch.values
        for s in (1, -1):
            if (s * c1 - a) % q == 0:
                return q, a, (s * c2) % q
    raise ValueError(f"no character takes value {a} on the first meridian")


def cg_value(k: GenusOneBanded, a: int) -> FormalCG:
    """Value for the character taking ``a`` on the first band meridian."""
    k = _require_banded(k)
    h = cover_homology(seifert_matrix(k))
    q = h.order
    if a % q == 0:
        raise ValueError(f"character value must be nonzero mod {q}")
    q, a1, a2 = band_character_values(k, a)
    corr = 2 * knot_signature(k.left, reduce_argument(Fraction(a1, q))).signature
    corr += 2 * knot_signature(k.right, reduce_argument(Fraction(a2, q))).signature
    return FormalCG(corr, {BaseTermId(orbit_id(k), q, a1): 1})


def cg_sum(parts: Iterable[tuple[GenusOneBanded, int]]) -> FormalCG:
    total = FormalCG()
    for k, a in parts:
        total = total + cg_value(k, a)
    return total


# ---------------------------------------------------------------------------
# metabolizers of the linking form


@dataclass(frozen=True)
class Metabolizer:
    elements: frozenset
    generators: tuple[tuple[int, ...], ...]

    @property
    def is_cyclic(self) -> bool:
        return len(self.generators) == 1


def _closure(form: LinkingForm, gens: Sequence[tuple[int, ...]]) -> frozenset:
    zero = tuple(0 for _ in form.orders)
    sub = {zero}
    for g in gens:
        frontier = list(sub)
        while frontier:
            nxt = []
            for x in frontier:
                y = form.normalize(tuple(a + b for a, b in zip(x, g)))
                if y not in sub:
                    sub.add(y)
                    nxt.append(y)
            frontier = nxt
    return frozenset(sub)


def metabolizers(form: LinkingForm) -> list[Metabolizer]:
    """Subgroups ``M`` with ``|M|^2 = |H|`` on which the linking form vanishes."""
    total = form.order
    if total == 1:
        return [Metabolizer(frozenset({()}), ())]
    iso = [v for v in form.elements() if any(v) and form.self_linking(v) == 0]
    found: dict[frozenset, tuple] = {}
    visited: set[frozenset] = set()

    def grow(sub: frozenset, gens: tuple):
        if sub in visited:
            return
        visited.add(sub)
        if len(sub) ** 2 == total:
            found.setdefault(sub, gens)
            return
        if len(sub) ** 2 > total:
            return
        for v in iso:
            if v in sub:
                continue
            if all(form(v, g) == 0 for g in gens):
                grow(_closure(form, gens + (v,)), gens + (v,))

    grow(_closure(form, ()), ())
    out = [Metabolizer(sub, gens) for sub, gens in found.items()]
    out.sort(key=lambda m: sorted(m.elements))
    return out


def characters_killing(form: LinkingForm, m: Metabolizer, q: int) -> list[Character]:
    chars = characters_vanishing_on(form, tuple(0 for _ in form.orders), q)
    return [c for c in chars if all(c(g) == 0 for g in m.generators)]


# ---------------------------------------------------------------------------
# relations from slice knots


def _banded_summands(k: KnotExpr) -> list[GenusOneBanded]:
    if isinstance(k, Unknot):
        return []
    if isinstance(k, GenusOneBanded):
        return [k]
    if isinstance(k, Sum):
        out = []
        for p in k.parts:
            out.extend(_banded_summands(p))
        return out
    raise TypeError(f"expected a connected sum of banded knots, got {describe(k)}")


def _meridian_form(summands: Sequence[GenusOneBanded]) -> LinkingForm:
    V = block_diag([seifert_matrix(s) for s in summands])
    basis = summand_meridian_basis([2] * len(summands))
    return linking_form(V, basis)


def _sweep(summands: Sequence[GenusOneBanded]):
    """Per metabolizer: ``[(character, value | None)]`` with ``None`` for skipped characters."""
    form = _meridian_form(summands)
    q = _common_prime(summands)
    rows = []
    for m in metabolizers(form):
        entries = []
        for ch in characters_killing(form, m, q):
            if ch.is_trivial():
                continue
            if any(v == 0 for v in ch.values):
                entries.append((ch, None))
                continue
            entries.append((ch, cg_sum(zip(summands, ch.values))))
        rows.append((m, entries))
    return form, rows


def _common_prime(summands: Sequence[GenusOneBanded]) -> int:
    orders = {cover_homology(seifert_matrix(s)).order for s in summands}
    if len(orders) != 1:
        raise ValueError("summands have covers of different orders")
    q = orders.pop()
    if q < 2 or any(q % d == 0 for d in range(2, q)):
        raise ValueError(f"cover order {q} is not prime")
    return q


def _normalize_relation(r: FormalCG) -> FormalCG:
    if r.terms:
        lead = next(iter(r.terms.values()))
        return r.scale(1 / lead)
    return r.scale(1 / r.rational) if r.rational else r


def normalization_relations(slice_example: KnotExpr) -> list[FormalCG]:
    """Relations ``R = 0`` that hold whichever metabolizer the slice disk provides.

    A slice knot has some metabolizer on which every character's value
    vanishes; only relations produced by every metabolizer are therefore safe.
    """
    summands = _banded_summands(slice_example)
    if not summands:
        return []
    _, rows = _sweep(summands)
    per_metabolizer = []
    for _, entries in rows:
        rels = {_normalize_relation(v) for _, v in entries if v is not None and not v.is_zero()}
        per_metabolizer.append(rels)
    if not per_metabolizer:
        return []
    common = set.intersection(*per_metabolizer)
    return sorted(common, key=str)


def reduce_with(value: FormalCG, relations: Sequence[FormalCG]) -> FormalCG:
    """Canonical remainder of ``value`` modulo the span of ``relations``."""
    basis: list[tuple[BaseTermId, FormalCG]] = []
    for r in relations:
        r = _eliminate(r, basis)
        if r.terms:
            pivot = next(iter(r.terms))
            r = r.scale(1 / r.terms[pivot])
            basis = [(p, _eliminate(b, [(pivot, r)])) for p, b in basis]
            basis.append((pivot, r))
        elif r.rational:
            raise ValueError(f"inconsistent relation {r} = 0")
    return _eliminate(value, basis)


def _eliminate(v: FormalCG, basis: Sequence[tuple[BaseTermId, FormalCG]]) -> FormalCG:
    for pivot, row in basis:
        c = v.terms.get(pivot)
        if c:
            v = v - row.scale(c)
    return v


# ---------------------------------------------------------------------------
# obstruction reports


@dataclass(frozen=True)
class CharacterEntry:
    character: tuple[int, ...]
    value: FormalCG | None
    reduced: FormalCG | None

    @property
    def certifies(self) -> bool:
        return self.reduced is not None and self.reduced.is_rational and self.reduced.rational != 0


@dataclass(frozen=True)
class MetabolizerEntry:
    generators: tuple[tuple[int, ...], ...]
    characters: tuple[CharacterEntry, ...]

    @property
    def certified(self) -> bool:
        return any(c.certifies for c in self.characters)


@dataclass(frozen=True)
class ObstructionReport:
    summands: tuple[str, ...]
    reduced_summands: tuple[str, ...]
    group: tuple[int, ...]
    linking_matrix: tuple[tuple[Fraction, ...], ...]
    metabolizers: tuple[MetabolizerEntry, ...]
    relations: tuple[FormalCG, ...]
    verdict: str
    reduction_chain: tuple[str, ...] = ()
    label: dict = field(default_factory=dict)

    def reduced_values(self) -> list[list[Fraction | None]]:
        out = []
        for m in self.metabolizers:
            out.append([c.reduced.rational if c.reduced is not None and c.reduced.is_rational else None for c in m.characters])
        return out

    def to_dict(self) -> dict:
        return {
            **self.label,
            "summands": list(self.summands),
            "reduced_summands": list(self.reduced_summands),
            "reduction_chain": list(self.reduction_chain),
            "group": [f"Z/{d}" for d in self.group],
            "linking_form": [[_frac(x) for x in row] for row in self.linking_matrix],
            "normalization_relations": [f"{r} = 0" for r in self.relations],
            "metabolizers": [
                {
                    "generators": [list(g) for g in m.generators],
                    "certified": m.certified,
                    "characters": [
                        {
                            "values": list(c.character),
                            "skipped": c.value is None,
                            **({"value": c.value.to_dict(), "reduced": c.reduced.to_dict()} if c.value is not None else {}),
                        }
                        for c in m.characters
                    ],
                }
                for m in self.metabolizers
            ],
            "verdict": self.verdict,
            "provenance": dict(PROVENANCE),
        }


def _cancel_figure_eights(summands: Sequence[GenusOneBanded]) -> tuple[list[GenusOneBanded], list[str]]:
    """Drop figure-eight summands in pairs.

    When nothing else is present one pair is kept, so that the report still
    exhibits the (vanishing) values of a slice knot.
    """
    n8 = sum(1 for s in summands if s == FIGURE_EIGHT)
    keep = n8 % 2
    if n8 == len(summands) and n8 >= 2:
        keep = 2 + n8 % 2
    dropped = n8 - keep
    steps = []
    if dropped:
        steps.append(f"cancel {dropped} figure-eight summands in pairs (order 2 in concordance; paper-asserted)")
    out, skip = [], dropped
    for s in summands:  # earliest occurrences go first; order of the rest is kept
        if s == FIGURE_EIGHT and skip:
            skip -= 1
            continue
        out.append(s)
    return out, steps


def obstruct_sum(summands: Sequence[GenusOneBanded], slice_example: KnotExpr | None = None) -> ObstructionReport:
    """Try to certify that the connected sum of ``summands`` is not slice."""
    if slice_example is None:
        slice_example = Sum((FIGURE_EIGHT, FIGURE_EIGHT))
    relations = normalization_relations(slice_example)
    reduced, steps = _cancel_figure_eights(summands)
    chain = ["slice(sum) => slice(reduced sum)" if steps else "no reduction"] + steps
    if not reduced:
        return ObstructionReport(
            tuple(describe(s) for s in summands), (), (), (), (), tuple(relations), "Inconclusive", tuple(chain)
        )
    form, rows = _sweep(reduced)
    entries = []
    for m, chars in rows:
        ce = []
        for ch, v in chars:
            ce.append(CharacterEntry(ch.values, v, None if v is None else reduce_with(v, relations)))
        entries.append(MetabolizerEntry(m.generators, tuple(ce)))
    certified = bool(entries) and all(e.certified for e in entries)
    return ObstructionReport(
        summands=tuple(describe(s) for s in summands),
        reduced_summands=tuple(describe(s) for s in reduced),
        group=form.orders,
        linking_matrix=form.matrix,
        metabolizers=tuple(entries),
        relations=tuple(relations),
        verdict="NotSliceCertified" if certified else "Inconclusive",
        reduction_chain=tuple(chain),
    )


def family_summands(i: int, band_knot: KnotExpr = T27) -> list[GenusOneBanded]:
    """``J_i = K_0 # K_i`` as a list of banded summands."""
    return [FIGURE_EIGHT, build_K(iterated_sum(band_knot, i))]


def obstruction_report(i: int, j: int, band_knot: KnotExpr = T27) -> ObstructionReport:
    """Is ``J_i # J_j`` (hence ``J_i`` concordant to ``J_j``) obstructed?"""
    rep = obstruct_sum(family_summands(i, band_knot) + family_summands(j, band_knot))
    return ObstructionReport(**{**rep.__dict__, "label": {"i": i, "j": j}})


# ---------------------------------------------------------------------------
# survey


@dataclass(frozen=True)
class SurveyTable:
    lo: int
    hi: int
    verdicts: dict  # (i, j) with i <= j -> verdict

    def get(self, i: int, j: int) -> str:
        return self.verdicts[(min(i, j), max(i, j))]

    def off_diagonal(self) -> list[tuple[int, int, str]]:
        return [(i, j, v) for (i, j), v in sorted(self.verdicts.items()) if i < j]

    def to_dict(self) -> dict:
        return {
            "range": [self.lo, self.hi],
            "pairs": [{"i": i, "j": j, "verdict": v} for (i, j), v in sorted(self.verdicts.items())],
        }

    def to_text(self) -> str:
        idx = list(range(self.lo, self.hi + 1))
        sym = {"NotSliceCertified": "X", "Inconclusive": "."}
        width = max(len(str(x)) for x in idx) + 1
        lines = [" " * width + "".join(str(j).rjust(width) for j in idx)]
        for i in idx:
            lines.append(str(i).rjust(width) + "".join(sym[self.get(i, j)].rjust(width) for j in idx))
        lines.append("X = NotSliceCertified, . = Inconclusive")
        return "\n".join(lines)


def _verdict(pair: tuple[int, int]) -> str:
    return obstruction_report(*pair).verdict


def pairwise_survey(lo: int, hi: int, jobs: int = 1) -> SurveyTable:
    if lo > hi:
        raise ValueError("empty range")
    pairs = [(i, j) for i in range(lo, hi + 1) for j in range(i, hi + 1)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_verdict, pairs))
    else:
        results = [_verdict(p) for p in pairs]
    return SurveyTable(lo, hi, dict(zip(pairs, results)))
