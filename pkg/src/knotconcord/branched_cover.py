"""Homology of the double branched cover, its linking form, and characters.

``H_1`` is presented by ``S = V + V^T`` on the meridian generators
``e_0, ..., e_{n-1}``.  The Smith normal form ``U S W = D`` identifies the
group with ``(+) Z/d_i`` through ``x -> U x``, which is how group elements are
tracked throughout.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import product
from math import gcd
from typing import Iterable, Sequence

from .exact_linalg import IntMatrix, inverse_rational, smith_normal_form, solve_mod, span_mod, unimodular_inverse


class SingularFormError(ZeroDivisionError):
    pass


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class CoverHomology:
    relations: IntMatrix
    factors: tuple[int, ...]  # invariant factors > 1
    U: IntMatrix
    W: IntMatrix
    positions: tuple[int, ...]  # SNF rows carrying the nontrivial factors

    @property
    def order(self) -> int:
        return reduce(lambda a, b: a * b, self.factors, 1)

    @property
    def exponent(self) -> int:
        return reduce(_lcm, self.factors, 1)

    @property
    def rank(self) -> int:
        return self.relations.nrows

    def coords(self, x: Sequence[int]) -> tuple[int, ...]:
        """SNF coordinates of the class of the integer vector ``x``."""
        y = self.U.apply(x)
        return tuple(y[i] % d for i, d in zip(self.positions, self.factors))

    def meridian(self, k: int) -> tuple[int, ...]:
        """SNF coordinates of the ``k``-th original generator."""
        e = [0] * self.rank
        e[k] = 1
        return self.coords(e)

    def generator_map(self) -> list[tuple[int, ...]]:
        return [self.meridian(k) for k in range(self.rank)]

    def representative(self, i: int) -> tuple[int, ...]:
        """An integer vector whose class is the ``i``-th SNF generator."""
        Uinv = _uinv(self.U)
        return Uinv.col(self.positions[i])

    def element_order(self, c: Sequence[int]) -> int:
        return reduce(_lcm, (d // gcd(x, d) for x, d in zip(c, self.factors)), 1)

    def relation_multiplier(self, target: int, base: int) -> int:
        """``r`` with ``e_target = r e_base`` in ``H_1``; requires ``e_base`` to generate."""
        t = self.meridian(target)
        b = self.meridian(base)
        for r in range(max(self.exponent, 1)):
            if all((r * x - y) % d == 0 for x, y, d in zip(b, t, self.factors)):
                return r
        raise ValueError(f"generator {target} is not a multiple of generator {base}")

    def elements(self) -> Iterable[tuple[int, ...]]:
        return product(*(range(d) for d in self.factors))

    def describe(self) -> str:
        if not self.factors:
            return "0"
        return " + ".join(f"Z/{d}" for d in self.factors)


@lru_cache(maxsize=256)
def _uinv(U: IntMatrix) -> IntMatrix:
    return unimodular_inverse(U)


@lru_cache(maxsize=1024)
def cover_homology(V: IntMatrix) -> CoverHomology:
    S = V + V.T
    snf = smith_normal_form(S)
    d = snf.diagonal
    if any(x == 0 for x in d):
        raise SingularFormError("V + V^T is singular: the cover has infinite homology")
    positions = tuple(i for i, x in enumerate(d) if x > 1)
    return CoverHomology(S, tuple(d[i] for i in positions), snf.U, snf.W, positions)


# ---------------------------------------------------------------------------
# linking forms


@dataclass(frozen=True)
class LinkingForm:
    """Linking pairing on a basis of ``H_1`` with ``orders[i]`` the order of ``basis`` i.

    ``matrix[i][j]`` is ``lk(g_i, g_j)`` in ``[0, 1)``.
    """

    orders: tuple[int, ...]
    matrix: tuple[tuple[Fraction, ...], ...]
    labels: tuple[str, ...]

    def __call__(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        s = Fraction(0)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    if b:
                        s += a * b * self.matrix[i][j]
        return s % 1

    def self_linking(self, x: Sequence[int]) -> Fraction:
        return self(x, x)

    def elements(self) -> Iterable[tuple[int, ...]]:
        return product(*(range(o) for o in self.orders))

    @property
    def order(self) -> int:
        return reduce(lambda a, b: a * b, self.orders, 1)

    def normalize(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(x % o for x, o in zip(v, self.orders))

    def is_nonsingular(self) -> bool:
        """Adjoint map ``x -> lk(x, -)`` is injective."""
        for x in self.elements():
            if any(x) and all(self(x, e) == 0 for e in _unit_vectors(len(self.orders))):
                return False
        return True


def _unit_vectors(n: int):
    for i in range(n):
        e = [0] * n
        e[i] = 1
        yield tuple(e)


def _pairing(Sinv, x, y) -> Fraction:
    s = Fraction(0)
    for i, a in enumerate(x):
        if a:
            for j, b in enumerate(y):
                if b:
                    s += a * Sinv[i][j] * b
    return s % 1


def linking_form(V: IntMatrix, basis: Sequence[int] | None = None) -> LinkingForm:
    """Linking form ``lk(x, y) = x^T (V + V^T)^{-1} y mod 1``.

    With ``basis=None`` the form is expressed on the SNF generators; otherwise
    on the listed original generators, which must form a basis of ``H_1``.
    """
    S = V + V.T
    if S.nrows == 0:
        return LinkingForm((), (), ())
    try:
        Sinv = inverse_rational(S)
    except ZeroDivisionError as exc:
        raise SingularFormError("V + V^T is singular") from exc
    h = cover_homology(V)
    if basis is None:
        reps = [h.representative(i) for i in range(len(h.factors))]
        orders = h.factors
        labels = tuple(f"g{i}" for i in range(len(orders)))
    else:
        reps = []
        for k in basis:
            e = [0] * S.nrows
            e[k] = 1
            reps.append(tuple(e))
        orders = tuple(h.element_order(h.meridian(k)) for k in basis)
        if not _is_basis(h, [h.meridian(k) for k in basis], orders):
            raise ValueError(f"generators {list(basis)} do not form a basis of H_1")
        labels = tuple(f"m{k}" for k in basis)
    M = tuple(tuple(_pairing(Sinv, x, y) for y in reps) for x in reps)
    return LinkingForm(tuple(orders), M, labels)


def _is_basis(h: CoverHomology, gens: Sequence[tuple[int, ...]], orders: Sequence[int]) -> bool:
    if reduce(lambda a, b: a * b, orders, 1) != h.order:
        return False
    # surjectivity: [gens | diag(factors)] has all invariant factors 1
    r = len(h.factors)
    if r == 0:
        return True
    rows = [[g[i] for g in gens] + [h.factors[i] if j == i else 0 for j in range(r)] for i in range(r)]
    d = smith_normal_form(IntMatrix(rows)).diagonal
    return all(x == 1 for x in d)


def summand_meridian_basis(sizes: Sequence[int]) -> list[int]:
    """Index of the first generator of each block of a block-diagonal form."""
    out, offset = [], 0
    for s in sizes:
        out.append(offset)
        offset += s
    return out


def isotropic_vectors(form: LinkingForm) -> list[tuple[int, ...]]:
    """Every group element with self-linking 0, in lexicographic order."""
    return [v for v in form.elements() if form.self_linking(v) == 0]


# ---------------------------------------------------------------------------
# characters


@dataclass(frozen=True)
class Character:
    modulus: int
    values: tuple[int, ...]

    def __call__(self, v: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(self.values, v)) % self.modulus

    def is_trivial(self) -> bool:
        return not any(self.values)


def canonical_sign(values: Sequence[int], q: int) -> tuple[int, ...]:
    """Representative of ``{v, -v}`` whose first nonzero entry is at most ``q/2``."""
    v = tuple(x % q for x in values)
    for x in v:
        if x:
            if x > q // 2:
                return tuple((-y) % q for y in v)
            break
    return v


def _dedupe(vectors: Iterable[tuple[int, ...]], q: int) -> list[Character]:
    seen = sorted({canonical_sign(v, q) for v in vectors})
    return [Character(q, v) for v in seen]


def characters(h: CoverHomology, q: int) -> list[Character]:
    """All homomorphisms ``H_1 -> Z/q`` up to sign, as values on the original generators."""
    n = h.rank
    if n == 0:
        return [Character(q, ())]
    gens = solve_mod(h.relations, q)
    return _dedupe(span_mod(gens, q, n), q)


def basis_characters(form: LinkingForm, q: int) -> list[Character]:
    """All characters of ``(+) Z/orders_i`` up to sign, as values on the form's basis."""
    choices = [[c for c in range(q) if (o * c) % q == 0] for o in form.orders]
    return _dedupe(product(*choices), q)


def characters_vanishing_on(form: LinkingForm, v: Sequence[int], q: int) -> list[Character]:
    """Characters (up to sign, zero included) killing the element ``v``."""
    return [c for c in basis_characters(form, q) if c(v) == 0]


def cyclic_subgroup(form: LinkingForm, v: Sequence[int]) -> frozenset[tuple[int, ...]]:
    out = set()
    x = tuple(0 for _ in v)
    while True:
        out.add(x)
        x = form.normalize(tuple(a + b for a, b in zip(x, v)))
        if x in out:
            return frozenset(out)


def isotropic_lines(form: LinkingForm) -> list[tuple[int, ...]]:
    """Cyclic metabolizers: subgroups ``<v>`` with ``|<v>|^2 = |H|`` and ``lk(v, v) = 0``.

    Each is returned once, by the lexicographically first element generating it.
    """
    seen: set[frozenset] = set()
    out = []
    for v in isotropic_vectors(form):
        if not any(v):
            continue
        sub = cyclic_subgroup(form, v)
        if len(sub) ** 2 != form.order or sub in seen:
            continue
        seen.add(sub)
        out.append(v)
    return out
