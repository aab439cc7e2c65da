"""Symbolic knot expressions and their Seifert matrices.

A knot is described structurally (torus knots, mirrors, connected sums and
genus-one banded knots) rather than by a diagram.  The structure is kept
because the Casson-Gordon computations need to know which knots are tied
into which band.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from .exact_linalg import IntMatrix, berkowitz, block_diag, det
from .polynomials import IntPoly


@dataclass(frozen=True)
class Unknot:
    pass


@dataclass(frozen=True)
class Torus2q:
    q: int

    def __post_init__(self):
        if self.q % 2 == 0 or abs(self.q) < 3:
            raise ValueError(f"Torus2q needs odd |q| >= 3, got {self.q}")


@dataclass(frozen=True)
class Mirror:
    inner: "KnotExpr"


@dataclass(frozen=True)
class Sum:
    parts: tuple["KnotExpr", ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if len(self.parts) < 2:
            raise ValueError("Sum needs at least two parts")


@dataclass(frozen=True)
class GenusOneBanded:
    """Genus-one knot with Seifert form [[1,1],[0,-1]] and knots tied in its bands."""

    left: "KnotExpr"
    right: "KnotExpr"


KnotExpr = Union[Unknot, Torus2q, Mirror, Sum, GenusOneBanded]

BANDED_FORM = IntMatrix([[1, 1], [0, -1]])


# ---------------------------------------------------------------------------
# constructors


def mirror(k: KnotExpr) -> KnotExpr:
    if isinstance(k, Mirror):
        return k.inner
    if isinstance(k, Unknot):
        return k
    return Mirror(k)


def connected_sum(ks) -> KnotExpr:
    ks = tuple(ks)
    if not ks:
        return Unknot()
    if len(ks) == 1:
        return ks[0]
    return Sum(ks)


def iterated_sum(k: KnotExpr, i: int) -> KnotExpr:
    """``#_i k``: unknot for ``i = 0``, copies of the mirror for ``i < 0``."""
    if i < 0:
        return iterated_sum(mirror(k), -i)
    return connected_sum([k] * i)


def build_K(band_knot: KnotExpr) -> GenusOneBanded:
    """The banded knot with ``band_knot`` in one band and its mirror in the other."""
    return GenusOneBanded(band_knot, mirror(band_knot))


FIGURE_EIGHT = build_K(Unknot())
T27 = Torus2q(7)


def build_J(i: int, band_knot: KnotExpr = T27) -> Sum:
    return Sum((build_K(Unknot()), build_K(iterated_sum(band_knot, i))))


# ---------------------------------------------------------------------------
# Seifert matrices


def torus_seifert_matrix(q: int) -> IntMatrix:
    """Upper bidiagonal (q-1)x(q-1) matrix of ones, for q > 0."""
    n = q - 1
    return IntMatrix([[1 if j in (i, i + 1) else 0 for j in range(n)] for i in range(n)], ncols=n)


def mirror_matrix(V: IntMatrix) -> IntMatrix:
    return -V.T


@lru_cache(maxsize=1024)
def seifert_matrix(k: KnotExpr) -> IntMatrix:
    if isinstance(k, Unknot):
        return IntMatrix.zeros(0, 0)
    if isinstance(k, Torus2q):
        if k.q > 0:
            return torus_seifert_matrix(k.q)
        return mirror_matrix(seifert_matrix(Torus2q(-k.q)))
    if isinstance(k, Mirror):
        return mirror_matrix(seifert_matrix(k.inner))
    if isinstance(k, Sum):
        return block_diag([seifert_matrix(p) for p in k.parts])
    if isinstance(k, GenusOneBanded):
        return BANDED_FORM
    raise TypeError(f"not a knot expression: {k!r}")


def is_valid_seifert(V: IntMatrix) -> bool:
    return V.is_square and V.nrows % 2 == 0 and abs(det(V - V.T)) == 1


def genus(k: KnotExpr) -> int:
    return seifert_matrix(k).nrows // 2


# ---------------------------------------------------------------------------
# Alexander polynomial


@dataclass(frozen=True)
class LaurentPoly:
    """``t^shift * poly``; normalized form has shift 0 and positive leading coeff."""

    poly: IntPoly
    shift: int = 0

    def normalized(self) -> "LaurentPoly":
        p, k = self.poly.shift_down()
        if p.lc < 0:
            p = -p
        return LaurentPoly(p, 0)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        return LaurentPoly(self.poly * other.poly, self.shift + other.shift)

    def __call__(self, t):
        return self.poly(t) * t**self.shift if self.shift >= 0 else self.poly(t) / t ** (-self.shift)

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.poly.coeffs

    @property
    def degree(self) -> int:
        return self.poly.degree

    def __str__(self):
        s = self.poly.to_string("t")
        return s if self.shift == 0 else f"t^{self.shift}*({s})"


def alexander_from_matrix(V: IntMatrix) -> LaurentPoly:
    """Normalized ``det(V - t V^T)`` computed directly over Z[t]."""
    n = V.nrows
    M = [[IntPoly([V[i, j], -V[j, i]]) for j in range(n)] for i in range(n)]
    cp = berkowitz(M, IntPoly([1]), IntPoly())
    d = cp[0] if n % 2 == 0 else -cp[0]
    return LaurentPoly(d).normalized()


@lru_cache(maxsize=1024)
def alexander(k: KnotExpr) -> LaurentPoly:
    """Normalized Alexander polynomial, multiplicative over connected sums."""
    if isinstance(k, Sum):
        out = LaurentPoly(IntPoly([1]))
        for p in k.parts:
            out = out * alexander(p)
        return out.normalized()
    if isinstance(k, Mirror):
        return alexander(k.inner)
    return alexander_from_matrix(seifert_matrix(k))


# ---------------------------------------------------------------------------
# JSON documents


class KnotParseError(ValueError):
    def __init__(self, message: str, position: str = ""):
        super().__init__(f"{message} (at {position})" if position else message)
        self.position = position


def to_dict(k: KnotExpr) -> dict:
    if isinstance(k, Unknot):
        return {"type": "unknot"}
    if isinstance(k, Torus2q):
        return {"type": "torus2q", "q": k.q}
    if isinstance(k, Mirror):
        return {"type": "mirror", "knot": to_dict(k.inner)}
    if isinstance(k, Sum):
        return {"type": "sum", "parts": [to_dict(p) for p in k.parts]}
    if isinstance(k, GenusOneBanded):
        return {"type": "banded", "left": to_dict(k.left), "right": to_dict(k.right)}
    raise TypeError(f"not a knot expression: {k!r}")


def from_dict(d, path: str = "$") -> KnotExpr:
    if not isinstance(d, dict):
        raise KnotParseError("expected an object", path)
    kind = d.get("type")
    try:
        if kind == "unknot":
            return Unknot()
        if kind == "torus2q":
            q = d.get("q")
            if not isinstance(q, int) or isinstance(q, bool):
                raise KnotParseError("torus2q needs an integer 'q'", path)
            return Torus2q(q)
        if kind == "mirror":
            if "knot" not in d:
                raise KnotParseError("mirror needs 'knot'", path)
            return Mirror(from_dict(d["knot"], f"{path}.knot"))
        if kind == "sum":
            parts = d.get("parts")
            if not isinstance(parts, list):
                raise KnotParseError("sum needs a list 'parts'", path)
            return Sum(tuple(from_dict(p, f"{path}.parts[{i}]") for i, p in enumerate(parts)))
        if kind == "banded":
            if "left" not in d or "right" not in d:
                raise KnotParseError("banded needs 'left' and 'right'", path)
            return GenusOneBanded(from_dict(d["left"], f"{path}.left"), from_dict(d["right"], f"{path}.right"))
    except KnotParseError:
        raise
    except ValueError as exc:
        raise KnotParseError(str(exc), path) from exc
    raise KnotParseError(f"unknown knot type {kind!r}", path)


def dumps(k: KnotExpr) -> str:
    return json.dumps(to_dict(k), sort_keys=True, separators=(",", ":"))


def loads(text: str) -> KnotExpr:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise KnotParseError(exc.msg, f"line {exc.lineno} column {exc.colno} (char {exc.pos})") from exc
    return from_dict(doc)


def describe(k: KnotExpr) -> str:
    """Short human-readable name."""
    if isinstance(k, Unknot):
        return "unknot"
    if isinstance(k, Torus2q):
        return f"T(2,{k.q})"
    if isinstance(k, Mirror):
        return f"-{describe(k.inner)}"
    if isinstance(k, Sum):
        return " # ".join(describe(p) if not isinstance(p, Sum) else f"({describe(p)})" for p in k.parts)
    if k == FIGURE_EIGHT:
        return "figure8"
    return f"K[{describe(k.left)} | {describe(k.right)}]"
