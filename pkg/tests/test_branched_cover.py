from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given, settings

from conftest import seifert_matrices
from knotconcord.branched_cover import (
    Character,
    SingularFormError,
    canonical_sign,
    characters,
    characters_vanishing_on,
    cover_homology,
    isotropic_lines,
    isotropic_vectors,
    linking_form,
    summand_meridian_basis,
)
from knotconcord.exact_linalg import IntMatrix, block_diag, det
from knotconcord.seifert import BANDED_FORM, T27, build_J, seifert_matrix

GG = block_diag([BANDED_FORM, BANDED_FORM])


def classes(chars, q):
    return {canonical_sign(c.values, q) for c in chars}


def test_banded_cover():
    h = cover_homology(BANDED_FORM)
    assert h.factors == (5,) and h.describe() == "Z/5"
    assert h.relation_multiplier(1, 0) == 3
    assert [c.values for c in characters(h, 5)] == [(0, 0), (1, 3), (2, 1)]
    assert characters(h, 3) == [Character(3, (0, 0))]


def test_linking_form_values():
    assert linking_form(BANDED_FORM).matrix == ((Fraction(3, 5),),)
    form = linking_form(GG, basis=[0, 2])
    assert form.matrix == ((Fraction(2, 5), 0), (0, Fraction(2, 5)))
    assert form.is_nonsingular()
    with pytest.raises(ValueError):
        linking_form(GG, basis=[0, 1])


def test_isotropic_lines():
    form = linking_form(GG, basis=[0, 2])
    assert isotropic_lines(form) == [(1, 2), (1, 3)]
    # the lines are <(2,1)> and <(2,-1)>
    assert {(2 * k % 5, k % 5) for k in range(5)} == {tuple(k * x % 5 for x in (1, 3)) for k in range(5)}


def test_characters_vanishing_on():
    form = linking_form(GG, basis=[0, 2])
    assert classes(characters_vanishing_on(form, (2, 1), 5), 5) == {(0, 0), (1, 3), (2, 1)}
    assert classes(characters_vanishing_on(form, (2, 4), 5), 5) == {(0, 0), canonical_sign((3, 1), 5), (1, 2)}
    assert len(characters_vanishing_on(form, (0, 0), 5)) == 13


def test_torus_cover():
    h = cover_homology(seifert_matrix(T27))
    assert h.factors == (7,)


def test_singular_form():
    with pytest.raises(SingularFormError):
        cover_homology(IntMatrix([[0, 1], [0, 0]]) + IntMatrix([[0, 0], [-1, 0]]))


@settings(max_examples=200)
@given(seifert_matrices(max_genus=4))
def test_order_is_odd_determinant(V):
    h = cover_homology(V)
    assert h.order == abs(det(V + V.T))
    assert h.order % 2 == 1


@settings(max_examples=100)
@given(seifert_matrices(max_genus=3))
def test_generator_map_satisfies_relations(V):
    h = cover_homology(V)
    S = V + V.T
    gens = h.generator_map()
    for j in range(S.nrows):
        total = [sum(S[i, j] * gens[i][r] for i in range(S.nrows)) % d for r, d in enumerate(h.factors)]
        assert not any(total)


@settings(max_examples=100)
@given(seifert_matrices(max_genus=3))
def test_linking_form_nonsingular(V):
    if cover_homology(V).order > 400:
        return
    assert linking_form(V).is_nonsingular()


def _brute_isotropic(V):
    """Self-linking via integer representatives and a sympy inverse."""
    h = cover_homology(V)
    Sinv = sympy.Matrix((V + V.T).tolist()).inv()
    reps = [h.representative(i) for i in range(len(h.factors))]
    out = []
    for x in product(*(range(d) for d in h.factors)):
        r = [sum(x[i] * reps[i][k] for i in range(len(x))) for k in range(V.nrows)]
        v = sympy.Matrix(r)
        val = (v.T * Sinv * v)[0, 0]
        if sympy.Rational(val) % 1 == 0:
            out.append(x)
    return out


@settings(max_examples=200)
@given(seifert_matrices(max_genus=3))
def test_isotropic_vectors_brute_force(V):
    if cover_homology(V).order > 49:
        return
    assert isotropic_vectors(linking_form(V)) == _brute_isotropic(V)


@settings(max_examples=60)
@given(seifert_matrices(max_genus=2), seifert_matrices(max_genus=2))
def test_naturality_under_direct_sum(V, W):
    hv, hw = cover_homology(V), cover_homology(W)
    VW = block_diag([V, W])
    h = cover_homology(VW)
    assert h.order == hv.order * hw.order
    if hv.order == 1 or hw.order == 1 or len(hv.factors) != 1 or len(hw.factors) != 1:
        return
    # pick a cyclic generator among the first generators when possible
    iv = next((k for k in range(V.nrows) if hv.element_order(hv.meridian(k)) == hv.order), None)
    iw = next((k for k in range(W.nrows) if hw.element_order(hw.meridian(k)) == hw.order), None)
    if iv is None or iw is None:
        return
    form = linking_form(VW, basis=[iv, V.nrows + iw])
    assert form.matrix[0][1] == 0 and form.matrix[1][0] == 0
    assert form.matrix[0][0] == linking_form(V, basis=[iv]).matrix[0][0]
    assert form.matrix[1][1] == linking_form(W, basis=[iw]).matrix[0][0]


def test_family_form_is_fixed():
    assert {seifert_matrix(build_J(i)) for i in range(-3, 4)} == {GG}
    assert summand_meridian_basis([2, 2]) == [0, 2]
