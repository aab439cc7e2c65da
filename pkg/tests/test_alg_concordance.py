from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knotconcord.alg_concordance import (
    InvalidAlexanderError,
    SearchBudgetExceeded,
    algebraic_order_at_most_two,
    find_metabolizer,
    fox_milnor,
    slice_verdict,
)
from knotconcord.exact_linalg import IntMatrix, block_diag
from knotconcord.polynomials import IntPoly, cyclotomic
from knotconcord.seifert import BANDED_FORM, T27, Mirror, Sum, Unknot, alexander, build_J, build_K, seifert_matrix

GG = block_diag([BANDED_FORM, BANDED_FORM])


def test_fox_milnor_banded_fails_by_discriminant():
    r = fox_milnor(alexander(build_K(T27)))
    assert not r.passed
    assert "discriminant 5" in r.reason


def test_fox_milnor_examples():
    assert fox_milnor(IntPoly([1])).passed
    sq = IntPoly([1, -3, 1]) ** 2
    r = fox_milnor(sq)
    assert r.passed and r.f * r.f.reciprocal() == sq
    # f(t) f(1/t) with f non-symmetric
    f = IntPoly([2, -1])
    r = fox_milnor(f * f.reciprocal())
    assert r.passed
    assert not fox_milnor(cyclotomic(14)).passed
    with pytest.raises(InvalidAlexanderError):
        fox_milnor(IntPoly([1, 1]))


@settings(max_examples=80)
@given(st.lists(st.integers(-3, 3), min_size=2, max_size=4))
def test_fox_milnor_accepts_products(c):
    f = IntPoly(c)
    if f.degree < 1 or abs(f(1)) != 1:
        return
    g = f * f.reciprocal()
    r = fox_milnor(g)
    assert r.passed
    assert (r.f * r.f.reciprocal()).primitive() in (g.primitive(), -g.primitive())


def _brute_metabolizer(V, bound):
    """Any pair of isotropic, orthogonal vectors spanning a primitive rank-2 lattice."""
    n = V.nrows
    vecs = [v for v in product(range(-bound, bound + 1), repeat=n) if any(v)]

    def f(x, y):
        return sum(x[i] * V[i, j] * y[j] for i in range(n) for j in range(n))

    iso = [v for v in vecs if f(v, v) == 0]
    from knotconcord.exact_linalg import smith_normal_form

    for a in iso:
        for b in iso:
            if f(a, b) == 0 and f(b, a) == 0:
                if smith_normal_form(IntMatrix([a, b])).diagonal == (1, 1):
                    return True
    return False


def test_metabolizer_of_family_form():
    w = find_metabolizer(GG, bound=2)
    assert w is not None and w.verify(GG)
    assert max(abs(x) for r in w.basis for x in r) <= 2
    assert w.basis == ((1, 0, -1, 1), (0, 1, 1, 0))
    assert _brute_metabolizer(GG, 1)


def test_no_metabolizer_for_banded_form():
    assert find_metabolizer(BANDED_FORM, bound=5) is None
    assert find_metabolizer(BANDED_FORM, bound=5, prefilter=False) is None


def test_budget():
    V = seifert_matrix(Sum((T27, Mirror(T27))))
    with pytest.raises(SearchBudgetExceeded):
        find_metabolizer(V, bound=1, prefilter=False, max_nodes=1000)


@pytest.mark.parametrize("i", [-2, 0, 1, 3])
def test_family_is_algebraically_slice(i):
    v = slice_verdict(build_J(i), bound=2)
    assert v.tag == "AlgebraicallySlice" and v.witness.verify(seifert_matrix(build_J(i)))


def test_order_two():
    assert algebraic_order_at_most_two(BANDED_FORM).status == "yes"
    r = algebraic_order_at_most_two(seifert_matrix(T27))
    assert r.status == "inconclusive" and "12" in r.note


def test_verdicts():
    assert slice_verdict(Unknot()).tag == "AlgebraicallySlice"
    v = slice_verdict(build_K(T27))
    assert v.tag == "NotSlice" and v.obstruction["type"] == "FoxMilnor"
    v = slice_verdict(T27)
    assert v.tag == "NotSlice"
    v = slice_verdict(Sum((T27, Mirror(T27))), bound=1, max_nodes=20000)
    assert v.tag in ("Inconclusive", "AlgebraicallySlice")
    assert v.to_dict()["verdict"] == v.tag


@settings(max_examples=30)
@given(st.integers(-3, 3), st.integers(-3, 3))
def test_witness_verification_rejects_bad_bases(a, b):
    from knotconcord.alg_concordance import MetabolizerWitness

    w = MetabolizerWitness(((1, 0, a, b), (0, 1, b, a)), 3)
    ok = w.verify(GG)
    n = 4

    def f(x, y):
        return sum(x[i] * GG[i, j] * y[j] for i in range(n) for j in range(n))

    x, y = w.basis
    assert ok == (f(x, x) == 0 and f(y, y) == 0 and f(x, y) == 0 and f(y, x) == 0)
