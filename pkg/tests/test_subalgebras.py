import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bethecert.exactlinalg import Matrix, OperatorSpan, commutator, span_equal
from bethecert.glnrep import build_irrep, enumerate_gt_patterns
from bethecert.subalgebras import (
    LimitRecipe,
    bethe_image,
    classical_gt_image,
    exact_limit_span,
    gt_image,
    limit_family,
    predicted_limit_span,
    sigma1_transform,
    soa_generators,
    soa_image,
    soa_limit_image,
)
from bethecert.yangian import DiagonalParam, evaluation_module, tensor_module, trivial_module

from conftest import small_fractions


def ev(w, z=0):
    return evaluation_module(build_irrep(w), z)


def pair(n=2):
    w = (1,) + (0,) * (n - 1)
    return tensor_module([ev(w, 0), ev(w, Fraction(1, 3))])


def is_commutative(img):
    return all(commutator(a, b).is_zero() for a, b in itertools.combinations(img.span.basis, 2))


def is_diagonal(m: Matrix):
    return all(not m[i, j] for i in range(m.rows) for j in range(m.cols) if i != j)


def diag_span(d):
    return OperatorSpan.from_generators(d, [Matrix.unit(d, i, i) for i in range(d)])


# Bethe -----------------------------------------------------------------------

def test_bethe_trivial_module():
    img = bethe_image(trivial_module(2), DiagonalParam([1, 2]), 4)
    assert img.dim == 1 and img.span.contains(Matrix.identity(1))


def test_bethe_defining_gl2(frozen):
    img = bethe_image(ev((1, 0)), DiagonalParam([1, 2]), 4)
    assert img.dim == 2
    assert img.span.contains(Matrix.diag([1, 2]))
    assert bethe_image(ev((2, 0)), DiagonalParam([1, 2]), 4).dim == frozen["bethe_sym2"]["span_dim"]


def test_bethe_needs_invertible_C():
    with pytest.raises(ValueError):
        bethe_image(ev((1, 0)), DiagonalParam([0, 1]), 3)


@pytest.mark.parametrize("a", [3, Fraction(-1, 2), Fraction(7, 3)])
def test_bethe_scaling_invariance(a):
    m = pair()
    C = DiagonalParam([1, Fraction(5, 2)])
    assert span_equal(bethe_image(m, C, 4).span, bethe_image(m, C.scaled(a), 4).span)


def test_bethe_images_commute():
    m = tensor_module([ev((1, 0, 0), 0), ev((1, 0, 0), Fraction(1, 3))])
    img = bethe_image(m, DiagonalParam([1, 2, 5]), 5, closure=True)
    assert is_commutative(img)


@given(st.lists(small_fractions.filter(bool), min_size=2, max_size=2, unique=True))
def test_bethe_commutative_random_C(C):
    assert is_commutative(bethe_image(pair(), DiagonalParam(C), 4, closure=True))


# shift of argument -------------------------------------------------------------

def test_soa_gl1():
    rep = build_irrep((3,))
    img = soa_image(rep, [Fraction(2)])
    assert img.dim == 1  # E11 acts by 3, a multiple of the identity
    assert img.span.contains(rep.E(1, 1))


def test_soa_casimirs_are_central():
    rep = build_irrep((2, 0))
    gens = dict(soa_generators(rep, DiagonalParam([1, 2])))
    for label in ("sym d^0 P_1", "sym d^0 P_2"):
        for e in rep.generators.values():
            assert commutator(gens[label], e).is_zero()


def test_soa_defining_gl2_is_diagonal():
    img = soa_image(build_irrep((1, 0)), DiagonalParam([1, 2]))
    assert span_equal(img.span, diag_span(2))


@pytest.mark.parametrize("w", [(2, 0), (2, 1, 0), (3, 1, 0)])
def test_soa_commutative(w):
    assert is_commutative(soa_image(build_irrep(w), DiagonalParam([1, 2, 4][: len(w)])))


@pytest.mark.parametrize("a,b", [(2, 0), (3, 1), (Fraction(-1, 2), 5)])
def test_soa_affine_invariance(a, b):
    rep = build_irrep((2, 1, 0))
    chi = [1, 2, 4]
    moved = [a * x + b for x in chi]
    assert span_equal(soa_image(rep, chi, closure=True).span, soa_image(rep, moved, closure=True).span)


@pytest.mark.parametrize("w,C", [((1, 0), (1, 2)), ((2, 0), (1, 3)), ((2, 1, 0), (1, 2, 4))])
def test_evaluation_identity(w, C):
    C = DiagonalParam(C)
    b = bethe_image(ev(w, Fraction(1, 3)), C, len(w) + 2, closure=True)
    a = soa_image(build_irrep(w), C.inverse(), closure=True)
    assert span_equal(b.span, a.span)


# Gelfand-Tsetlin -------------------------------------------------------------

def test_gt_defining_gl2():
    assert span_equal(gt_image(ev((1, 0)), 4).span, diag_span(2))


def test_gt_trivial():
    assert gt_image(trivial_module(3), 3).dim == 1


@pytest.mark.parametrize("w", [(2, 0), (3, 1), (2, 1, 0), (3, 1, 0), (2, 1, 1, 0)])
def test_gt_diagonal_in_pattern_basis(w):
    img = gt_image(ev(w, Fraction(1, 2)), len(w) + 1)
    assert all(is_diagonal(m) for m in img.span.basis)
    # simple spectrum: diagonal algebra of full dimension
    assert img.closure().dim == len(enumerate_gt_patterns(w))


def test_classical_gt_matches_yangian_gt_on_evaluation_modules():
    rep = build_irrep((2, 1, 0))
    assert span_equal(classical_gt_image(rep, closure=True).span, gt_image(ev((2, 1, 0)), 4, closure=True).span)


# limit recipes -----------------------------------------------------------------

def test_limit_family_examples():
    r2 = LimitRecipe.second([(1, 2)], [DiagonalParam([0, 1])])
    assert limit_family(r2, Fraction(1, 10)).entries == DiagonalParam([1, Fraction(11, 10)]).entries
    r1 = LimitRecipe.first(DiagonalParam([1]), DiagonalParam([1]))
    assert limit_family(r1, Fraction(1, 10)).entries == DiagonalParam([1, Fraction(1, 10)]).entries
    with pytest.raises(ValueError):
        limit_family(r1, 1)
    with pytest.raises(ValueError):
        limit_family(r1, 0)


def test_recipe_invariants():
    with pytest.raises(ValueError):
        LimitRecipe.first(DiagonalParam([0]), DiagonalParam([1]))
    with pytest.raises(ValueError):
        LimitRecipe.second([(1, 1), (1, 1)], [DiagonalParam([0]), DiagonalParam([1])])
    with pytest.raises(ValueError):
        LimitRecipe.second([(1, 2)], [DiagonalParam([0])])
    with pytest.raises(ValueError):
        LimitRecipe("unknown", 2)


def test_predicted_caterpillar_is_gt():
    m = pair()
    assert span_equal(predicted_limit_span(LimitRecipe.caterpillar(2), m, 4).span, gt_image(m, 4).span)


def test_predicted_full_merge_is_soa():
    m = ev((2, 1, 0), 0)
    r = LimitRecipe.second([(1, 3)], [DiagonalParam([0, 1, 3])])
    pred = predicted_limit_span(r, m, 5, closure=True)
    assert span_equal(pred.span, soa_image(m, DiagonalParam([0, 1, 3]), closure=True).span)


def test_predicted_trivial():
    r = LimitRecipe.first(DiagonalParam([1]), DiagonalParam([2]))
    assert predicted_limit_span(r, trivial_module(2), 3).dim == 1


def test_predicted_rejects_generic():
    with pytest.raises(ValueError):
        predicted_limit_span(LimitRecipe.generic(DiagonalParam([1, 2])), pair(), 3)


def test_sigma1_examples():
    g = sigma1_transform(LimitRecipe.generic(DiagonalParam([1, 2])))
    assert g.kind == "generic" and g.target == "soa"
    assert g.C.entries == DiagonalParam([1, Fraction(1, 2)]).entries
    c = sigma1_transform(LimitRecipe.caterpillar(3))
    assert (c.kind, c.target, c.reversed_chain) == ("caterpillar", "soa", True)
    f = sigma1_transform(LimitRecipe.first(DiagonalParam([2]), DiagonalParam([3])))
    assert f.describe()["multiplicities"] == [["0", 1], ["1/3", 1]]
    assert f.describe()["blocks"] == [["1/2"], ["0"]]
    with pytest.raises(ValueError):
        LimitRecipe.generic(DiagonalParam([1, 1], regular=False))


def test_sigma1_generic_matches_evaluation_identity():
    C = DiagonalParam([1, 2, 4])
    soa = soa_limit_image(sigma1_transform(LimitRecipe.generic(C)), build_irrep((2, 1, 0)), closure=True)
    b = bethe_image(ev((2, 1, 0)), C, 5, closure=True)
    assert span_equal(soa.span, b.span)


def test_sigma1_caterpillar_is_classical_gt():
    rep = build_irrep((2, 1, 0))
    img = soa_limit_image(sigma1_transform(LimitRecipe.caterpillar(3)), rep, closure=True)
    assert span_equal(img.span, classical_gt_image(rep, closure=True).span)


# exact limits ------------------------------------------------------------------

def test_exact_limit_caterpillar_is_gt():
    m = pair()
    lim = exact_limit_span(LimitRecipe.caterpillar(2), m, 4).closure()
    assert span_equal(lim.span, gt_image(m, 4, closure=True).span)


def test_exact_limit_full_merge():
    m = pair()
    r = LimitRecipe.second([(1, 2)], [DiagonalParam([0, 1])])
    lim = exact_limit_span(r, m, 4).closure()
    assert span_equal(lim.span, predicted_limit_span(r, m, 4, closure=True).span)
    # a full merge lands on A_{C1}, which is not the Gelfand-Tsetlin algebra here
    assert not span_equal(lim.span, gt_image(m, 4, closure=True).span)


def test_exact_limit_keeps_generic_dimension():
    m = tensor_module([ev((1, 0, 0), 0), ev((1, 0, 0), Fraction(1, 3))])
    r = LimitRecipe.first(DiagonalParam([1, 3]), DiagonalParam([2]))
    lim = exact_limit_span(r, m, 5)
    at_t = bethe_image(m, limit_family(r, Fraction(1, 7)), 5)
    assert lim.dim == at_t.dim


def test_exact_limit_rejects_generic():
    with pytest.raises(ValueError):
        exact_limit_span(LimitRecipe.generic(DiagonalParam([1, 2])), pair(), 3)
