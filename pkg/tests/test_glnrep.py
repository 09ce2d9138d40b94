import itertools
from math import factorial

import pytest
from hypothesis import given

from bethecert.combinat import SkewDiagram, enumerate_skew_ssyt
from bethecert.exactlinalg import ONE, Matrix, as_gq
from bethecert.glnrep import (
    Weight,
    build_irrep,
    enumerate_gt_patterns,
    gram_form,
    highest_weight_subspace,
    trivial_irrep,
)

from conftest import weights


def key(w):
    return ",".join(map(str, w))


def test_weight_must_be_dominant():
    with pytest.raises(ValueError):
        Weight([0, 1])


@pytest.mark.parametrize("w", [(1, 0), (2, 0), (3, 0), (3, 1), (1, 0, 0), (2, 1, 0), (2, 0, 0), (1, 1, 0), (3, 1, 0), (2, 1, 1, 0)])
def test_pattern_count_matches_oracles(frozen, w):
    pats = enumerate_gt_patterns(w)
    assert len(pats) == frozen["gt_count"][key(w)] == frozen["weyl_dim"][key(w)]
    assert len(set(pats)) == len(pats)


@pytest.mark.parametrize("m", range(5))
def test_gl2_row_count(m):
    assert len(enumerate_gt_patterns((m, 0))) == m + 1


def test_highest_pattern_first():
    pats = enumerate_gt_patterns((2, 1, 0))
    assert pats[0] == ((2, 1, 0), (2, 1), (2,))
    assert pats == sorted(pats, reverse=True)


def test_defining_representation():
    rep = build_irrep((1, 0))
    assert rep.E(1, 1) == Matrix.diag([1, 0])
    assert rep.E(2, 2) == Matrix.diag([0, 1])
    assert rep.E(1, 2) == Matrix.unit(2, 0, 1)
    assert rep.E(2, 1) == Matrix.unit(2, 1, 0)


def test_determinant_character():
    rep = build_irrep((1, 1))
    assert rep.dim == 1
    assert rep.E(1, 1) == rep.E(2, 2) == Matrix.identity(1)
    assert rep.E(1, 2).is_zero() and rep.E(2, 1).is_zero()


def check_relations(rep):
    m = rep.m
    for i, j, k, l in itertools.product(range(1, m + 1), repeat=4):
        lhs = rep.E(i, j) @ rep.E(k, l) - rep.E(k, l) @ rep.E(i, j)
        rhs = Matrix.zeros(rep.dim)
        if j == k:
            rhs = rhs + rep.E(i, l)
        if l == i:
            rhs = rhs - rep.E(k, j)
        assert lhs == rhs, (i, j, k, l)


@pytest.mark.parametrize("w", [(1, 0), (2, 0), (3, 1), (2, 1, 0), (2, 0, 0), (1, 1, 0), (2, 1, 1, 0)])
def test_commutation_relations(w):
    check_relations(build_irrep(w))


@given(weights(3, 2))
def test_commutation_relations_random(w):
    check_relations(build_irrep(w))


@pytest.mark.parametrize("w", [(1, 0), (2, 0), (3, 0), (3, 1), (1, 0, 0), (2, 1, 0), (2, 0, 0), (1, 1, 0), (3, 1, 0)])
def test_casimir(frozen, w):
    rep = build_irrep(w)
    m = rep.m
    cas = Matrix.zeros(rep.dim)
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            cas = cas + rep.E(i, j) @ rep.E(j, i)
    assert cas == Matrix.scalar(rep.dim, frozen["casimir"][key(w)])


def test_gram_examples():
    assert gram_form(build_irrep((1, 0))).matrix == Matrix.identity(2)
    assert gram_form(trivial_irrep(3)).matrix == Matrix.identity(1)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_gram_matches_lowering_norms(m):
    # ||E21^a v0||^2 = a! m!/(m-a)! for the highest vector v0 of (m,0)
    rep = build_irrep((m, 0))
    G = gram_form(rep).matrix
    v = [ONE if i == rep.highest_index() else as_gq(0) for i in range(rep.dim)]
    for a in range(m + 1):
        norm = sum((x.conjugate() * g * x for x, g in zip(v, (G[i, i] for i in range(rep.dim)))), as_gq(0))
        assert norm == as_gq(factorial(a) * factorial(m) // factorial(m - a))
        v = rep.E(2, 1).apply(v)


@given(weights(3, 2))
def test_gram_is_invariant_and_positive(w):
    rep = build_irrep(w)
    gf = gram_form(rep)
    G = gf.matrix
    for (i, j), e in rep.generators.items():
        assert gf.adjoint(e) == rep.E(j, i)
    assert all(G[i, i].im == 0 and G[i, i].re > 0 for i in range(rep.dim))
    assert G[rep.highest_index(), rep.highest_index()] == ONE


def test_highest_weight_subspace_examples(frozen):
    assert len(highest_weight_subspace(build_irrep((1, 0)), (0,))) == 1
    assert len(highest_weight_subspace(build_irrep((1, 0)), (2,))) == 0
    got = len(highest_weight_subspace(build_irrep((2, 1, 0)), (1,)))
    assert got == frozen["branching_gl3_gl1"]["2,1,0|1"]


def _dominant_weights(k, lo, hi):
    return [w for w in itertools.product(range(hi, lo - 1, -1), repeat=k) if all(a >= b for a, b in zip(w, w[1:]))]


@pytest.mark.parametrize("lam,k", [((2, 1, 0), 1), ((2, 1, 0), 2), ((2, 0, 0), 1), ((3, 1, 0), 2), ((2, 1, 1, 0), 2)])
def test_branching_identity(lam, k):
    rep = build_irrep(lam)
    total = 0
    for mu in _dominant_weights(k, min(lam), max(lam)):
        mult = len(highest_weight_subspace(rep, mu))
        if mult:
            assert mult == len(enumerate_skew_ssyt(SkewDiagram(lam, mu), len(lam) - k))
        total += mult * build_irrep(mu).dim
    assert total == rep.dim


def test_highest_vectors_are_annihilated():
    rep = build_irrep((2, 1, 1, 0))
    for v in highest_weight_subspace(rep, (1, 0)):
        assert not any(rep.E(3, 4).apply(v))
        assert rep.E(3, 3).apply(v) == v
        assert not any(rep.E(4, 4).apply(v))
