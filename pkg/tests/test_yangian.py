import itertools
from fractions import Fraction
from math import factorial

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from bethecert.combinat import (
    SkewDiagram,
    assemble_disjoint_union,
    drinfeld_polynomials,
    enumerate_skew_ssyt,
    rotated_drinfeld_polynomials,
)
from bethecert.exactlinalg import ONE, GaussQ, Matrix, Poly, RatOpMatrix, as_gq, commutator, ratop_mul
from bethecert.glnrep import build_irrep
from bethecert.yangian import (
    DiagonalParam,
    build_skew_module,
    evaluation_module,
    module_drinfeld_polynomials,
    omega_image,
    omega_module,
    quantum_determinant,
    quantum_minor,
    quantum_minor_columns,
    shifted_module,
    tau_series,
    tensor_module,
    trivial_module,
    verify_rtt,
)

from conftest import small_fractions


def ev(w, z=0):
    return evaluation_module(build_irrep(w), z)


def scalar_at(op: RatOpMatrix, u0) -> GaussQ:
    m = op.evaluate(u0)
    c = m[0, 0]
    assert m == Matrix.scalar(m.rows, c)
    return c


POINTS = [3, Fraction(7, 2), -Fraction(5, 3)]


def sympy_value(expr: str, u0):
    return as_gq(Fraction(str(sp.sympify(expr).subs(sp.Symbol("u"), sp.Rational(str(u0))))))


# modules ----------------------------------------------------------------------

def test_trivial_module():
    m = trivial_module(3)
    assert m.dim == 1 and m.T.is_identity()
    assert verify_rtt(m, 4)


def test_evaluation_coefficients():
    rep = build_irrep((2, 1, 0))
    m = evaluation_module(rep, Fraction(1, 2))
    cs = m.coefficients(3)
    for i in range(3):
        for j in range(3):
            assert cs[1][i][j] == rep.E(i + 1, j + 1)
            # (u - z)^{-1} = sum z^{r-1} u^{-r}
            assert cs[2][i][j] == rep.E(i + 1, j + 1).scale(Fraction(1, 2))


def test_tensor_needs_factors_of_equal_rank():
    with pytest.raises(ValueError):
        tensor_module([])
    with pytest.raises(ValueError):
        tensor_module([ev((1, 0)), ev((1, 0, 0))])


def test_tensor_coproduct():
    a, b = ev((1, 0), 0), ev((1, 0), Fraction(1, 3))
    t = tensor_module([a, b])
    for i, j in itertools.product((1, 2), repeat=2):
        expect = None
        for k in (1, 2):
            term = ratop_mul(a.entry(i, k).lift_tensor(1, 2), b.entry(k, j).lift_tensor(2, 1))
            expect = term if expect is None else expect + term
        assert t.entry(i, j) == expect


def test_tensor_associative():
    a, b, c = ev((1, 0), 0), ev((1, 0), Fraction(1, 3)), ev((1, 1), -1)
    assert tensor_module([a, b, c]).T == tensor_module([tensor_module([a, b]), c]).T
    assert tensor_module([a, b, c]).T == tensor_module([a, tensor_module([b, c])]).T


def test_shift_composes():
    m = ev((1, 0), 0)
    assert shifted_module(m, Fraction(1, 3)).T == ev((1, 0), Fraction(1, 3)).T
    assert shifted_module(shifted_module(m, 1), -1).T == m.T


# quantum minors -------------------------------------------------------------

@pytest.mark.parametrize("z", ["0", "1/2"])
def test_qdet_defining_gl2(frozen, z):
    q = quantum_determinant(ev((1, 0), Fraction(z)))
    num, den = frozen["qdet_c2"][z]
    for u0 in POINTS:
        assert scalar_at(q, u0) == sympy_value(f"({num})/({den})", u0)


def test_qdet_is_multiplicative():
    a, b = ev((1, 0), 0), ev((2, 0), Fraction(1, 3))
    t = tensor_module([a, b])
    for u0 in POINTS:
        assert scalar_at(quantum_determinant(t), u0) == scalar_at(quantum_determinant(a), u0) * scalar_at(quantum_determinant(b), u0)


def test_qdet_trivial_is_one():
    assert quantum_determinant(trivial_module(3)).is_identity()


@pytest.mark.parametrize("w", [(1, 0, 0), (2, 1, 0)])
def test_row_and_column_expansions_agree(w):
    m = ev(w, Fraction(1, 2))
    for rows in itertools.combinations((1, 2, 3), 2):
        for cols in itertools.combinations((1, 2, 3), 2):
            assert quantum_minor(m, rows, cols) == quantum_minor_columns(m, rows, cols)
    full = (1, 2, 3)
    assert quantum_minor(m, full, full) == quantum_minor_columns(m, full, full)


def test_minor_index_errors():
    m = ev((1, 0))
    for rows, cols in [((1,), (1, 2)), ((2, 1), (1, 2)), ((1, 2, 3), (1, 2, 3)), ((), ())]:
        with pytest.raises(ValueError):
            quantum_minor(m, rows, cols)


def test_qdet_is_central():
    m = tensor_module([ev((1, 0), 0), ev((2, 0), Fraction(1, 3))])
    qs = quantum_determinant(m).series(4)
    gens = m.yangian_generators(2)
    for q in qs[1:]:
        for g in gens:
            assert commutator(q, g).is_zero()


def _tau_antisymmetrizer(m, C, p):
    """sum_{j, s} sgn(s) c_{j_s(1)}..c_{j_s(p)} t_{j_s(1) j_1}(u) .. t_{j_s(p) j_p}(u-p+1)."""
    n = m.n
    total = None
    for js in itertools.product(range(1, n + 1), repeat=p):
        coeff = ONE
        for j in js:
            coeff = coeff * C[j - 1]
        for perm in itertools.permutations(range(p)):
            sign = sp.combinatorics.Permutation(list(perm)).signature()
            acc = m.entry(js[perm[0]], js[0])
            for step in range(1, p):
                acc = ratop_mul(acc, m.entry(js[perm[step]], js[step]), -step)
            term = acc.scale(coeff * sign)
            total = term if total is None else total + term
    return total


@pytest.mark.parametrize("w,C", [((1, 0), (2, 3)), ((2, 0), (1, -1)), ((1, 0, 0), (1, 2, 5))])
def test_tau_matches_antisymmetrizer(w, C):
    m = ev(w, Fraction(1, 3))
    Cg = [as_gq(c) for c in C]
    for p in range(1, m.n + 1):
        brute = _tau_antisymmetrizer(m, Cg, p)
        assert brute == tau_series(m, DiagonalParam(C), p).scale(factorial(p))


def test_tau_top_is_scaled_qdet():
    m = ev((2, 1, 0), 0)
    C = DiagonalParam([2, 3, 5])
    assert tau_series(m, C, 3) == quantum_determinant(m).scale(30)


def test_tau_errors():
    m = ev((1, 0))
    with pytest.raises(ValueError):
        tau_series(m, DiagonalParam([1, 2, 3]), 1)
    with pytest.raises(ValueError):
        tau_series(m, DiagonalParam([1, 2]), 3)


# omega -----------------------------------------------------------------------

def test_omega_defining_denominator():
    w = omega_image(ev((1, 0), 0))
    assert w.den == Poly.linear(0)


@pytest.mark.parametrize("w", [(1, 0), (1, 0, 0), (2, 0)])
def test_omega_is_involutive(w):
    m = ev(w, Fraction(1, 2))
    assert omega_module(omega_module(m)).T == m.T


def test_omega_factorwise_matches_direct():
    m = tensor_module([ev((1, 0), 0), ev((1, 0), Fraction(2, 3))])
    from bethecert.exactlinalg import ratop_inverse

    assert omega_image(m) == ratop_inverse(m.T.substitute(-1, -2))


def test_omega_satisfies_rtt():
    assert verify_rtt(omega_module(ev((2, 1, 0), Fraction(1, 2))), 4)


# skew modules ------------------------------------------------------------------

def test_skew_single_box(frozen):
    m = build_skew_module((1, 0), (0,))
    assert (m.n, m.dim) == (1, 1)
    num, den = frozen["skew_box_t11"]
    for u0 in POINTS:
        assert scalar_at(m.entry(1, 1), u0) == sympy_value(f"({num})/({den})", u0)


def test_skew_dimension_is_tableau_count(frozen):
    m = build_skew_module((2, 1, 0), (1,))
    assert m.n == 2
    assert m.dim == frozen["ssyt"]["2,1,0/1/2"] == len(enumerate_skew_ssyt(SkewDiagram((2, 1, 0), (1,)), 2))


def test_skew_empty_multiplicity_space():
    with pytest.raises(ValueError):
        build_skew_module((1, 0), (2,))


def test_skew_without_mu_is_omega_twist():
    m = build_skew_module((2, 1, 0), ())
    assert m.dim == 8
    assert verify_rtt(m, 4)


def test_skew_drinfeld_symmetric_shape():
    d = SkewDiagram((2, 1, 0), (1,))
    m = build_skew_module((2, 1, 0), (1,))
    got = module_drinfeld_polynomials(m)
    assert got == drinfeld_polynomials(d, 2) == rotated_drinfeld_polynomials(d, 2)
    assert got == [Poly.linear(1) * Poly.linear(-1)]


@pytest.mark.parametrize("lam,mu,z", [
    ((3, 1, 0), (1,), Fraction(1, 2)),
    ((2, 1, 1, 0), (1,), 0),
    ((2, 2, 1, 0), (1,), -1),
    ((3, 1, 0, 0), (2, 1), 0),
])
def test_skew_drinfeld_is_rotated_content_formula(lam, mu, z):
    m = build_skew_module(lam, mu, z)
    assert module_drinfeld_polynomials(m) == rotated_drinfeld_polynomials(SkewDiagram(lam, mu), m.n, z)


@pytest.mark.parametrize("w,z", [((2, 1, 0), Fraction(1, 3)), ((3, 1), -1), ((2, 0, 0), 0), ((3, 2, 0), 2)])
def test_evaluation_drinfeld_is_content_formula(w, z):
    m = ev(w, z)
    assert module_drinfeld_polynomials(m) == drinfeld_polynomials(SkewDiagram(w), m.n, z)


def test_tensor_of_skew_modules_multiplies_drinfeld():
    box = SkewDiagram((1, 0, 0), (0,))
    a = build_skew_module((1, 0, 0), (0,), 0)
    b = build_skew_module((1, 0, 0), (0,), 5)
    t = tensor_module([a, b])
    pa, pb = module_drinfeld_polynomials(a), module_drinfeld_polynomials(b)
    assert module_drinfeld_polynomials(t) == [x * y for x, y in zip(pa, pb)]
    # in the rotated convention a factor at z sits at -z in the assembled diagram
    glued = assemble_disjoint_union([(box, 0), (box, -5)])
    assert rotated_drinfeld_polynomials(glued, 2) == module_drinfeld_polynomials(t)


def test_skew_rtt():
    assert verify_rtt(build_skew_module((2, 1, 0), (1,), Fraction(1, 2)), 4)


# RTT -------------------------------------------------------------------------

@pytest.mark.parametrize("build", [
    lambda: ev((1, 0), Fraction(1, 2)),
    lambda: ev((1, 0, 0), Fraction(1, 2)),
    lambda: tensor_module([ev((1, 0), 0), ev((1, 0), Fraction(1, 3))]),
])
def test_rtt_examples(build):
    assert verify_rtt(build(), 6)


def test_rtt_detects_corruption():
    m = ev((1, 0), 0)
    bad = m.T + RatOpMatrix(2, 2, [Matrix.unit(4, 0, 3)], Poly([0, 0, 1]))
    assert not verify_rtt(bad, 4)


def test_rtt_order_floor():
    with pytest.raises(ValueError):
        verify_rtt(trivial_module(2), 1)


@given(st.lists(small_fractions, min_size=1, max_size=2), st.sampled_from([(1, 0), (2, 0), (1, 1)]))
def test_rtt_random_tensors(zs, w):
    m = tensor_module([ev(w, z) for z in zs])
    assert verify_rtt(m, 3)
