import math
from fractions import Fraction

import numpy as np
import pytest

from minkeuclid.diffops import (
    CoeffPoly,
    DiffOperator,
    IndexMatrix,
    op_D,
    op_L,
    op_M,
    op_Omega,
    op_add,
    op_commutator,
    op_compose,
    op_delta,
    op_equal,
    op_laplace_cone,
    op_laplace_pnm,
    op_laplace_sl_iwasawa,
    op_scale,
    pnm_coords,
)
from minkeuclid.errors import ChartError, DimensionMismatch


def partial(coords, index, order=1, scalar=Fraction(1)):
    return DiffOperator.partial(coords, index, order, scalar)


def mono_op(coords, alpha, exps, scalar=Fraction(1)):
    return DiffOperator(
        coords, {tuple(alpha): CoeffPoly.monomial(scalar, tuple(exps), coords.dim)}
    )


def test_delta1_is_euler_operator():
    co = pnm_coords(1)
    assert op_delta(1, 1) == mono_op(co, (1,), (1,))
    co3 = pnm_coords(3)
    d1 = op_delta(1, 3)
    expected = DiffOperator.zero(co3)
    for i in range(3):
        for j in range(i, 3):
            idx = co3.y_index(i, j)
            alpha = [0] * co3.dim
            alpha[idx] = 1
            expected = expected + mono_op(co3, alpha, [int(k == idx) for k in range(co3.dim)])
    assert d1 == expected


def test_delta2_matches_printed_display():
    """The n=2 expansion, transcribed term by term from the explicit display
    (y1 = Y11, y2 = Y22, y3 = Y12), must agree exactly."""
    co = pnm_coords(2)
    dim = co.dim
    i11, i12, i22 = co.y_index(0, 0), co.y_index(0, 1), co.y_index(1, 1)

    def al(**kw):
        a = [0] * dim
        for k, v in kw.items():
            a[{"y1": i11, "y2": i22, "y3": i12}[k]] = v
        return tuple(a)

    def ex(**kw):
        e = [0] * dim
        for k, v in kw.items():
            e[{"y1": i11, "y2": i22, "y3": i12}[k]] = v
        return tuple(e)

    h = Fraction(1, 2)
    e32 = Fraction(3, 2)
    expected_terms = {
        al(y1=2): CoeffPoly(dim, {ex(y1=2): Fraction(1)}),
        al(y2=2): CoeffPoly(dim, {ex(y2=2): Fraction(1)}),
        al(y3=2): CoeffPoly(dim, {ex(y1=1, y2=1): h, ex(y3=2): h}),
        al(y1=1, y2=1): CoeffPoly(dim, {ex(y3=2): Fraction(2)}),
        al(y1=1, y3=1): CoeffPoly(dim, {ex(y1=1, y3=1): Fraction(2)}),
        al(y2=1, y3=1): CoeffPoly(dim, {ex(y2=1, y3=1): Fraction(2)}),
        al(y1=1): CoeffPoly(dim, {ex(y1=1): e32}),
        al(y2=1): CoeffPoly(dim, {ex(y2=1): e32}),
        al(y3=1): CoeffPoly(dim, {ex(y3=1): e32}),
    }
    assert op_delta(2, 2) == DiffOperator(co, expected_terms)


def test_D1_matches_proof_display():
    # D_1 = 2 sum_{i<=j} y_ij d/dy_ij
    for n, m in [(2, 1), (3, 2)]:
        co = pnm_coords(n, m)
        expected = DiffOperator.zero(co)
        for i in range(n):
            for j in range(i, n):
                idx = co.y_index(i, j)
                alpha = [0] * co.dim
                alpha[idx] = 1
                exps = [0] * co.dim
                exps[idx] = 1
                expected = expected + mono_op(co, alpha, exps, Fraction(2))
        assert op_D(1, n, m) == expected


def test_omega0_matches_proof_display():
    # Omega^(0)_pq = sum_a y_aa d2/dv_pa dv_qa + sum_{a<b} y_ab (cross terms)
    n, m = 2, 2
    co = pnm_coords(n, m)
    p, q = 1, 2

    def term(yi, yj, va, vb):
        alpha = [0] * co.dim
        alpha[co.v_index(p - 1, va)] += 1
        alpha[co.v_index(q - 1, vb)] += 1
        exps = [0] * co.dim
        exps[co.y_index(yi, yj)] = 1
        return DiffOperator(
            co, {tuple(alpha): CoeffPoly.monomial(Fraction(1), tuple(exps), co.dim)}
        )

    expected = term(0, 0, 0, 0) + term(1, 1, 1, 1) + term(0, 1, 0, 1) + term(0, 1, 1, 0)
    assert op_Omega(0, p, q, n, m) == expected


@pytest.mark.parametrize("n,m", [(1, 1), (2, 1), (2, 2), (3, 2)])
def test_D_equals_scaled_delta(n, m):
    for j in range(1, n + 1):
        assert op_equal(op_D(j, n, m), op_scale(Fraction(2) ** j, op_delta(j, n, m)))


def test_commutators_exact():
    for n in (1, 2, 3):
        ds = {j: op_D(j, n, 1) for j in range(1, n + 1)}
        for i in ds:
            for j in ds:
                assert op_commutator(ds[i], ds[j]).is_zero
    om11 = op_Omega(0, 1, 1, 2, 2)
    om12 = op_Omega(0, 1, 2, 2, 2)
    om22 = op_Omega(0, 2, 2, 2, 2)
    for a in (om11, om12, om22):
        for b in (om11, om12, om22):
            assert op_commutator(a, b).is_zero
    d1 = op_D(1, 2, 2)
    for om in (om11, om12, om22):
        assert op_equal(op_commutator(d1, om), om.scale(2))


def test_commutator_antisymmetry_and_jacobi():
    co = pnm_coords(2, 1)
    a = op_delta(2, 2, 1)
    b = op_Omega(0, 1, 1, 2, 1)
    c = op_L(1, 2, 1)
    assert op_commutator(a, b) == op_commutator(b, a).scale(-1)
    jac = (
        op_commutator(a, op_commutator(b, c))
        + op_commutator(b, op_commutator(c, a))
        + op_commutator(c, op_commutator(a, b))
    )
    assert jac.is_zero


def test_normal_form_idempotent_and_sorted():
    d = op_delta(2, 2)
    rebuilt = DiffOperator(d.coords, dict(d.terms))
    assert rebuilt == d
    terms = d.canonical_terms()
    assert terms == sorted(terms, key=lambda t: t[0])


def test_compose_is_leibniz():
    # (y d/dy) o (y d/dy) = y d/dy + y^2 d2/dy2 at n=1
    co = pnm_coords(1)
    e = op_delta(1, 1)
    sq = op_compose(e, e)
    expected = op_add(e, mono_op(co, (2,), (2,)))
    assert sq == expected


def test_index_validation():
    with pytest.raises(ChartError):
        op_delta(0, 2)
    with pytest.raises(ChartError):
        op_delta(3, 2)
    with pytest.raises(ChartError):
        op_Omega(2, 1, 1, 2, 1)
    with pytest.raises(ChartError):
        op_Omega(0, 2, 1, 2, 2)
    with pytest.raises(ChartError):
        op_L(2, 2, 1)
    with pytest.raises(DimensionMismatch):
        op_compose(op_delta(1, 2), op_delta(1, 3))


def test_laplace_cone_scaling():
    assert op_equal(op_laplace_cone(Fraction(2), 2), op_delta(2, 2).scale(Fraction(1, 2)))


def test_laplace_pnm_m1_last_term():
    n, m = 2, 1
    lap = op_laplace_pnm(1, 1, n, m)
    expected = (
        op_delta(2, n, m)
        - op_delta(1, n, m).scale(Fraction(1, 2))
        + op_Omega(0, 1, 1, n, m)
    )
    assert lap == expected
    # diagonal-only variant drops the off-diagonal summand
    lap2 = op_laplace_pnm(1, 1, 2, 2, last_sum="diagonal")
    full = op_laplace_pnm(1, 1, 2, 2)
    assert op_equal(full - lap2, op_Omega(0, 1, 2, 2, 2))


def test_iwasawa_laplacian_variants_n2():
    co_exp = {"v_scaled": Fraction(1, 2), "as_printed": None}
    d = op_laplace_sl_iwasawa(2, "v_scaled")
    # 1/2 v^2 d2/dv2 - 1/2 v d/dv + v^2 d2/dx2
    co = d.coords
    expected = (
        mono_op(co, (2, 0), (2, 0), Fraction(1, 2))
        + mono_op(co, (1, 0), (1, 0), Fraction(-1, 2))
        + mono_op(co, (0, 2), (2, 0))
    )
    assert d == expected
    dm = op_laplace_sl_iwasawa(2, "metric")
    expected_m = mono_op(co, (2, 0), (2, 0), Fraction(1, 2)) + mono_op(
        co, (0, 2), (2, 0), Fraction(1, 2)
    )
    assert dm == expected_m
    dp = op_laplace_sl_iwasawa(2, "as_printed")
    expected_p = (
        mono_op(co, (2, 0), (2, 0), Fraction(1, 2))
        + partial(co, 0, 1, Fraction(-1, 2))
        + mono_op(co, (0, 2), (2, 0))
    )
    assert dp == expected_p


def test_op_M_closed_form_n1():
    mu = 3
    op = op_M(IndexMatrix(((mu,),)), 1)
    co = pnm_coords(1, 1)
    expected = DiffOperator(
        co,
        {
            (1, 0): CoeffPoly.monomial(1.0, (1, 0), 2),
            (0, 2): CoeffPoly.monomial(1.0 / (8 * math.pi * mu), (1, 0), 2),
        },
    )
    assert op_equal(op, expected, tol=1e-15)


def test_op_M_structure_n2():
    op = op_M(IndexMatrix(((1, 0), (0, 1))), 2)
    assert op.order == 4
    for _alpha, poly in op.terms.items():
        for exps, _c in poly.terms.items():
            assert sum(exps[:3]) <= 2  # y-degree bounded by the det(Y) factor
    with pytest.raises(ChartError):
        op_M(IndexMatrix(((1,),)), 4)


def test_index_matrix_validation():
    with pytest.raises(ChartError):
        IndexMatrix(((0.3,),))  # not half-integral
    with pytest.raises(ChartError):
        IndexMatrix(((1, "1/2"), ("1/2", 0)))  # not positive definite
    with pytest.raises(ChartError):
        IndexMatrix((("1/2",),))  # diagonal must be integral
    m = IndexMatrix(((1, "1/2"), ("1/2", 2)))
    inv = m.inverse()
    assert inv[0][0] == Fraction(8, 7) and inv[0][1] == Fraction(-2, 7)
