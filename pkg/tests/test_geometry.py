import math

import mpmath
import numpy as np
import pytest

from minkeuclid.errors import ChartError
from minkeuclid.geometry import (
    FullIwasawaCoords,
    GoldfeldPoint,
    MetricParams,
    PartialIwasawaCoords,
    full_iwasawa,
    full_iwasawa_inverse,
    geodesic_distance,
    geodesic_distance_pair,
    geodesic_point,
    goldfeld_decompose,
    goldfeld_left_act,
    goldfeld_to_spd,
    metric_eval,
    partial_iwasawa,
    partial_iwasawa_inverse,
    push_tangent,
    siegel_volume,
    sl_chart_from_point,
    sl_point_from_chart,
    spd_to_goldfeld,
    volume_density,
)
from minkeuclid.groups import MinkowskiEuclidPoint, glnm_act, random_affine
from minkeuclid.matcore import (
    SpdPoint,
    UnitDetSpdPoint,
    random_orthogonal_haar,
    random_spd,
    random_unit_det_spd,
)


def sym_tangent(n, seed):
    rng = np.random.default_rng(seed)
    s = rng.normal(size=(n, n))
    return (s + s.T) / 2.0


# ---------------------------------------------------------------------------
# metric


def test_metric_cone_identity_trace():
    val = metric_eval(SpdPoint.identity(3), np.eye(3), np.eye(3), MetricParams(), "cone")
    assert val == pytest.approx(3.0)


def test_metric_pnm_basis_vector():
    p = MinkowskiEuclidPoint.make(np.eye(2), np.zeros((1, 2)))
    e11 = np.zeros((1, 2))
    e11[0, 0] = 1.0
    val = metric_eval(p, (np.zeros((2, 2)), e11), (np.zeros((2, 2)), e11), MetricParams(), "pnm")
    assert val == pytest.approx(1.0)


def test_metric_positive_and_symmetric():
    p = MinkowskiEuclidPoint.make(random_spd(2, 3).matrix, np.zeros((2, 2)))
    t1 = (sym_tangent(2, 1), np.random.default_rng(1).normal(size=(2, 2)))
    t2 = (sym_tangent(2, 2), np.random.default_rng(2).normal(size=(2, 2)))
    m12 = metric_eval(p, t1, t2, MetricParams(), "pnm")
    m21 = metric_eval(p, t2, t1, MetricParams(), "pnm")
    assert m12 == pytest.approx(m21)
    assert metric_eval(p, t1, t1, MetricParams(), "pnm") > 0


@pytest.mark.parametrize("space", ["cone", "pnm"])
def test_metric_invariance_under_pullback(space):
    for seed in range(100):
        if space == "cone":
            y = random_spd(3, seed)
            g = random_affine(3, 1, seed + 10_000)
            t1, t2 = sym_tangent(3, 2 * seed), sym_tangent(3, 2 * seed + 1)
            base = metric_eval(y, t1, t2, MetricParams(c=2.0), space)
            gy = SpdPoint.from_matrix(g.A @ y.matrix @ g.A.T)
            moved = metric_eval(
                gy,
                push_tangent(g, t1, space),
                push_tangent(g, t2, space),
                MetricParams(c=2.0),
                space,
            )
        else:
            rng = np.random.default_rng(seed)
            p = MinkowskiEuclidPoint.make(random_spd(2, seed).matrix, rng.normal(size=(2, 2)))
            g = random_affine(2, 2, seed + 20_000)
            t1 = (sym_tangent(2, 3 * seed), rng.normal(size=(2, 2)))
            t2 = (sym_tangent(2, 3 * seed + 1), rng.normal(size=(2, 2)))
            base = metric_eval(p, t1, t2, MetricParams(A=1.5, B=0.5), space)
            moved = metric_eval(
                glnm_act(g, p),
                push_tangent(g, t1, space),
                push_tangent(g, t2, space),
                MetricParams(A=1.5, B=0.5),
                space,
            )
        assert moved == pytest.approx(base, rel=1e-9, abs=1e-12)


# ---------------------------------------------------------------------------
# volume densities


def test_volume_density_examples():
    assert volume_density("cone_dv_n", SpdPoint.identity(2)) == pytest.approx(1.0)
    p = MinkowskiEuclidPoint.make(np.diag([2.0, 2.0]), np.zeros((1, 2)))
    assert volume_density("pnm_dv", p) == pytest.approx(4.0 ** (-2.0), rel=1e-12)
    z = GoldfeldPoint(np.eye(3), np.array([0.7, 1.3]))
    expected = 0.7 ** (-3 * 2 - 1) * 1.3 ** (-3 * 1 - 1)
    assert volume_density("goldfeld_dstar", z) == pytest.approx(expected, rel=1e-12)


def test_volume_density_chart_violation():
    with pytest.raises(ChartError):
        volume_density("sl_dmu_n", [-1.0, 0.0], n=2)


def test_siegel_volume_values():
    assert siegel_volume(1) == pytest.approx(1.0)
    assert siegel_volume(2) == pytest.approx(math.pi / 3.0, rel=1e-12)
    zeta3 = float(mpmath.zeta(3))
    assert siegel_volume(3) == pytest.approx(zeta3 / 4.0, rel=1e-12)


def numeric_jacobian(fn, x0, h=1e-5):
    x0 = np.asarray(x0, dtype=float)
    d = x0.size
    cols = []
    for i in range(d):
        e = np.zeros(d)
        e[i] = h
        cols.append((fn(x0 + e) - fn(x0 - e)) / (2 * h))
    return np.column_stack(cols)


def _pack_sym(y):
    n = y.shape[0]
    return np.array([y[i, j] for i in range(n) for j in range(i, n)])


def _unpack_sym(vec, n):
    y = np.zeros((n, n))
    k = 0
    for i in range(n):
        for j in range(i, n):
            y[i, j] = vec[k]
            y[j, i] = vec[k]
            k += 1
    return y


def test_cone_density_invariance_with_analytic_jacobian():
    n = 2
    for seed in range(10):
        g = random_affine(n, 1, seed + 99)
        y0 = random_spd(n, seed)

        def move(vec):
            y = _unpack_sym(vec, n)
            return _pack_sym(g.A @ y @ g.A.T)

        jac = numeric_jacobian(move, _pack_sym(y0.matrix))
        det_num = abs(np.linalg.det(jac))
        det_analytic = abs(np.linalg.det(g.A)) ** (n + 1)
        assert det_num == pytest.approx(det_analytic, rel=1e-6)
        moved = SpdPoint.from_matrix(g.A @ y0.matrix @ g.A.T)
        lhs = volume_density("cone_dv_n", moved) * det_num
        assert lhs == pytest.approx(volume_density("cone_dv_n", y0), rel=1e-6)


# ---------------------------------------------------------------------------
# geodesics


def test_geodesic_examples():
    assert geodesic_distance(SpdPoint.identity(3)) == 0.0
    y = SpdPoint.from_matrix(np.diag([np.exp(2.0), np.exp(-2.0)]))
    assert geodesic_distance(y) == pytest.approx(math.sqrt(8.0), rel=1e-12)
    mid = geodesic_point(y, 0.5)
    assert np.allclose(mid.matrix, np.diag([np.e, 1 / np.e]), atol=1e-10)


def test_geodesic_endpoints():
    for seed in range(20):
        y = random_spd(3, seed)
        assert np.max(np.abs(geodesic_point(y, 0.0).matrix - np.eye(3))) <= 1e-8
        assert np.max(np.abs(geodesic_point(y, 1.0).matrix - y.matrix)) <= 1e-8 * max(
            1.0, np.max(np.abs(y.matrix))
        )


def test_geodesic_congruence_consistency():
    for seed in range(30):
        y = random_spd(3, seed)
        k = random_orthogonal_haar(3, seed + 1)
        moved = SpdPoint.from_matrix(k @ y.matrix @ k.T)
        assert geodesic_distance(moved) == pytest.approx(geodesic_distance(y), abs=1e-9)


def test_geodesic_pair_reduces_to_identity_based():
    y = random_spd(3, 5)
    assert geodesic_distance_pair(SpdPoint.identity(3), y) == pytest.approx(
        geodesic_distance(y), rel=1e-10
    )


# ---------------------------------------------------------------------------
# charts


def test_partial_iwasawa_identity():
    c = partial_iwasawa(UnitDetSpdPoint.identity(3))
    assert c.v == pytest.approx(1.0)
    assert np.allclose(c.x, 0.0)
    assert np.allclose(c.W.matrix, np.eye(2))


def test_partial_iwasawa_worked_example():
    y = UnitDetSpdPoint.from_matrix([[2.0, 2.0], [2.0, 2.5]])
    c = partial_iwasawa(y)
    assert c.v == pytest.approx(0.5)
    assert np.allclose(c.x, [1.0])
    assert np.allclose(c.W.matrix, [[1.0]])


@pytest.mark.parametrize("n", [2, 3, 4])
def test_partial_iwasawa_roundtrip(n):
    for seed in range(34):
        y = random_unit_det_spd(n, seed)
        back = partial_iwasawa_inverse(partial_iwasawa(y))
        assert np.max(np.abs(back.matrix - y.matrix)) <= 1e-9 * max(
            1.0, np.max(np.abs(y.matrix))
        )


def test_full_iwasawa_identity():
    c = full_iwasawa(UnitDetSpdPoint.identity(3))
    assert np.allclose(c.ys, 1.0)
    assert np.allclose(c.x, np.eye(3))
    assert c.y == pytest.approx(1.0)


def test_full_iwasawa_consistent_with_partial_at_n2():
    for seed in range(20):
        y = random_unit_det_spd(2, seed)
        c_full = full_iwasawa(y)
        c_part = partial_iwasawa(y)
        # both charts reconstruct the same point; at n=2, y_1 equals v
        assert c_full.ys[0] == pytest.approx(c_part.v, rel=1e-9)
        back = full_iwasawa_inverse(c_full)
        assert np.max(np.abs(back.matrix - y.matrix)) <= 1e-9


@pytest.mark.parametrize("n", [2, 3, 4])
def test_full_iwasawa_roundtrip_and_scalar_invariant(n):
    for seed in range(34):
        y = random_unit_det_spd(n, seed)
        c = full_iwasawa(y)
        back = full_iwasawa_inverse(c)
        assert np.max(np.abs(back.matrix - y.matrix)) <= 1e-9 * max(
            1.0, np.max(np.abs(y.matrix))
        )
        # derived scalar obeys the product formula by construction
        expected = np.prod(c.ys ** (2.0 * (n - np.arange(1, n))))
        assert c.y == pytest.approx(expected, rel=1e-9)


def test_sl_chart_roundtrip():
    for n in (2, 3, 4):
        for seed in range(10):
            y = random_unit_det_spd(n, seed)
            coords = sl_chart_from_point(y)
            assert coords.shape == (n * (n + 1) // 2 - 1,)
            back = sl_point_from_chart(coords, n)
            assert np.max(np.abs(back.matrix - y.matrix)) <= 1e-9


def test_goldfeld_identity():
    z, k, r = goldfeld_decompose(np.eye(3))
    assert np.allclose(z.x, np.eye(3))
    assert np.allclose(z.ys, 1.0)
    assert np.allclose(k, np.eye(3))
    assert r == pytest.approx(1.0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_goldfeld_roundtrip(n):
    for seed in range(34):
        rng = np.random.default_rng(seed)
        g = rng.normal(size=(n, n))
        if abs(np.linalg.det(g)) < 1e-3:
            continue
        z, k, r = goldfeld_decompose(g)
        assert np.max(np.abs(k @ k.T - np.eye(n))) <= 1e-9
        assert r > 0
        re = z.matrix @ k * r
        assert np.max(np.abs(re - g)) <= 1e-9 * max(1.0, np.max(np.abs(g)))


def test_goldfeld_left_translation_compatibility():
    # moving z by g matches the congruence action on the associated cone point
    for seed in range(50):
        rng = np.random.default_rng(seed)
        g = rng.normal(size=(3, 3))
        if abs(np.linalg.det(g)) < 1e-2:
            continue
        z = spd_to_goldfeld(random_unit_det_spd(3, seed))
        moved = goldfeld_left_act(g, z)
        lhs = goldfeld_to_spd(moved).matrix
        y = goldfeld_to_spd(z).matrix
        gyg = g @ y @ g.T
        rhs = gyg / np.linalg.det(gyg) ** (1.0 / 3)
        assert np.max(np.abs(lhs - rhs)) <= 1e-8 * max(1.0, np.max(np.abs(rhs)))


def test_spd_to_goldfeld_roundtrip():
    for seed in range(20):
        y = random_unit_det_spd(3, seed)
        z = spd_to_goldfeld(y)
        assert np.max(np.abs(goldfeld_to_spd(z).matrix - y.matrix)) <= 1e-9
