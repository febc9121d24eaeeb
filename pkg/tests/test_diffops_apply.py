import numpy as np
import pytest

from minkeuclid.diffops import (
    ChartFn,
    DiffOperator,
    Jet,
    eigenvalue_extract,
    finite_difference_jet,
    inu_fn,
    invariance_residual,
    iwasawa_coords,
    jet_of,
    op_apply,
    op_commutator,
    op_delta,
    op_laplace_pnm,
    op_laplace_sl_iwasawa,
    phi_fn,
    pnm_coords,
    point_to_coords,
    probe_fn,
    ps_fn,
    pushforward_fn,
    seed_jets,
    commutes_with_all,
)
from minkeuclid.errors import JetOrderError
from minkeuclid.geometry import sl_chart_from_point, spd_to_goldfeld
from minkeuclid.groups import random_affine
from minkeuclid.matcore import random_spd, random_unit_det_spd


def random_pnm_points(n, m, count, seed0=0):
    co = pnm_coords(n, m)
    rng = np.random.default_rng(seed0)
    pts = []
    for i in range(count):
        y = random_spd(n, seed=seed0 + 31 * i + 1).matrix
        v = rng.normal(size=(m, n))
        pts.append(point_to_coords(co, y, v))
    return co, pts


# ---------------------------------------------------------------------------
# jets


def test_jet_arithmetic_matches_calculus():
    # f(x, y) = x^2 y + exp(y) at (2, 0.5): check a few derivative values
    seeds = seed_jets([2.0, 0.5], order=3)
    x, y = seeds
    f = x * x * y + y.exp()
    e = np.exp(0.5)
    assert f.value == pytest.approx(2.0 + e)
    assert f.derivative((1, 0)) == pytest.approx(2.0)  # 2xy
    assert f.derivative((0, 1)) == pytest.approx(4.0 + e)  # x^2 + e^y
    assert f.derivative((1, 1)) == pytest.approx(4.0)  # 2x
    assert f.derivative((2, 1)) == pytest.approx(2.0)
    assert f.derivative((0, 3)) == pytest.approx(e)


def test_jet_power_and_log():
    (x,) = seed_jets([1.7], order=4)
    g = x.power(2.5)
    assert g.derivative((1,)) == pytest.approx(2.5 * 1.7**1.5)
    assert g.derivative((2,)) == pytest.approx(2.5 * 1.5 * 1.7**0.5)
    lg = x.log()
    assert lg.derivative((2,)) == pytest.approx(-1.0 / 1.7**2)
    inv = x.inverse()
    assert inv.derivative((3,)) == pytest.approx(-6.0 / 1.7**4)


def test_jet_insufficient_order_reported():
    (x,) = seed_jets([1.0], order=2)
    with pytest.raises(JetOrderError):
        x.derivative((3,))
    co = pnm_coords(1)
    with pytest.raises(JetOrderError):
        op_apply(op_delta(1, 1), ps_fn([1.0], co), [2.0], jet_order=0)


def test_finite_difference_agrees_with_native_on_ps():
    from conftest import well_conditioned_spd

    co = pnm_coords(2, 0)
    fn = ps_fn([0.8, -0.6], co)
    for i in range(20):
        pt = point_to_coords(co, well_conditioned_spd(2, seed=160 + i).matrix)
        native = jet_of(fn, pt, order=2)
        fd = finite_difference_jet(fn.value, pt, order=2, step=0.005)
        for alpha, c in native.coeffs.items():
            approx = fd.coeffs.get(alpha, 0.0)
            assert abs(approx - c) <= 1e-6 * max(1.0, abs(c), abs(approx))


# ---------------------------------------------------------------------------
# op_apply basics


def test_identity_operator_returns_value():
    co = pnm_coords(2)
    fn = ps_fn([0.5, 0.5], co)
    pt = point_to_coords(co, random_spd(2, 3).matrix)
    assert op_apply(DiffOperator.identity(co), fn, pt) == pytest.approx(fn.value(pt))


def test_euler_operator_on_power():
    co = pnm_coords(1)
    s = 1.3
    fn = ps_fn([s], co)
    for y0 in (0.5, 1.0, 2.7):
        val = op_apply(op_delta(1, 1), fn, [y0])
        assert val == pytest.approx(s * y0**s, rel=1e-12)


def test_delta1_on_det_power():
    for n in (1, 2, 3):
        co = pnm_coords(n)
        s = 0.7
        fn = ps_fn([0.0] * (n - 1) + [s], co)
        pt = point_to_coords(co, random_spd(n, seed=3).matrix)
        val = op_apply(op_delta(1, n), fn, pt)
        assert val == pytest.approx(n * s * fn.value(pt), rel=1e-10)


def test_op_apply_linear_in_operator_and_function():
    co = pnm_coords(2)
    f1 = ps_fn([0.4, 0.2], co)
    f2 = ps_fn([0.1, 0.9], co)
    d1 = op_delta(1, 2)
    d2 = op_delta(2, 2)
    pt = point_to_coords(co, random_spd(2, 11).matrix)
    lhs = op_apply(d1 + d2.scale(3), f1, pt)
    rhs = op_apply(d1, f1, pt) + 3 * op_apply(d2, f1, pt)
    assert lhs == pytest.approx(rhs, rel=1e-12)
    both = ChartFn(
        co,
        lambda p: f1.value(p) + 2 * f2.value(p),
        lambda s: f1.jet(s) + f2.jet(s) * 2,
    )
    lhs = op_apply(d2, both, pt)
    rhs = op_apply(d2, f1, pt) + 2 * op_apply(d2, f2, pt)
    assert lhs == pytest.approx(rhs, rel=1e-12)


# ---------------------------------------------------------------------------
# eigenvalues


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ps_common_eigenfunction(n):
    co = pnm_coords(n)
    rng = np.random.default_rng(n)
    s = rng.uniform(0.2, 1.1, size=n)
    fn = ps_fn(s, co)
    pts = [point_to_coords(co, random_spd(n, seed=40 + 7 * i).matrix) for i in range(5)]
    for j in range(1, n + 1):
        cv = eigenvalue_extract(op_delta(j, n), fn, pts)
        assert cv.constancy_residual <= 1e-8


def test_phi_z_eigenvalue_n1_exact():
    co = pnm_coords(1)
    z1 = 0.37
    fn = phi_fn([z1], co)
    cv = eigenvalue_extract(op_delta(1, 1), fn, [[0.9], [1.7], [2.3]])
    assert abs(cv.value - z1) <= 1e-10
    assert cv.constancy_residual <= 1e-10


def test_inu_eigenfunction_of_metric_laplacian():
    for n in (2, 3):
        co = iwasawa_coords(n)
        b = np.array(
            [
                [i * j if i + j <= n else (n - i) * (n - j) for j in range(1, n)]
                for i in range(1, n)
            ]
        )
        nu = np.array([0.41, 0.23][: n - 1])
        fn = inu_fn(nu, n, co, b)
        d = op_laplace_sl_iwasawa(n, "metric")
        pts = [sl_chart_from_point(random_unit_det_spd(n, 50 + i)) for i in range(5)]
        cv = eigenvalue_extract(d, fn, pts)
        assert cv.constancy_residual <= 1e-6


def test_inu_value_matches_triangular_route():
    n = 3
    co = iwasawa_coords(n)
    b = np.array([[1, 2], [2, 1]])
    nu = np.array([0.3, 0.55])
    fn = inu_fn(nu, n, co, b)
    for seed in range(5):
        y = random_unit_det_spd(n, seed)
        z = spd_to_goldfeld(y)
        direct = np.prod(z.ys.astype(complex) ** (b @ nu))
        assert fn.value(sl_chart_from_point(y)) == pytest.approx(direct, rel=1e-9)


def test_eisenstein_style_eigenvalue_on_v_power():
    co = iwasawa_coords(2)
    s = 3.0
    fn = ChartFn(co, lambda p: complex(p[0]) ** s, lambda seeds: seeds[0].power(s))
    d = op_laplace_sl_iwasawa(2, "v_scaled")
    cv = eigenvalue_extract(d, fn, [[0.9, 0.1], [1.8, -0.4], [3.0, 0.2]])
    assert cv.value == pytest.approx(0.5 * s * (s - 2), rel=1e-10)
    assert cv.constancy_residual <= 1e-9


# ---------------------------------------------------------------------------
# invariance


def test_invariance_residuals_of_core_operators():
    for n, m in [(2, 1), (2, 2), (3, 1)]:
        co, pts = random_pnm_points(n, m, 3, seed0=17)
        fn = probe_fn(co, "gauss")
        ops = [
            op_delta(2, n, m),
            op_laplace_pnm(1, 1, n, m),
        ]
        from minkeuclid.diffops import op_D, op_L, op_Omega

        ops.append(op_D(1, n, m))
        ops.append(op_L(1, n, m))
        ops.append(op_Omega(0, 1, 1, n, m))
        if n >= 2:
            ops.append(op_Omega(1, 1, 1, n, m))
        for d in ops:
            for seed in range(4):
                g = random_affine(n, m, seed=700 + seed)
                assert invariance_residual(d, g, fn, pts) <= 1e-7


def test_pushforward_value_consistency():
    co, pts = random_pnm_points(2, 1, 4, seed0=23)
    fn = probe_fn(co, "detexp")
    g = random_affine(2, 1, seed=5)
    fg = pushforward_fn(fn, g)
    from minkeuclid.diffops.coords import coords_to_point
    from minkeuclid.groups import MinkowskiEuclidPoint, glnm_act
    from minkeuclid.matcore import SpdPoint

    for pt in pts:
        y, v = coords_to_point(co, pt)
        moved = glnm_act(g, MinkowskiEuclidPoint(SpdPoint.from_matrix(y), v))
        expected = fn.value(point_to_coords(co, moved.Y.matrix, moved.V))
        assert fg.value(pt) == pytest.approx(expected, rel=1e-12)


def test_commutes_with_all_residuals():
    d2 = op_delta(2, 2, 1)
    d1 = op_delta(1, 2, 1)
    from minkeuclid.diffops import op_Omega

    res = commutes_with_all(d2, [d1, op_Omega(0, 1, 1, 2, 1)])
    assert res[0] == 0.0
    assert res[1] > 0.0  # delta_2 does not commute with Omega
