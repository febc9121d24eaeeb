"""Evaluable scalar functions on charts, with optional Taylor-mode jets.

A :class:`ChartFn` bundles a pointwise evaluator with an optional exact jet
evaluator; operator application uses the jet evaluator when present and
falls back to finite differences otherwise. Built-ins cover the power
functions, the triangular-model eigenfunctions, smooth invariance probes,
and the pullback of any function along a group element (the action is
affine in the chart coordinates, so pullback jets stay exact).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..errors import DimensionMismatch
from ..groups import AffineGroupElement
from .coords import CoordinateSystem, coords_to_point, point_to_coords
from .jets import Jet, jet_det, seed_jets


@dataclass(frozen=True)
class ChartFn:
    """Scalar function of the chart coordinates.

    ``value`` maps a coordinate vector to a complex number; ``jet`` (when
    given) maps a list of seed jets to the jet of the function.
    """

    coords: CoordinateSystem
    value: Callable
    jet: Optional[Callable] = None
    label: str = field(default="")


# ---------------------------------------------------------------------------
# jet assembly helpers


def y_jets(coords: CoordinateSystem, seeds) -> list:
    """Symmetric matrix of jets for the Y block of the pnm chart."""
    n = coords.n
    return [[seeds[coords.y_index(i, j)] for j in range(n)] for i in range(n)]


def v_jets(coords: CoordinateSystem, seeds) -> list:
    return [
        [seeds[coords.v_index(k, l)] for l in range(coords.n)]
        for k in range(coords.m)
    ]


def leading_minor_jets(ymat: list) -> list:
    """Jets of the upper-left j x j determinants, j = 1..n."""
    n = len(ymat)
    return [
        jet_det([row[: j + 1] for row in ymat[: j + 1]]) for j in range(n)
    ]


def trailing_minor_jets(ymat: list) -> list:
    """Jets of the lower-right k x k determinants, k = 1..n."""
    n = len(ymat)
    return [
        jet_det([row[n - k :] for row in ymat[n - k :]]) for k in range(1, n + 1)
    ]


def iwasawa_matrix_jets(coords: CoordinateSystem, seeds) -> list:
    """Reconstruct the determinant-one matrix of the recursive chart as jets."""

    def block(size: int) -> list:
        if size == 1:
            one = Jet.constant(1.0, coords.dim, seeds[0].order)
            return [[one]]
        inner = block(size - 1)
        v = seeds[coords.v_level_index(size)]
        xs = [seeds[coords.x_level_index(size, i)] for i in range(size - 1)]
        vinv = v.power(-1)
        vfrac = v.power(1.0 / (size - 1))
        out = [[None] * size for _ in range(size)]
        out[0][0] = vinv
        for j in range(1, size):
            out[0][j] = vinv * xs[j - 1]
            out[j][0] = out[0][j]
        for i in range(1, size):
            for j in range(i, size):
                out[i][j] = vinv * xs[i - 1] * xs[j - 1] + vfrac * inner[i - 1][j - 1]
                out[j][i] = out[i][j]
        return out

    return block(coords.n)


# ---------------------------------------------------------------------------
# built-in functions on the pnm chart


def _leading_minors_numeric(y: np.ndarray) -> np.ndarray:
    n = y.shape[0]
    return np.array([np.linalg.det(y[: j + 1, : j + 1]) for j in range(n)])


def ps_fn(s, coords: CoordinateSystem) -> ChartFn:
    """Power function: product of leading-minor powers ``prod det(Y_j)^s_j``.

    ``s`` may be shorter than ``n`` (the determinant-one convention uses
    ``n - 1`` exponents).
    """
    s = np.asarray(s, dtype=complex).reshape(-1)
    if coords.kind != "pnm" or len(s) > coords.n:
        raise DimensionMismatch("power exponents do not fit the chart")

    def value(point):
        y, _ = coords_to_point(coords, point)
        minors = _leading_minors_numeric(y)
        out = 1.0 + 0.0j
        for j, sj in enumerate(s):
            out *= complex(minors[j]) ** sj
        return out

    def jet(seeds):
        minors = leading_minor_jets(y_jets(coords, seeds))
        out = Jet.constant(1.0, coords.dim, seeds[0].order)
        for j, sj in enumerate(s):
            out = out * minors[j].power(sj)
        return out

    return ChartFn(coords, value, jet, label=f"p_s{tuple(s)}")


def phi_fn(z, coords: CoordinateSystem) -> ChartFn:
    """Triangular character through the Cholesky diagonal: the j-th factor is
    ``t_jj^(2 z_j + j - (n+1)/2)`` with ``t_jj^2`` a ratio of minors."""
    z = np.asarray(z, dtype=complex).reshape(-1)
    n = coords.n
    if coords.kind != "pnm" or len(z) != n:
        raise DimensionMismatch("phi exponents must have length n")
    # exponent on the minor ratio (det Y_j / det Y_{j-1})
    expo = [z[j] + (j + 1 - (n + 1) / 2.0) / 2.0 for j in range(n)]

    def value(point):
        y, _ = coords_to_point(coords, point)
        minors = np.concatenate([[1.0], _leading_minors_numeric(y)])
        out = 1.0 + 0.0j
        for j in range(n):
            out *= complex(minors[j + 1] / minors[j]) ** expo[j]
        return out

    def jet(seeds):
        minors = leading_minor_jets(y_jets(coords, seeds))
        out = minors[0].power(expo[0])
        for j in range(1, n):
            out = out * (minors[j] / minors[j - 1]).power(expo[j])
        return out

    return ChartFn(coords, value, jet, label=f"phi_z{tuple(z)}")


def probe_fn(coords: CoordinateSystem, which: str = "gauss") -> ChartFn:
    """Smooth built-in probes for invariance residuals."""
    if coords.kind != "pnm":
        raise DimensionMismatch("probes are defined on the pnm chart")
    n, m = coords.n, coords.m
    if which == "gauss":

        def value(point):
            y, v = coords_to_point(coords, point)
            return complex(np.exp(-np.trace(y) - np.sum(v**2)))

        def jet(seeds):
            ym = y_jets(coords, seeds)
            acc = Jet.constant(0.0, coords.dim, seeds[0].order)
            for i in range(n):
                acc = acc - ym[i][i]
            for k in range(m):
                for l in range(n):
                    s = seeds[coords.v_index(k, l)]
                    acc = acc - s * s
            return acc.exp()

    elif which == "detexp":

        def value(point):
            y, v = coords_to_point(coords, point)
            return complex(np.linalg.det(y) ** 0.75 * np.exp(-np.sum(v)))

        def jet(seeds):
            d = jet_det(y_jets(coords, seeds)).power(0.75)
            acc = Jet.constant(0.0, coords.dim, seeds[0].order)
            for k in range(m):
                for l in range(n):
                    acc = acc - seeds[coords.v_index(k, l)]
            return d * acc.exp()

    else:
        raise DimensionMismatch(f"unknown probe {which!r}")
    return ChartFn(coords, value, jet, label=f"probe:{which}")


def pushforward_fn(fn: ChartFn, g: AffineGroupElement) -> ChartFn:
    """The pullback ``p -> f(g . p)`` as a chart function.

    The action is affine in the chart coordinates, so the jet evaluation is
    exact: seed jets are pushed through ``Y -> A Y A'``, ``V -> (V + a) A'``.
    """
    coords = fn.coords
    if coords.kind != "pnm":
        raise DimensionMismatch("pushforward needs the pnm chart")
    if g.n != coords.n or g.m != coords.m:
        raise DimensionMismatch("group element does not match the chart")
    A = g.A
    a = g.a
    n, m = coords.n, coords.m

    def value(point):
        y, v = coords_to_point(coords, point)
        y2 = A @ y @ A.T
        v2 = (v + a) @ A.T
        return fn.value(point_to_coords(coords, (y2 + y2.T) / 2.0, v2))

    def jet(seeds):
        ym = y_jets(coords, seeds)
        vm = v_jets(coords, seeds)
        order = seeds[0].order
        zero = Jet.constant(0.0, coords.dim, order)

        def lincomb(entries):
            acc = zero
            for coeff, j in entries:
                if coeff != 0.0:
                    acc = acc + j * coeff
            return acc

        new_seeds = []
        for i in range(n):
            for j in range(i, n):
                entries = [
                    (A[i, r] * A[j, c], ym[r][c]) for r in range(n) for c in range(n)
                ]
                new_seeds.append(lincomb(entries))
        for k in range(m):
            for l in range(n):
                entries = [(A[l, c], vm[k][c]) for c in range(n)]
                const = sum(a[k, c] * A[l, c] for c in range(n))
                new_seeds.append(lincomb(entries) + const)
        return fn.jet(new_seeds)

    return ChartFn(coords, value, jet if fn.jet else None, label=f"{fn.label}∘g")


# ---------------------------------------------------------------------------
# built-ins on the recursive chart


def inu_fn(nu, n: int, coords: CoordinateSystem, b_matrix) -> ChartFn:
    """Triangular-model power function composed with the recursive chart.

    The y-parameters come out of trailing minors: ``y_i^2 = t_{i+1} t_{i-1} /
    t_i^2`` with ``t_k`` the lower-right k x k determinant, which keeps the
    jet path exact.
    """
    nu = np.asarray(nu, dtype=complex).reshape(-1)
    if coords.kind != "iwasawa_sl" or coords.n != n or len(nu) != n - 1:
        raise DimensionMismatch("type vector does not fit the chart")
    b = np.asarray(b_matrix, dtype=float)
    expo = b @ nu  # exponent on y_i is sum_j b_ij nu_j

    def value(point):
        seeds = seed_jets(np.asarray(point, float), 0)
        ymat = iwasawa_matrix_jets(coords, seeds)
        t = [jj.value.real for jj in trailing_minor_jets(ymat)]
        t = np.concatenate([[1.0], t])
        out = 1.0 + 0.0j
        for i in range(1, n):
            y_i = np.sqrt(t[i + 1] * t[i - 1]) / t[i]
            out *= complex(y_i) ** expo[i - 1]
        return out

    def jet(seeds):
        ymat = iwasawa_matrix_jets(coords, seeds)
        t = trailing_minor_jets(ymat)
        t = [Jet.constant(1.0, coords.dim, seeds[0].order)] + t
        out = Jet.constant(1.0, coords.dim, seeds[0].order)
        for i in range(1, n):
            ratio = t[i + 1] * t[i - 1] * t[i].power(-2)
            out = out * ratio.power(0.5 * expo[i - 1])
        return out

    return ChartFn(coords, value, jet, label=f"I_nu{tuple(nu)}")
