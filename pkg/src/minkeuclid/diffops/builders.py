"""Constructors for the invariant operators.

Everything is produced by operator-matrix calculus: the matrix ``E`` with
entries built from coordinate multiplications and symmetrized derivatives is
raised to powers under non-commutative composition, and traces / entries /
determinants of the result give the named operators in exact normal form.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import ChartError, DimensionMismatch
from .coords import CoordinateSystem, iwasawa_coords, pnm_coords
from .operator import (
    DiffOperator,
    mat_mul,
    mat_power,
    mat_trace,
    mat_transpose,
)
from .poly import CoeffPoly

HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# elementary operator matrices on the pnm chart


def y_matrix(coords: CoordinateSystem) -> list:
    """Multiplication operators by the entries of Y."""
    n = coords.n
    return [
        [
            DiffOperator.multiplication(
                CoeffPoly.variable(coords.y_index(i, j), coords.dim), coords
            )
            for j in range(n)
        ]
        for i in range(n)
    ]


def dy_matrix(coords: CoordinateSystem) -> list:
    """Symmetrized derivative matrix: entry (i,j) is (1+delta_ij)/2 d/dy_ij."""
    n = coords.n
    return [
        [
            DiffOperator.partial(
                coords,
                coords.y_index(i, j),
                scalar=Fraction(1) if i == j else HALF,
            )
            for j in range(n)
        ]
        for i in range(n)
    ]


def dv_matrix(coords: CoordinateSystem) -> list:
    """Plain derivative matrix d/dV, shape m x n."""
    return [
        [DiffOperator.partial(coords, coords.v_index(k, l)) for l in range(coords.n)]
        for k in range(coords.m)
    ]


def det_y_poly(coords: CoordinateSystem) -> CoeffPoly:
    """det(Y) as an exact polynomial coefficient."""
    n = coords.n
    acc = CoeffPoly.zero(coords.dim)
    for perm in itertools.permutations(range(n)):
        sign = _perm_sign(perm)
        mono = CoeffPoly.constant(Fraction(sign), coords.dim)
        for i in range(n):
            mono = mono * CoeffPoly.variable(coords.y_index(i, perm[i]), coords.dim)
        acc = acc + mono
    return acc


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# ---------------------------------------------------------------------------
# trace operators


def op_delta(j: int, n: int, m: int = 0) -> DiffOperator:
    """Trace of the j-th power of ``Y d/dY`` (the classical generators)."""
    if not 1 <= j <= n:
        raise ChartError(f"delta index must satisfy 1 <= j <= n, got {j}")
    coords = pnm_coords(n, m)
    e = mat_mul(y_matrix(coords), dy_matrix(coords))
    return mat_trace(mat_power(e, j))


def op_D(j: int, n: int, m: int) -> DiffOperator:
    """Trace of the j-th power of ``2 Y d/dY`` on the pair space."""
    if not 1 <= j <= n:
        raise ChartError(f"index must satisfy 1 <= j <= n, got {j}")
    coords = pnm_coords(n, m)
    e = mat_mul(y_matrix(coords), dy_matrix(coords))
    e = [[entry.scale(2) for entry in row] for row in e]
    return mat_trace(mat_power(e, j))


def op_Omega(k: int, p: int, q: int, n: int, m: int) -> DiffOperator:
    """(p,q) entry of ``dV (2Y dY)^k Y dV'`` (indices 1-based, p <= q)."""
    if not 0 <= k <= n - 1:
        raise ChartError(f"k must satisfy 0 <= k <= n-1, got {k}")
    if not 1 <= p <= q <= m:
        raise ChartError(f"need 1 <= p <= q <= m, got p={p}, q={q}")
    coords = pnm_coords(n, m)
    dv = dv_matrix(coords)
    mid = y_matrix(coords)
    if k > 0:
        e = mat_mul(y_matrix(coords), dy_matrix(coords))
        e = [[entry.scale(2) for entry in row] for row in e]
        mid = mat_mul(mat_power(e, k), mid)
    full = mat_mul(mat_mul(dv, mid), mat_transpose(dv))
    return full[p - 1][q - 1]


def op_L(p: int, n: int, m: int) -> DiffOperator:
    """Trace of the p-th power of ``Y dV' dV``."""
    if not 1 <= p <= m:
        raise ChartError(f"p must satisfy 1 <= p <= m, got {p}")
    coords = pnm_coords(n, m)
    dv = dv_matrix(coords)
    f = mat_mul(y_matrix(coords), mat_mul(mat_transpose(dv), dv))
    return mat_trace(mat_power(f, p))


# ---------------------------------------------------------------------------
# Laplacians


def op_laplace_cone(c, n: int, m: int = 0) -> DiffOperator:
    """Cone Laplacian: delta_2 scaled by 1/c."""
    if c <= 0:
        raise ChartError("metric constant must be positive")
    return op_delta(2, n, m).scale(_inv_scalar(c))


def op_laplace_pnm(a, b, n: int, m: int, last_sum: str = "upper") -> DiffOperator:
    """Invariant Laplacian of the pair space.

    ``(1/A) delta_2 - (m/2A) delta_1 + (1/B) sum Omega^(0)``, the final sum
    running over k <= p as printed (``last_sum="upper"``) or over the
    diagonal only (``"diagonal"``); each summand is invariant either way.
    """
    if a <= 0 or b <= 0:
        raise ChartError("metric constants must be positive")
    out = op_delta(2, n, m).scale(_inv_scalar(a))
    out = out - op_delta(1, n, m).scale(_ratio_scalar(m, 2, a))
    inv_b = _inv_scalar(b)
    for k in range(1, m + 1):
        for p in range(k, m + 1):
            if last_sum == "diagonal" and p != k:
                continue
            out = out + op_Omega(0, k, p, n, m).scale(inv_b)
    return out


def _inv_scalar(c):
    if isinstance(c, (int, Fraction)):
        return Fraction(1, 1) / Fraction(c)
    return 1.0 / c


def _ratio_scalar(num, den, c):
    if isinstance(c, (int, Fraction)):
        return Fraction(num, den) / Fraction(c)
    return num / (den * c)


def symbolic_unit_det_block(coords: CoordinateSystem, size: int) -> list:
    """The size x size determinant-one matrix of the recursive chart, as
    coefficient polynomials in the coordinates of levels size+1, ..., 2."""
    dim = coords.dim
    if size == 1:
        return [[CoeffPoly.constant(Fraction(1), dim)]]
    # a block of size s is split by the level-s coordinates
    inner = symbolic_unit_det_block(coords, size - 1)
    vixd = coords.v_level_index(size)
    xs = [coords.x_level_index(size, i) for i in range(size - 1)]
    vinv = CoeffPoly.variable(vixd, dim, power=-1)
    vfrac = CoeffPoly.variable(vixd, dim, power=Fraction(1, size - 1))
    out = [[None] * size for _ in range(size)]
    out[0][0] = vinv
    for j in range(1, size):
        out[0][j] = vinv * CoeffPoly.variable(xs[j - 1], dim)
        out[j][0] = out[0][j]
    for i in range(1, size):
        for j in range(i, size):
            cross = (
                vinv
                * CoeffPoly.variable(xs[i - 1], dim)
                * CoeffPoly.variable(xs[j - 1], dim)
            )
            out[i][j] = cross + vfrac * inner[i - 1][j - 1]
            out[j][i] = out[i][j]
    return out


def op_laplace_sl_iwasawa(n: int, variant: str = "v_scaled") -> DiffOperator:
    """Recursive Laplacian on the determinant-one slice in the flattened chart.

    Variants control the first-order term and the normalization of the
    x-block:

    * ``"as_printed"``: second order (k-1)/k v^2 d2/dv2, first order
      -(1/k) d/dv, x-block v^(k/(k-1)) W[d/dx];
    * ``"v_scaled"`` (default): first order -(1/k) v d/dv, which is the only
      reading under which pure powers of v are eigenfunctions with the
      eigenvalue s(s-2)/2 at the top level;
    * ``"metric"``: the Laplace-Beltrami operator of the invariant metric
      (first order -(k-1)(k-2)/(2k) v d/dv and x-block halved), the variant
      that is actually invariant under the group.
    """
    if n < 2:
        raise ChartError("the recursive chart needs n >= 2")
    if variant not in ("as_printed", "v_scaled", "metric"):
        raise ChartError(f"unknown variant {variant!r}")
    coords = iwasawa_coords(n)
    out = DiffOperator.zero(coords)
    for level in range(n, 1, -1):
        k = level
        vi = coords.v_level_index(k)
        v2 = DiffOperator.multiplication(
            CoeffPoly.variable(vi, coords.dim, power=2), coords
        )
        out = out + (v2 @ DiffOperator.partial(coords, vi, order=2)).scale(
            Fraction(k - 1, k)
        )
        if variant == "as_printed":
            out = out - DiffOperator.partial(coords, vi).scale(Fraction(1, k))
        else:
            v1 = DiffOperator.multiplication(
                CoeffPoly.variable(vi, coords.dim), coords
            )
            coeff = (
                Fraction(1, k)
                if variant == "v_scaled"
                else Fraction((k - 1) * (k - 2), 2 * k)
            )
            out = out - (v1 @ DiffOperator.partial(coords, vi)).scale(coeff)
        block = symbolic_unit_det_block(coords, k - 1)
        vpow = CoeffPoly.variable(vi, coords.dim, power=Fraction(k, k - 1))
        xscale = HALF if variant == "metric" else Fraction(1)
        for i in range(k - 1):
            for j in range(k - 1):
                xi = coords.x_level_index(k, i)
                xj = coords.x_level_index(k, j)
                if i == j:
                    dd = DiffOperator.partial(coords, xi, order=2)
                else:
                    alpha = [0] * coords.dim
                    alpha[xi] += 1
                    alpha[xj] += 1
                    dd = DiffOperator(
                        coords,
                        {tuple(alpha): CoeffPoly.constant(Fraction(1), coords.dim)},
                    )
                out = out + DiffOperator.multiplication(
                    (vpow * block[i][j]).scale(xscale), coords
                ) @ dd
    return out


# ---------------------------------------------------------------------------
# the determinant operator singling out singular forms


@dataclass(frozen=True)
class IndexMatrix:
    """Positive definite symmetric half-integral matrix (diagonal integral,
    off-diagonal half-integral), stored exactly."""

    entries: tuple

    def __post_init__(self):
        m = len(self.entries)
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.entries)
        if any(len(r) != m for r in rows):
            raise DimensionMismatch("index matrix must be square")
        for i in range(m):
            for j in range(m):
                if rows[i][j] != rows[j][i]:
                    raise ChartError("index matrix must be symmetric")
                if (2 * rows[i][j]).denominator != 1:
                    raise ChartError("index matrix must be half-integral")
            if rows[i][i].denominator != 1:
                raise ChartError("diagonal of the index matrix must be integral")
        a = np.array([[float(x) for x in row] for row in rows])
        if np.any(np.linalg.eigvalsh(a) <= 0):
            raise ChartError("index matrix must be positive definite")
        object.__setattr__(self, "entries", rows)

    @property
    def m(self) -> int:
        return len(self.entries)

    def inverse(self) -> list:
        """Exact rational inverse via Gauss-Jordan elimination."""
        m = self.m
        a = [list(row) + [Fraction(int(i == j)) for j in range(m)] for i, row in enumerate(self.entries)]
        for col in range(m):
            pivot_row = next(r for r in range(col, m) if a[r][col] != 0)
            a[col], a[pivot_row] = a[pivot_row], a[col]
            pivot = a[col][col]
            a[col] = [x / pivot for x in a[col]]
            for r in range(m):
                if r != col and a[r][col] != 0:
                    factor = a[r][col]
                    a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
        return [row[m:] for row in a]


def op_M(index: IndexMatrix, n: int, max_n: int = 3) -> DiffOperator:
    """Determinant operator ``det(Y) det(dY + (1/8 pi) dV' Minv dV)``.

    The entries of the operator matrix have constant coefficients and
    commute, so the determinant expands by the plain Leibniz rule; the
    result has order 2n. Sizes above ``max_n`` are refused (jet budget).
    """
    if n > max_n:
        raise ChartError(f"op_M supports n <= {max_n} (jet-order budget), got {n}")
    m = index.m
    coords = pnm_coords(n, m)
    minv = index.inverse()
    c8pi = 1.0 / (8.0 * math.pi)
    dv = dv_matrix(coords)
    dy = dy_matrix(coords)
    entries = []
    for i in range(n):
        row = []
        for j in range(n):
            op = dy[i][j]
            for k in range(m):
                for l in range(m):
                    if minv[k][l] == 0:
                        continue
                    op = op + (dv[k][i] @ dv[l][j]).scale(c8pi * float(minv[k][l]))
            row.append(op)
        entries.append(row)
    det_op = DiffOperator.zero(coords)
    for perm in itertools.permutations(range(n)):
        sign = _perm_sign(perm)
        prod = entries[0][perm[0]]
        for i in range(1, n):
            prod = prod @ entries[i][perm[i]]
        det_op = det_op + prod.scale(sign)
    return DiffOperator.multiplication(det_y_poly(coords), coords) @ det_op
