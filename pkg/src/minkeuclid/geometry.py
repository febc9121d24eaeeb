"""Coordinate charts, invariant metrics and volumes, geodesics.

Charts on the determinant-one slice:

* partial chart ``Y = [v, x, W]``: top-left entry ``1/v``, off row ``x/v``,
  block ``x x'/v + v^(1/(n-1)) W`` with ``W`` of determinant one;
* full chart: repeated partial decomposition, flattened level by level
  ``(v_n, x_n,1..n-1, v_{n-1}, ..., v_2, x_2,1)``;
* Goldfeld chart ``z = x . y`` with ``x`` unit upper triangular and
  ``y = diag(y_1...y_{n-1}, ..., y_1, 1)``, related to the cone by
  ``Y(z) = z z' / det(z z')^(1/n)``.

Densities are always reported relative to the Lebesgue measure of the
listed chart coordinates, so Jacobian tests are unambiguous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.special

from .errors import ChartError, DimensionMismatch, Singular
from .groups import MinkowskiEuclidPoint
from .matcore import (
    SpdPoint,
    SymmetricMatrix,
    UnitDetSpdPoint,
    spectral_decompose,
    sym_log,
)


@dataclass(frozen=True)
class MetricParams:
    """Positive constants of the invariant metrics (cone scale ``c``,
    pair-space scales ``A`` and ``B``)."""

    A: float = 1.0
    B: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if min(self.A, self.B, self.c) <= 0:
            raise ChartError("metric constants must be strictly positive")


@dataclass(frozen=True)
class PartialIwasawaCoords:
    """One level of the Iwasawa decomposition on the unit-determinant slice."""

    v: float
    x: np.ndarray = field(repr=False)
    W: UnitDetSpdPoint

    def __post_init__(self):
        if self.v <= 0:
            raise ChartError(f"v must be positive, got {self.v!r}")
        x = np.asarray(self.x, dtype=float).reshape(-1)
        if x.shape[0] != self.W.n:
            raise DimensionMismatch("x length must equal the size of W")
        object.__setattr__(self, "x", x)

    @property
    def n(self) -> int:
        return self.W.n + 1


@dataclass(frozen=True)
class FullIwasawaCoords:
    """Diagonal parameters ``y_1..y_{n-1}``, unit upper triangular ``x`` and
    the derived scalar ``y = prod y_j^(2(n-j))``."""

    ys: np.ndarray = field(repr=False)
    x: np.ndarray = field(repr=False)

    def __post_init__(self):
        ys = np.asarray(self.ys, dtype=float).reshape(-1)
        x = np.asarray(self.x, dtype=float)
        n = ys.shape[0] + 1
        if x.shape != (n, n):
            raise DimensionMismatch("x must be n x n unit upper triangular")
        if np.any(ys <= 0):
            raise ChartError("all y_j must be positive")
        if not np.allclose(np.diag(x), 1.0) or np.max(np.abs(np.tril(x, -1))) > 0:
            raise ChartError("x must be unit upper triangular")
        object.__setattr__(self, "ys", ys)
        object.__setattr__(self, "x", x)

    @property
    def n(self) -> int:
        return self.ys.shape[0] + 1

    @property
    def y(self) -> float:
        n = self.n
        return float(np.prod(self.ys ** (2.0 * (n - np.arange(1, n)))))


@dataclass(frozen=True)
class GoldfeldPoint:
    """Point ``z = x . y`` of the triangular model of the slice."""

    x: np.ndarray = field(repr=False)
    ys: np.ndarray = field(repr=False)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        ys = np.asarray(self.ys, dtype=float).reshape(-1)
        n = ys.shape[0] + 1
        if x.shape != (n, n):
            raise DimensionMismatch("x must be n x n unit upper triangular")
        if not np.allclose(np.diag(x), 1.0) or np.max(np.abs(np.tril(x, -1))) > 0:
            raise ChartError("x must be unit upper triangular")
        if np.any(ys <= 0):
            raise ChartError("all y_i must be positive")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "ys", ys)

    @property
    def n(self) -> int:
        return self.ys.shape[0] + 1

    @property
    def matrix(self) -> np.ndarray:
        n = self.n
        d = np.ones(n)
        for j in range(n):  # entry j is the product y_1 ... y_{n-1-j}
            d[j] = np.prod(self.ys[: n - 1 - j])
        return self.x @ np.diag(d)

    @staticmethod
    def identity(n: int) -> "GoldfeldPoint":
        return GoldfeldPoint(np.eye(n), np.ones(n - 1))


# ---------------------------------------------------------------------------
# metrics


def metric_eval(point, tangent1, tangent2, params: MetricParams, space: str) -> float:
    """Invariant metric as a bilinear form on two tangents.

    ``space`` is ``"cone"`` (tangents: symmetric matrices) or ``"pnm"``
    (tangents: pairs ``(dY, dV)``).
    """
    if space == "cone":
        if not isinstance(point, SpdPoint):
            raise DimensionMismatch("cone metric needs an SpdPoint")
        yinv = np.linalg.inv(point.matrix)
        s1 = _check_sym_tangent(tangent1, point.n)
        s2 = _check_sym_tangent(tangent2, point.n)
        return params.c * float(np.trace(yinv @ s1 @ yinv @ s2))
    if space == "pnm":
        if not isinstance(point, MinkowskiEuclidPoint):
            raise DimensionMismatch("pair-space metric needs a MinkowskiEuclidPoint")
        s1, w1 = tangent1
        s2, w2 = tangent2
        s1 = _check_sym_tangent(s1, point.n)
        s2 = _check_sym_tangent(s2, point.n)
        w1 = _check_v_tangent(w1, point.m, point.n)
        w2 = _check_v_tangent(w2, point.m, point.n)
        yinv = np.linalg.inv(point.Y.matrix)
        return params.A * float(np.trace(yinv @ s1 @ yinv @ s2)) + params.B * float(
            np.trace(yinv @ w1.T @ w2)
        )
    raise ChartError(f"unknown metric space {space!r}")


def _check_sym_tangent(s, n: int) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if s.shape != (n, n):
        raise DimensionMismatch(f"tangent must be {n} x {n}")
    if np.max(np.abs(s - s.T)) > 1e-10:
        raise DimensionMismatch("dY tangent must be symmetric")
    return s


def _check_v_tangent(w, m: int, n: int) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.shape != (m, n):
        raise DimensionMismatch(f"dV tangent must be {m} x {n}")
    return w


def push_tangent(g, tangent, space: str):
    """Differential of the group action on tangents: ``dY -> A dY A'``,
    ``dV -> dV A'``."""
    if space == "cone":
        s = np.asarray(tangent, dtype=float)
        return g.A @ s @ g.A.T
    if space == "pnm":
        s, w = tangent
        return g.A @ np.asarray(s, float) @ g.A.T, np.asarray(w, float) @ g.A.T
    raise ChartError(f"unknown metric space {space!r}")


# ---------------------------------------------------------------------------
# volume densities


def volume_density(space: str, point, n: int | None = None) -> float:
    """Density of the invariant measure relative to Lebesgue measure in the
    chart coordinates listed per space.

    * ``cone_dv_n``: coordinates ``y_ij`` (i <= j) of an SPD point;
    * ``pnm_dv``: coordinates ``(y_ij, v_kl)`` of a pair point;
    * ``sl_dmu_n``: flattened partial-Iwasawa chart vector (see
      :func:`sl_chart_from_point`);
    * ``goldfeld_dstar``: coordinates ``(x_ij, y_k)`` of a Goldfeld point.
    """
    if space == "cone_dv_n":
        y = point.matrix if isinstance(point, SpdPoint) else np.asarray(point, float)
        d = np.linalg.det(y)
        if d <= 0:
            raise ChartError("point left the cone")
        return float(d ** (-(y.shape[0] + 1) / 2.0))
    if space == "pnm_dv":
        if not isinstance(point, MinkowskiEuclidPoint):
            raise DimensionMismatch("pnm_dv needs a MinkowskiEuclidPoint")
        d = np.linalg.det(point.Y.matrix)
        return float(d ** (-(point.n + point.m + 1) / 2.0))
    if space == "sl_dmu_n":
        coords = np.asarray(point, dtype=float).reshape(-1)
        if n is None:
            n = _chart_size_to_n(coords.shape[0])
        out = 1.0
        pos = 0
        for level in range(n, 1, -1):
            v = coords[pos]
            if v <= 0:
                raise ChartError(f"chart violation: v at level {level} is {v!r}")
            out *= v ** (-(level + 2) / 2.0)
            pos += level  # one v plus level-1 x entries
        return float(out)
    if space == "goldfeld_dstar":
        if not isinstance(point, GoldfeldPoint):
            raise DimensionMismatch("goldfeld_dstar needs a GoldfeldPoint")
        nn = point.n
        ks = np.arange(1, nn)
        return float(np.prod(point.ys ** (-nn * (nn - ks) - 1.0)))
    raise ChartError(f"unknown volume space {space!r}")


def siegel_volume(n: int) -> float:
    """Closed-form volume of the arithmetic quotient of the slice:
    ``n 2^(n-1) prod_{k=2..n} zeta(k) / Vol(S^(k-1))``."""
    if n < 1:
        raise ChartError("n must be at least 1")
    out = n * 2.0 ** (n - 1)
    for k in range(2, n + 1):
        sphere = 2.0 * math.pi ** (k / 2.0) / math.gamma(k / 2.0)
        out *= float(scipy.special.zeta(k, 1)) / sphere
    return out


# ---------------------------------------------------------------------------
# geodesics from the identity


def geodesic_point(y: SpdPoint, t: float) -> SpdPoint:
    """Point at parameter ``t`` on the geodesic from the identity to ``Y``."""
    sd = spectral_decompose(y)
    m = sd.k.T @ np.diag(np.exp(t * sd.a)) @ sd.k
    return SpdPoint.from_matrix((m + m.T) / 2.0)


def geodesic_distance(y: SpdPoint) -> float:
    """Distance from the identity: Euclidean norm of the spectral exponents."""
    return float(np.linalg.norm(spectral_decompose(y).a))


def geodesic_distance_pair(y: SpdPoint, z: SpdPoint) -> float:
    """Distance between two cone points via congruence normalization.

    Convenience plumbing: reduces to :func:`geodesic_distance` after moving
    ``y`` to the identity.
    """
    t = np.linalg.cholesky(y.matrix)
    tinv = np.linalg.inv(t)
    w = tinv @ z.matrix @ tinv.T
    return geodesic_distance(SpdPoint.from_matrix((w + w.T) / 2.0))


# ---------------------------------------------------------------------------
# partial Iwasawa chart


def partial_iwasawa(y: UnitDetSpdPoint) -> PartialIwasawaCoords:
    """Split ``Y = [v, x, W]`` with ``v = 1/Y_11`` and ``W`` of determinant one."""
    n = y.n
    if n < 2:
        raise ChartError("partial decomposition needs n >= 2")
    a = y.matrix
    if a[0, 0] <= 0:
        raise ChartError("Y_11 must be positive")
    v = 1.0 / a[0, 0]
    x = a[0, 1:] / a[0, 0]
    w = (a[1:, 1:] - np.outer(x, x) / v) * v ** (-1.0 / (n - 1))
    w = (w + w.T) / 2.0
    return PartialIwasawaCoords(v, x, UnitDetSpdPoint.normalized(w))


def partial_iwasawa_inverse(coords: PartialIwasawaCoords) -> UnitDetSpdPoint:
    """Reassemble ``Y`` from ``[v, x, W]``."""
    n = coords.n
    v, x, w = coords.v, coords.x, coords.W.matrix
    a = np.empty((n, n))
    a[0, 0] = 1.0 / v
    a[0, 1:] = x / v
    a[1:, 0] = x / v
    a[1:, 1:] = np.outer(x, x) / v + v ** (1.0 / (n - 1)) * w
    return UnitDetSpdPoint.normalized((a + a.T) / 2.0)


def _chart_size_to_n(size: int) -> int:
    # size = n(n+1)/2 - 1
    n = int(round((math.sqrt(9 + 8 * size) - 1) / 2))
    if n * (n + 1) // 2 - 1 != size:
        raise ChartError(f"chart vector length {size} matches no dimension")
    return n


def sl_chart_from_point(y: UnitDetSpdPoint) -> np.ndarray:
    """Flatten the recursive partial decomposition into one vector, ordered
    ``(v_n, x_n, v_{n-1}, x_{n-1}, ..., v_2, x_2)``."""
    out = []
    cur = y
    for _level in range(y.n, 1, -1):
        c = partial_iwasawa(cur)
        out.append(c.v)
        out.extend(c.x.tolist())
        cur = c.W
    return np.array(out)


def sl_point_from_chart(coords, n: int | None = None) -> UnitDetSpdPoint:
    """Inverse of :func:`sl_chart_from_point`."""
    coords = np.asarray(coords, dtype=float).reshape(-1)
    if n is None:
        n = _chart_size_to_n(coords.shape[0])
    pos = len(coords)
    cur = UnitDetSpdPoint.identity(1)
    for level in range(2, n + 1):
        pos -= level
        v = coords[pos]
        x = coords[pos + 1 : pos + level]
        cur = partial_iwasawa_inverse(PartialIwasawaCoords(v, x, cur))
    return cur


# ---------------------------------------------------------------------------
# full Iwasawa chart


def full_iwasawa(y: UnitDetSpdPoint) -> FullIwasawaCoords:
    """Unit-triangular factorization ``Y = y^(-1/n) diag(1, y_1^2, ...)[x]``."""
    n = y.n
    if n < 2:
        raise ChartError("full decomposition needs n >= 2")
    a = y.matrix.copy()
    # Y = x' D x with x unit upper triangular (row-elimination from the top)
    d = np.empty(n)
    x = np.eye(n)
    for k in range(n):
        d[k] = a[k, k]
        if d[k] <= 0:
            raise ChartError("pivot left the cone")
        x[k, k + 1 :] = a[k, k + 1 :] / d[k]
        a[k + 1 :, k + 1 :] -= np.outer(x[k, k + 1 :], x[k, k + 1 :]) * d[k]
    ys = np.sqrt(d[1:] / d[:-1])
    return FullIwasawaCoords(ys, x)


def full_iwasawa_inverse(coords: FullIwasawaCoords) -> UnitDetSpdPoint:
    n = coords.n
    run = np.concatenate([[1.0], np.cumprod(coords.ys)])
    d = coords.y ** (-1.0 / n) * run**2
    a = coords.x.T @ np.diag(d) @ coords.x
    return UnitDetSpdPoint.normalized((a + a.T) / 2.0)


# ---------------------------------------------------------------------------
# Goldfeld chart


def goldfeld_decompose(g) -> tuple[GoldfeldPoint, np.ndarray, float]:
    """Split an invertible matrix as ``g = z k (r I)`` with ``z`` triangular,
    ``k`` orthogonal and ``r > 0``."""
    g = np.asarray(g, dtype=float)
    n = g.shape[0]
    if g.ndim != 2 or g.shape[1] != n:
        raise DimensionMismatch("goldfeld_decompose needs a square matrix")
    if abs(np.linalg.det(g)) < 1e-12:
        raise Singular("matrix is singular within tolerance")
    y = g @ g.T
    p = np.eye(n)[::-1]
    try:
        ell = np.linalg.cholesky(p @ y @ p)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - g invertible
        raise Singular(str(exc)) from exc
    rmat = p @ ell @ p  # upper triangular with R R' = g g'
    r = rmat[n - 1, n - 1]
    z = rmat / r
    k = np.linalg.solve(rmat, g)
    diag = np.diag(z)
    ys = diag[:-1][::-1] / diag[1:][::-1]
    x = z / diag[np.newaxis, :]
    return GoldfeldPoint(np.triu(x), ys), k, float(r)


def goldfeld_to_spd(z: GoldfeldPoint) -> UnitDetSpdPoint:
    """Cone point ``z z'`` rescaled to determinant one."""
    m = z.matrix
    m = m / np.prod(np.diag(m)) ** (1.0 / z.n)  # det of a triangular factor
    y = m @ m.T
    return UnitDetSpdPoint.normalized((y + y.T) / 2.0)


def goldfeld_left_act(g, z: GoldfeldPoint) -> GoldfeldPoint:
    """Left translation ``z -> component of g z`` in the triangular model."""
    out, _, _ = goldfeld_decompose(np.asarray(g, dtype=float) @ z.matrix)
    return out


def spd_to_goldfeld(y: UnitDetSpdPoint) -> GoldfeldPoint:
    """Triangular coordinates of a determinant-one cone point."""
    n = y.n
    p = np.eye(n)[::-1]
    ell = np.linalg.cholesky(p @ y.matrix @ p)
    rmat = p @ ell @ p
    z, _, _ = goldfeld_decompose(rmat)
    return z
