"""Fundamental-domain machinery.

Reduction to the classical fundamental cone (shortest-vector conditions over
bounded integer enumerations, certificates carry the bound), the recursive
highest-point reduction on the determinant-one slice, Siegel-set membership,
and reduction of pair points under the integral affine group.

Transforms act by the congruence bracket: ``reduced = T' Y T``. Certificates
are never stronger than the enumeration bound that produced them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ChartError, ConvergenceFailure, DimensionMismatch
from .geometry import (
    full_iwasawa,
    partial_iwasawa,
    sl_chart_from_point,
)
from .groups import IntegralGroupElement, MinkowskiEuclidPoint
from .matcore import SpdPoint, UnitDetSpdPoint

DEFAULT_BOUND = 3
_REL_TOL = 1e-9


@dataclass(frozen=True)
class ReductionResult:
    """Reduced point, the unimodular transform that produced it, and the
    certificate of membership (valid only up to ``certificate_bound``)."""

    reduced: object
    transform: IntegralGroupElement
    certified: bool
    certificate_bound: int
    boundary_contacts: tuple = field(default=())
    violation: object = None


@dataclass(frozen=True)
class SiegelSetParams:
    """Height parameter of the Siegel box; the 1/2 bound on x is fixed."""

    t: float

    def __post_init__(self):
        if self.t <= 0:
            raise ChartError("Siegel parameter t must be positive")


def apply_congruence(transform: np.ndarray, y: np.ndarray) -> np.ndarray:
    """The bracket ``T' Y T``."""
    out = transform.T @ y @ transform
    return (out + out.T) / 2.0


# ---------------------------------------------------------------------------
# integer utilities


def _primitive_mask(vectors: np.ndarray, start: int = 0) -> np.ndarray:
    """Rows whose entries from ``start`` on have gcd one."""
    tail = np.abs(vectors[:, start:]).astype(np.int64)
    g = tail[:, 0]
    for j in range(1, tail.shape[1]):
        g = np.gcd(g, tail[:, j])
    return g == 1


def _enumerate_vectors(n: int, bound: int) -> np.ndarray:
    rng = range(-bound, bound + 1)
    return np.array(list(itertools.product(rng, repeat=n)), dtype=np.int64)


def complete_primitive(t: np.ndarray) -> np.ndarray:
    """Unimodular matrix whose first column is the primitive vector ``t``.

    Gcd elimination with elementary row operations, accumulating the inverse
    so the completion is exact.
    """
    t = np.asarray(t, dtype=np.int64).reshape(-1)
    L = t.shape[0]
    v = t.copy()
    winv = np.eye(L, dtype=np.int64)  # accumulates V^{-1}; columns track ops
    # reduce v to +-e_1 by row operations, mirroring them on winv columns
    while True:
        nz = [i for i in range(L) if v[i] != 0]
        if not nz:
            raise ChartError("cannot complete the zero vector")
        if len(nz) == 1:
            piv = nz[0]
            break
        i = min(nz, key=lambda k: abs(v[k]))
        for j in nz:
            if j == i:
                continue
            q = v[j] // v[i]
            # row op on v: r_j -= q r_i ; inverse op on winv: c_i += q c_j
            v[j] -= q * v[i]
            winv[:, i] += q * winv[:, j]
    if v[piv] < 0:
        v[piv] = -v[piv]
        winv[:, piv] = -winv[:, piv]
    if v[piv] != 1:
        raise ChartError("vector is not primitive")
    if piv != 0:
        # swap rows piv,0 of v; inverse swap on winv columns
        winv[:, [0, piv]] = winv[:, [piv, 0]]
    out = winv
    assert np.array_equal(out[:, 0], t)
    return out


def _lift_column_replacement(n: int, k: int, a: np.ndarray) -> np.ndarray:
    """Unimodular U with columns e_1..e_{k-1}, a, and a completion of the
    tail; requires gcd(a_k..a_n) = 1 (0-based k)."""
    tail = complete_primitive(a[k:])
    u = np.zeros((n, n), dtype=np.int64)
    for j in range(k):
        u[j, j] = 1
    u[:k, k] = a[:k]
    u[k:, k:] = tail
    return u


# ---------------------------------------------------------------------------
# LLL preprocessing (size reduction + swaps on a float basis)


def _lll_transform(y: np.ndarray, delta: float = 0.99) -> np.ndarray:
    """Unimodular T such that T' Y T is LLL-reduced (as a Gram matrix)."""
    n = y.shape[0]
    try:
        basis = np.linalg.cholesky(y).T  # columns are basis vectors
    except np.linalg.LinAlgError as exc:
        raise ChartError(f"input is not positive definite: {exc}") from exc
    b = [basis[:, j].copy() for j in range(n)]
    t = np.eye(n, dtype=np.int64)

    def gso():
        star, mu = [], np.zeros((n, n))
        for i in range(n):
            v = b[i].copy()
            for j in range(i):
                mu[i, j] = np.dot(b[i], star[j]) / np.dot(star[j], star[j])
                v -= mu[i, j] * star[j]
            star.append(v)
        return star, mu

    star, mu = gso()
    k = 1
    guard = 0
    while k < n:
        guard += 1
        if guard > 10_000:
            raise ConvergenceFailure("LLL did not converge")
        for j in range(k - 1, -1, -1):
            q = round(mu[k, j])
            if q != 0:
                b[k] -= q * b[j]
                t[:, k] -= q * t[:, j]
                star, mu = gso()
        lhs = np.dot(star[k], star[k])
        rhs = (delta - mu[k, k - 1] ** 2) * np.dot(star[k - 1], star[k - 1])
        if lhs >= rhs:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            t[:, [k - 1, k]] = t[:, [k, k - 1]]
            star, mu = gso()
            k = max(k - 1, 1)
    return t


# ---------------------------------------------------------------------------
# classical reduction conditions


def is_minkowski_reduced(y, bound: int = DEFAULT_BOUND, tol: float = _REL_TOL):
    """Check the shortest-vector conditions over the bounded enumeration and
    the sign conditions on the first superdiagonal.

    Returns ``(ok, violation)`` where the violation names the condition, the
    index and (for the quadratic condition) the witness vector.
    """
    if bound < 1:
        raise ChartError("enumeration bound must be at least 1")
    mat = y.matrix if isinstance(y, (SpdPoint, UnitDetSpdPoint)) else np.asarray(y, float)
    n = mat.shape[0]
    scale = float(np.max(np.diag(mat)))
    vectors = _enumerate_vectors(n, bound)
    vectors = vectors[np.any(vectors != 0, axis=1)]
    values = np.einsum("ij,jk,ik->i", vectors, mat, vectors)
    # scan k downward so a witness is reported with the strongest index
    for k in range(n - 1, -1, -1):
        mask = _primitive_mask(vectors, start=k)
        vals = values[mask]
        idx = np.argmin(vals)
        if vals[idx] < mat[k, k] - tol * scale:
            witness = vectors[mask][idx]
            return False, ("M1", k + 1, tuple(int(x) for x in witness), float(vals[idx]))
    for k in range(n - 1):
        if mat[k, k + 1] < -tol * scale:
            return False, ("M2", k + 1, None, float(mat[k, k + 1]))
    return True, None


def _r4_check(mat: np.ndarray, tol: float):
    """Ordering and half-bound inequalities; returns (ok, boundary contacts)."""
    n = mat.shape[0]
    scale = float(np.max(np.diag(mat)))
    contacts = []
    for k in range(n - 1):
        if mat[k, k] > mat[k + 1, k + 1] + tol * scale:
            return False, ()
    for i in range(n):
        for j in range(i + 1, n):
            if abs(mat[i, j]) > mat[i, i] / 2.0 + tol * scale:
                return False, ()
            if abs(abs(mat[i, j]) - mat[i, i] / 2.0) <= tol * scale:
                contacts.append(("R4", i + 1, j + 1))
    return True, tuple(contacts)


def minkowski_reduce(
    y: SpdPoint, bound: int = DEFAULT_BOUND, max_iter: int = 400
) -> ReductionResult:
    """Reduce a cone point into the classical fundamental cone.

    Size reduction and swaps first, then greedy column replacements driven by
    the bounded shortest-vector enumeration, then the sign normalization.
    Non-convergence is reported with a partial result, never raised.
    """
    y0 = y.matrix if isinstance(y, (SpdPoint, UnitDetSpdPoint)) else np.asarray(y, float)
    n = y0.shape[0]
    t_total = _lll_transform(y0)
    cur = apply_congruence(t_total.astype(float), y0)
    converged = False
    for _ in range(max_iter):
        scale = float(np.max(np.diag(cur)))
        vectors = _enumerate_vectors(n, bound)
        vectors = vectors[np.any(vectors != 0, axis=1)]
        values = np.einsum("ij,jk,ik->i", vectors, cur, vectors)
        improved = False
        for k in range(n):
            mask = _primitive_mask(vectors, start=k)
            vals = values[mask]
            idx = int(np.argmin(vals))
            if vals[idx] < cur[k, k] - _REL_TOL * scale:
                a = vectors[mask][idx]
                u = _lift_column_replacement(n, k, a)
                t_total = t_total @ u
                cur = apply_congruence(t_total.astype(float), y0)
                improved = True
                break
        if not improved:
            converged = True
            break
    # sign normalization of the first superdiagonal: the flip of y_{k,k+1}
    # is eps_k eps_{k+1}, so one forward pass fixes every sign
    eps = np.ones(n, dtype=np.int64)
    for k in range(n - 1):
        s = 1 if cur[k, k + 1] >= 0 else -1
        eps[k + 1] = eps[k] * s
    t_total = t_total @ np.diag(eps)
    reduced_mat = apply_congruence(t_total.astype(float), y0)
    ok, violation = is_minkowski_reduced(reduced_mat, bound)
    r4_ok, contacts = _r4_check(reduced_mat, _REL_TOL)
    certified = bool(converged and ok and r4_ok)
    transform = IntegralGroupElement(
        t_total.T.copy(), np.zeros((0, n), dtype=np.int64)
    )
    return ReductionResult(
        reduced=SpdPoint.from_matrix(reduced_mat),
        transform=transform,
        certified=certified,
        certificate_bound=bound,
        boundary_contacts=contacts,
        violation=None if certified else violation,
    )


# ---------------------------------------------------------------------------
# highest-point reduction on the determinant-one slice


def _grenier_transform(
    y0: np.ndarray, bound: int, max_iter: int
) -> tuple[np.ndarray, bool]:
    """Unimodular T with T' Y T in the highest-point domain (up to interior
    sign normalization); returns (T, converged)."""
    n = y0.shape[0]
    t_total = np.eye(n, dtype=np.int64)
    if n == 1:
        return t_total, True
    cur = y0.copy()
    for _ in range(max_iter):
        # raise the height: minimize the quadratic form over primitive vectors
        vectors = _enumerate_vectors(n, bound)
        vectors = vectors[np.any(vectors != 0, axis=1)]
        vectors = vectors[_primitive_mask(vectors)]
        values = np.einsum("ij,jk,ik->i", vectors, cur, vectors)
        idx = int(np.argmin(values))
        if values[idx] < cur[0, 0] * (1.0 - 1e-12) - _REL_TOL:
            u = _lift_column_replacement(n, 0, vectors[idx])
            t_total = t_total @ u
            cur = apply_congruence(t_total.astype(float), y0)
            continue
        # height is maximal within the bound; reduce the block below
        chart = partial_iwasawa(UnitDetSpdPoint.normalized(cur))
        sub_t, sub_ok = _grenier_transform(chart.W.matrix, bound, max_iter)
        if not np.array_equal(sub_t, np.eye(n - 1, dtype=np.int64)):
            u = np.zeros((n, n), dtype=np.int64)
            u[0, 0] = 1
            u[1:, 1:] = sub_t
            t_total = t_total @ u
            cur = apply_congruence(t_total.astype(float), y0)
        # translate x into [-1/2, 1/2)
        chart = partial_iwasawa(UnitDetSpdPoint.normalized(cur))
        shift = -np.floor(chart.x + 0.5).astype(np.int64)
        if np.any(shift != 0):
            u = np.eye(n, dtype=np.int64)
            u[0, 1:] = shift
            t_total = t_total @ u
            cur = apply_congruence(t_total.astype(float), y0)
        # re-check the height condition after the block work
        values = np.einsum("ij,jk,ik->i", vectors, cur, vectors)
        if np.min(values) >= cur[0, 0] * (1.0 - 1e-12) - _REL_TOL:
            return t_total, sub_ok
    return t_total, False


def _sign_normalize_transform(y: np.ndarray) -> np.ndarray:
    """Global sign matrix making the leading x-coordinate of every chart
    level nonnegative (the sign ambiguities are independent level by level)."""
    n = y.shape[0]
    eps = np.ones(n, dtype=np.int64)
    cur = UnitDetSpdPoint.normalized(y)
    # level with pair (i, i+1) has its leading x flipped by eps_i eps_{i+1}
    for i in range(n - 1):
        chart = partial_iwasawa(cur)
        sign = 1 if chart.x[0] >= 0 else -1
        eps[i + 1] = eps[i] * sign
        if chart.W.n >= 2:
            cur = chart.W
        else:
            break
    return np.diag(eps)


def grenier_reduce(
    y: UnitDetSpdPoint, bound: int = DEFAULT_BOUND, max_iter: int = 60
) -> ReductionResult:
    """Reduce a determinant-one point into the highest-point domain."""
    y0 = y.matrix
    n = y0.shape[0]
    if n < 2:
        raise ChartError("reduction on the slice needs n >= 2")
    t_total, converged = _grenier_transform(y0, bound, max_iter)
    cur = apply_congruence(t_total.astype(float), y0)
    d = _sign_normalize_transform(cur)
    t_total = t_total @ d
    reduced_mat = apply_congruence(t_total.astype(float), y0)
    reduced = UnitDetSpdPoint.normalized(reduced_mat)
    ok, violation = (
        is_in_grenier_domain(reduced, bound) if converged else (False, None)
    )
    transform = IntegralGroupElement(t_total.T.copy(), np.zeros((0, n), dtype=np.int64))
    return ReductionResult(
        reduced=reduced,
        transform=transform,
        certified=bool(converged and ok),
        certificate_bound=bound,
        violation=violation if not ok else None,
    )


def is_in_grenier_domain(
    y: UnitDetSpdPoint,
    bound: int = DEFAULT_BOUND,
    tol: float = _REL_TOL,
    modulo_signs: bool = False,
):
    """Membership in the highest-point domain, checked recursively.

    Conditions: the bounded height inequality over primitive vectors, the
    block membership, and the x-box (leading coordinate in [0, 1/2], the
    rest within 1/2 in absolute value; with ``modulo_signs`` the leading
    condition is also two-sided, which checks membership up to the diagonal
    sign subgroup).
    """
    mat = y.matrix
    n = mat.shape[0]
    if n == 1:
        return True, None
    vectors = _enumerate_vectors(n, bound)
    vectors = vectors[np.any(vectors != 0, axis=1)]
    vectors = vectors[_primitive_mask(vectors)]
    values = np.einsum("ij,jk,ik->i", vectors, mat, vectors)
    idx = int(np.argmin(values))
    # the chart form of the condition is v * (u' Y u) >= 1
    if values[idx] < mat[0, 0] * (1.0 - tol) - tol:
        return False, ("F1", 1, tuple(int(v) for v in vectors[idx]), float(values[idx]))
    chart = partial_iwasawa(y)
    x = chart.x
    lo = -0.5 - tol if modulo_signs else -tol
    if not (lo <= x[0] <= 0.5 + tol):
        return False, ("F3", 1, None, float(x[0]))
    for j in range(1, n - 1):
        if abs(x[j]) > 0.5 + tol:
            return False, ("F3", j + 1, None, float(x[j]))
    if chart.W.n >= 2:
        ok, violation = is_in_grenier_domain(chart.W, bound, tol, modulo_signs)
        if not ok:
            return False, ("F2",) + violation
    return True, None


def is_in_grenier_domain_sharp(
    y: UnitDetSpdPoint, bound: int = DEFAULT_BOUND, tol: float = _REL_TOL
) -> bool:
    """Membership up to the diagonal sign subgroup."""
    ok, _ = is_in_grenier_domain(y, bound, tol, modulo_signs=True)
    return ok


def siegel_set_contains(
    y: UnitDetSpdPoint, t: float | SiegelSetParams, tol: float = _REL_TOL
) -> bool:
    """Membership of the Siegel box, evaluated in the full chart."""
    params = t if isinstance(t, SiegelSetParams) else SiegelSetParams(float(t))
    coords = full_iwasawa(y)
    floor = params.t ** (-0.5)
    if np.any(coords.ys < floor - tol):
        return False
    n = coords.n
    for i in range(n):
        for j in range(i + 1, n):
            if abs(coords.x[i, j]) > 0.5 + tol:
                return False
    return True


# ---------------------------------------------------------------------------
# pair-space reduction


def reduce_pnm(p: MinkowskiEuclidPoint, bound: int = DEFAULT_BOUND) -> ReductionResult:
    """Reduce a pair point: congruence-reduce the cone part, then translate
    the Euclidean part into the symmetric unit cell [-1/2, 1/2)."""
    res = minkowski_reduce(p.Y, bound)
    gamma = res.transform.A  # reduced_Y = gamma Y gamma'
    v0 = p.V @ gamma.T.astype(float)
    shift = -np.floor(v0 + 0.5).astype(np.int64)
    gamma_t_inv = np.round(np.linalg.inv(gamma.T.astype(float))).astype(np.int64)
    a = shift @ gamma_t_inv
    # evaluate through the same float expression as the group action so the
    # self-consistency identity is bit-exact
    v_new = (p.V + a) @ gamma.T.astype(float)
    transform = IntegralGroupElement(gamma, a)
    reduced = MinkowskiEuclidPoint(res.reduced, v_new)
    return ReductionResult(
        reduced=reduced,
        transform=transform,
        certified=res.certified,
        certificate_bound=bound,
        boundary_contacts=res.boundary_contacts,
        violation=res.violation,
    )
