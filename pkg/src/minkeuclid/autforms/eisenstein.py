"""Eisenstein series over cosets of the triangular subgroup.

Exact coset enumeration at n=2 (primitive pairs up to sign), bounded
enumeration with canonical dedup at n=3 (coset key: sign-normalized first
column, second column reduced modulo the first and sign-minimized); larger
sizes are refused rather than approximated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DivergentParameters, EnumerationBudgetExceeded, JetOrderError
from ..matcore import UnitDetSpdPoint
from ..diffops.coords import iwasawa_coords
from ..diffops.functions import ChartFn, iwasawa_matrix_jets
from ..geometry import sl_point_from_chart


@dataclass(frozen=True)
class EisensteinQuery:
    s: tuple
    height: int
    n: int

    def __post_init__(self):
        s = tuple(complex(x) for x in np.atleast_1d(np.asarray(self.s)))
        if len(s) != self.n - 1:
            raise DivergentParameters("exponent vector must have length n-1")
        if any(x.real <= 1.0 for x in s):
            raise DivergentParameters(
                "the series converges only for real parts above 1"
            )
        if self.height < 1:
            raise EnumerationBudgetExceeded("height bound must be at least 1")
        object.__setattr__(self, "s", s)


def coset_vectors_n2(height: int) -> np.ndarray:
    """First columns of coset representatives at n=2: the identity class plus
    primitive pairs (a, c) with c >= 1, up to sign."""
    cs, As = np.meshgrid(
        np.arange(1, height + 1, dtype=np.int64),
        np.arange(-height, height + 1, dtype=np.int64),
        indexing="ij",
    )
    mask = np.gcd(np.abs(As), cs) == 1
    pairs = np.stack([As[mask], cs[mask]], axis=1)
    return np.vstack([np.array([[1, 0]], dtype=np.int64), pairs])


def _sign_normalize(vec: np.ndarray) -> tuple:
    for x in vec:
        if x != 0:
            return tuple(vec if x > 0 else -vec)
    raise ValueError("zero vector")


def _reduce_mod(c2: np.ndarray, c1: np.ndarray) -> tuple:
    i0 = next(i for i, x in enumerate(c1) if x != 0)
    q = c2[i0] // abs(c1[i0])
    out = c2 - q * (c1 if c1[i0] > 0 else -c1)
    return tuple(out)


def coset_pairs_n3(height: int) -> list:
    """Canonical (first, second column) pairs of coset representatives at
    n=3 with entries bounded by the height."""
    import itertools

    rng = range(-height, height + 1)
    all_vecs = np.array(list(itertools.product(rng, repeat=3)), dtype=np.int64)
    all_vecs = all_vecs[np.any(all_vecs != 0, axis=1)]
    prim = np.gcd.reduce(np.abs(all_vecs), axis=1) == 1
    singles = [v for v in all_vecs[prim] if _sign_normalize(v) == tuple(v)]
    blocks = []
    for c1 in singles:
        # vectorized pair-primitivity over all candidate second columns
        m01 = c1[0] * all_vecs[:, 1] - c1[1] * all_vecs[:, 0]
        m02 = c1[0] * all_vecs[:, 2] - c1[2] * all_vecs[:, 0]
        m12 = c1[1] * all_vecs[:, 2] - c1[2] * all_vecs[:, 1]
        g = np.gcd(np.gcd(np.abs(m01), np.abs(m02)), np.abs(m12))
        c2s = all_vecs[g == 1]
        if not len(c2s):
            continue
        # reduce both signs of c2 modulo c1 at the pivot coordinate and keep
        # the lexicographically smaller representative, all vectorized
        i0 = int(np.argmax(c1 != 0))
        piv = int(c1[i0])
        base = c1 if piv > 0 else -c1
        r1 = c2s - (c2s[:, i0] // abs(piv))[:, None] * base
        r2 = -c2s - ((-c2s[:, i0]) // abs(piv))[:, None] * base
        d = r1 - r2
        first = np.argmax(d != 0, axis=1)
        lead = d[np.arange(len(d)), first]
        keep_r1 = lead <= 0
        red = np.where(keep_r1[:, None], r1, r2)
        blocks.append(
            np.hstack([np.broadcast_to(c1, red.shape).copy(), red])
        )
    if not blocks:
        return []
    keys = np.unique(np.vstack(blocks), axis=0)
    return [(row[:3].copy(), row[3:].copy()) for row in keys]


def _shell_tail_estimate(term_abs: np.ndarray, heights: np.ndarray, h: int) -> float:
    """Geometric extrapolation from the last two half-shells (h/4, h/2] and
    (h/2, h], with a safety factor of two."""
    s1 = float(np.sum(term_abs[(heights > h / 2) & (heights <= h)]))
    s0 = float(np.sum(term_abs[(heights > h / 4) & (heights <= h / 2)]))
    if s1 == 0.0:
        return 0.0
    if s0 <= s1:
        return float("inf")
    rho = s1 / s0
    return 2.0 * s1 * rho / (1.0 - rho)


def eisenstein(query: EisensteinQuery, y: UnitDetSpdPoint) -> tuple[complex, float]:
    """Partial sum of the coset series plus a dyadic-shell tail estimate."""
    mat = y.matrix
    n = query.n
    if n == 2:
        if mat.shape[0] != 2:
            raise DivergentParameters("point dimension does not match the query")
        s = query.s[0]
        vecs = coset_vectors_n2(query.height)
        q = np.einsum("ij,jk,ik->i", vecs.astype(float), mat, vecs.astype(float))
        heights = np.max(np.abs(vecs), axis=1)
        terms = q ** (-s)
        value = complex(np.sum(terms))
        tail = _shell_tail_estimate(np.abs(terms), heights, query.height)
        return value, tail
    if n == 3:
        if mat.shape[0] != 3:
            raise DivergentParameters("point dimension does not match the query")
        s1, s2 = query.s
        pairs = coset_pairs_n3(query.height)
        c1s = np.array([p[0] for p in pairs], dtype=float)
        c2s = np.array([p[1] for p in pairs], dtype=float)
        q11 = np.einsum("ij,jk,ik->i", c1s, mat, c1s)
        q22 = np.einsum("ij,jk,ik->i", c2s, mat, c2s)
        q12 = np.einsum("ij,jk,ik->i", c1s, mat, c2s)
        gram2 = q11 * q22 - q12**2
        terms = q11 ** (-s1) * gram2 ** (-s2)
        heights = np.maximum(
            np.max(np.abs(c1s), axis=1), np.max(np.abs(c2s), axis=1)
        )
        value = complex(np.sum(terms))
        tail = _shell_tail_estimate(np.abs(terms), heights, query.height)
        return value, tail
    raise EnumerationBudgetExceeded(
        "coset enumeration is implemented for n = 2 and n = 3 only"
    )


def eisenstein_eigenvalue(s, n: int) -> complex:
    """Closed-form eigenvalue of the recursive Laplacian on the series:
    ``sum_j (n-j)/(n-j+1) (s_j + xi_j)(s_j - 1 + xi_j - 1/(n-j))``."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    if len(s) != n - 1:
        raise DivergentParameters("exponent vector must have length n-1")
    xi = np.zeros(n - 1, dtype=complex)
    for j in range(1, n - 1):  # 1-based j up to n-2
        ks = np.arange(j + 1, n)
        xi[j - 1] = np.sum((n - ks) * s[ks - 1]) / (n - j)
    total = 0.0 + 0.0j
    for j in range(1, n):
        sj = s[j - 1]
        xj = xi[j - 1]
        total += ((n - j) / (n - j + 1)) * (sj + xj) * (sj - 1 + xj - 1.0 / (n - j))
    return complex(total)


# ---------------------------------------------------------------------------
# truncated series as a chart function (n = 2)


def eisenstein_chart_fn(s: complex, height: int) -> ChartFn:
    """Truncated n=2 series as a function of the recursive chart (v, x),
    with a hand-vectorized second-order jet (the term count makes generic
    jet arithmetic wasteful)."""
    query = EisensteinQuery((s,), height, 2)
    vecs = coset_vectors_n2(height).astype(float)
    a = vecs[:, 0]
    c = vecs[:, 1]
    sval = query.s[0]

    def value(point):
        y = sl_point_from_chart(point, 2).matrix
        q = (
            a * a * y[0, 0]
            + 2.0 * a * c * y[0, 1]
            + c * c * y[1, 1]
        )
        return complex(np.sum(q ** (-sval)))

    def jet(seeds):
        order = seeds[0].order
        if order > 2:
            raise JetOrderError("the series jet is implemented up to order 2")
        coords = iwasawa_coords(2)
        ymat = iwasawa_matrix_jets(coords, seeds)
        dim = coords.dim

        def arrays(yjet):
            out = {}
            for alpha in [
                (0,) * dim,
                (1, 0),
                (0, 1),
                (2, 0),
                (1, 1),
                (0, 2),
            ]:
                out[alpha] = yjet.coeffs.get(alpha, 0.0)
            return out

        y11, y12, y22 = arrays(ymat[0][0]), arrays(ymat[0][1]), arrays(ymat[1][1])
        q = {
            alpha: a * a * y11[alpha] + 2.0 * a * c * y12[alpha] + c * c * y22[alpha]
            for alpha in y11
        }
        base = (0,) * dim
        q0 = q[base]
        w0 = q0 ** (-sval)
        d1 = -sval * q0 ** (-sval - 1)
        d2 = sval * (sval + 1) * q0 ** (-sval - 2)
        coeffs = {base: complex(np.sum(w0))}
        firsts = [(1, 0), (0, 1)]
        for alpha in firsts:
            coeffs[alpha] = complex(np.sum(d1 * q[alpha]))
        # second-order Taylor coefficients (already divided by alpha!)
        coeffs[(2, 0)] = complex(np.sum(d1 * q[(2, 0)] + 0.5 * d2 * q[(1, 0)] ** 2))
        coeffs[(0, 2)] = complex(np.sum(d1 * q[(0, 2)] + 0.5 * d2 * q[(0, 1)] ** 2))
        coeffs[(1, 1)] = complex(
            np.sum(d1 * q[(1, 1)] + d2 * q[(1, 0)] * q[(0, 1)])
        )
        from ..diffops.jets import Jet

        return Jet(dim, order, coeffs)

    return ChartFn(iwasawa_coords(2), value, jet, label=f"E_2(s={s}, H={height})")
