"""Power functions, triangular characters and spherical averages."""

from __future__ import annotations

import numpy as np

from .._parallel import map_chunks
from ..errors import DimensionMismatch
from ..geometry import GoldfeldPoint
from ..matcore import SpdPoint, UnitDetSpdPoint, cholesky_upper, random_orthogonal_haar


def _matrix_of(y) -> np.ndarray:
    if isinstance(y, (SpdPoint, UnitDetSpdPoint)):
        return y.matrix
    return np.asarray(y, dtype=float)


def power_p(s, y) -> complex:
    """Product of powers of the leading principal minors.

    ``s`` has length n on the cone; length n-1 on the determinant-one slice
    (where the last minor is 1).
    """
    mat = _matrix_of(y)
    s = np.asarray(s, dtype=complex).reshape(-1)
    if len(s) > mat.shape[0]:
        raise DimensionMismatch("more exponents than minors")
    out = 1.0 + 0.0j
    for j, sj in enumerate(s):
        minor = np.linalg.det(mat[: j + 1, : j + 1])
        out *= complex(minor) ** sj
    return out


def tau_from_s(s) -> np.ndarray:
    """Exponents of the triangular character matching the power function:
    ``r_j = 2 (s_j + ... + s_n)``."""
    s = np.asarray(s, dtype=complex).reshape(-1)
    return 2.0 * np.cumsum(s[::-1])[::-1]


def tau_r(r, t) -> complex:
    """Character ``prod t_jj^(r_j)`` of an upper triangular matrix."""
    t = np.asarray(t, dtype=float)
    r = np.asarray(r, dtype=complex).reshape(-1)
    d = np.diag(t)
    if len(r) != len(d):
        raise DimensionMismatch("exponent count must match the matrix size")
    out = 1.0 + 0.0j
    for dj, rj in zip(d, r):
        out *= complex(dj) ** rj
    return out


def phi_z(z, y) -> complex:
    """Character ``prod t_jj^(2 z_j + j - (n+1)/2)`` evaluated through the
    upper Cholesky factor of a cone point."""
    mat = _matrix_of(y)
    n = mat.shape[0]
    z = np.asarray(z, dtype=complex).reshape(-1)
    if len(z) != n:
        raise DimensionMismatch("exponent count must match the dimension")
    t = cholesky_upper(SpdPoint.from_matrix(mat))
    out = 1.0 + 0.0j
    for j in range(n):
        expo = 2.0 * z[j] + (j + 1) - (n + 1) / 2.0
        out *= complex(t[j, j]) ** expo
    return out


def spherical_h(
    s, y, sample_count: int = 4096, seed: int = 0, workers: int = 1
) -> tuple[complex, float]:
    """Monte Carlo average of the power function over the orthogonal group.

    Returns the mean and its standard error; the estimator is deterministic
    per (seed, sample_count).
    """
    mat = _matrix_of(y)
    n = mat.shape[0]
    if sample_count < 1:
        raise DimensionMismatch("sample_count must be at least 1")
    chunk_size = 512
    starts = list(range(0, sample_count, chunk_size))

    def run(start):
        vals = []
        for i in range(start, min(start + chunk_size, sample_count)):
            k = random_orthogonal_haar(n, seed=seed * 1_000_003 + i)
            vals.append(power_p(s, k.T @ mat @ k))
        return vals

    values = np.array(sum(map_chunks(run, starts, workers), []))
    mean = complex(values.mean())
    stderr = float(values.std(ddof=1) / np.sqrt(values.size)) if values.size > 1 else 0.0
    return mean, stderr


def b_matrix(n: int) -> np.ndarray:
    """Exponent table of the triangular-model power function: ``b_ij = i j``
    below the antidiagonal and ``(n-i)(n-j)`` above (they agree on it)."""
    if n < 2:
        raise DimensionMismatch("b matrix needs n >= 2")
    b = np.empty((n - 1, n - 1), dtype=np.int64)
    for i in range(1, n):
        for j in range(1, n):
            b[i - 1, j - 1] = i * j if i + j <= n else (n - i) * (n - j)
    return b


def i_nu(nu, z: GoldfeldPoint) -> complex:
    """Power function of the triangular model: ``prod y_i^(sum_j b_ij nu_j)``."""
    nu = np.asarray(nu, dtype=complex).reshape(-1)
    n = z.n
    if len(nu) != n - 1:
        raise DimensionMismatch("type vector must have length n-1")
    expo = b_matrix(n) @ nu
    out = 1.0 + 0.0j
    for yi, e in zip(z.ys, expo):
        out *= complex(yi) ** e
    return out


def i_nu_tilde(nu, z: GoldfeldPoint, v) -> complex:
    """Extension to the pair space; constant in the Euclidean coordinate."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 2 or v.shape[1] != z.n:
        raise DimensionMismatch("v must be an m x n matrix")
    return i_nu(nu, z)
