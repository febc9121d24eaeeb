"""Dense matrix kernel for the positive cone.

Value types for symmetric / positive definite matrices, the factorizations
the rest of the library is built on (upper Cholesky, spectral log/exp), and
seeded random generation of SPD and Haar-orthogonal matrices.

Conventions
-----------
* Upper Cholesky orientation ``Y = T' T`` (``'`` = transpose, ``T`` upper
  triangular with positive diagonal), so that ``t_jj^2`` equals the ratio of
  consecutive leading principal minors.
* Spectral data uses ``Y = exp(k' diag(a) k)`` with eigen-exponents ``a``
  ascending and a deterministic sign convention on eigenvectors.
* All values are immutable after construction; RNG state is always an
  explicit seed, never global.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import ConvergenceFailure, NotPositiveDefinite, NotSymmetric

SYMMETRY_TOL = 1e-10
DET_ONE_TOL = 1e-10


def _as_square_array(mat) -> np.ndarray:
    a = np.asarray(mat, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise NotSymmetric(f"expected a square matrix, got shape {a.shape}")
    return a


@dataclass(frozen=True)
class SymmetricMatrix:
    """Real symmetric matrix with single-storage upper triangle.

    Construction rejects inputs whose asymmetry exceeds ``SYMMETRY_TOL``
    (absolute); it never symmetrizes silently.
    """

    n: int
    upper: tuple  # packed upper triangle, row-major: (0,0),(0,1),...,(n-1,n-1)

    @staticmethod
    def from_matrix(mat) -> "SymmetricMatrix":
        a = _as_square_array(mat)
        if np.max(np.abs(a - a.T)) > SYMMETRY_TOL:
            raise NotSymmetric(
                "matrix is not symmetric within tolerance "
                f"{SYMMETRY_TOL:g}: max deviation {np.max(np.abs(a - a.T)):g}"
            )
        n = a.shape[0]
        packed = tuple(float(a[i, j]) for i in range(n) for j in range(i, n))
        return SymmetricMatrix(n=n, upper=packed)

    @property
    def matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        k = 0
        for i in range(self.n):
            for j in range(i, self.n):
                a[i, j] = self.upper[k]
                a[j, i] = self.upper[k]
                k += 1
        return a

    def entry(self, i: int, j: int) -> float:
        if i > j:
            i, j = j, i
        # offset of row i start in packed storage
        off = i * self.n - i * (i - 1) // 2
        return self.upper[off + (j - i)]


@dataclass(frozen=True)
class SpdPoint:
    """Point of the open cone of symmetric positive definite matrices."""

    base: SymmetricMatrix

    def __post_init__(self):
        try:
            scipy.linalg.cholesky(self.base.matrix, lower=False)
        except scipy.linalg.LinAlgError as exc:
            raise NotPositiveDefinite(str(exc)) from exc

    @staticmethod
    def from_matrix(mat) -> "SpdPoint":
        return SpdPoint(SymmetricMatrix.from_matrix(mat))

    @staticmethod
    def identity(n: int) -> "SpdPoint":
        return SpdPoint.from_matrix(np.eye(n))

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def matrix(self) -> np.ndarray:
        return self.base.matrix

    def det(self) -> float:
        return float(np.linalg.det(self.matrix))


@dataclass(frozen=True)
class UnitDetSpdPoint:
    """SPD point with determinant one (tolerance ``DET_ONE_TOL``).

    Renormalization is explicit via :meth:`normalized`, never silent.
    """

    base: SpdPoint

    def __post_init__(self):
        d = self.base.det()
        if abs(d - 1.0) > DET_ONE_TOL:
            raise NotPositiveDefinite(
                f"determinant {d!r} is not 1 within {DET_ONE_TOL:g}; "
                "use UnitDetSpdPoint.normalized to rescale explicitly"
            )

    @staticmethod
    def from_matrix(mat) -> "UnitDetSpdPoint":
        return UnitDetSpdPoint(SpdPoint.from_matrix(mat))

    @staticmethod
    def normalized(mat) -> "UnitDetSpdPoint":
        """Rescale an SPD matrix to determinant one and wrap it."""
        p = SpdPoint.from_matrix(mat)
        y = p.matrix
        for _ in range(4):
            d = np.linalg.det(y)
            if d <= 0:
                raise NotPositiveDefinite("cannot normalize non-positive determinant")
            if abs(d - 1.0) <= DET_ONE_TOL / 2:
                break
            y = y / d ** (1.0 / p.n)
        return UnitDetSpdPoint(SpdPoint.from_matrix(y))

    @staticmethod
    def identity(n: int) -> "UnitDetSpdPoint":
        return UnitDetSpdPoint.from_matrix(np.eye(n))

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def matrix(self) -> np.ndarray:
        return self.base.matrix


@dataclass(frozen=True)
class ComplexSymmetricMatrix:
    """Complex symmetric (not Hermitian) matrix; positivity of the imaginary
    part is checked by consumers, not here."""

    n: int
    upper: tuple

    @staticmethod
    def from_matrix(mat) -> "ComplexSymmetricMatrix":
        a = np.asarray(mat, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise NotSymmetric(f"expected a square matrix, got shape {a.shape}")
        if np.max(np.abs(a - a.T)) > SYMMETRY_TOL:
            raise NotSymmetric("complex matrix is not symmetric within tolerance")
        n = a.shape[0]
        packed = tuple(complex(a[i, j]) for i in range(n) for j in range(i, n))
        return ComplexSymmetricMatrix(n=n, upper=packed)

    @property
    def matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=complex)
        k = 0
        for i in range(self.n):
            for j in range(i, self.n):
                a[i, j] = self.upper[k]
                a[j, i] = self.upper[k]
                k += 1
        return a


@dataclass(frozen=True)
class SpectralData:
    """Orthogonal frame and log-eigenvalues with ``Y = exp(k' diag(a) k)``."""

    k: np.ndarray = field(repr=False)
    a: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.k.T @ np.diag(np.exp(self.a)) @ self.k


def cholesky_upper(y: SpdPoint) -> np.ndarray:
    """Upper triangular ``T`` with positive diagonal and ``T' T = Y``.

    Raises :class:`NotPositiveDefinite` when a pivot fails.
    """
    try:
        return scipy.linalg.cholesky(y.matrix, lower=False)
    except scipy.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc


def leading_minors(y: SymmetricMatrix | SpdPoint | np.ndarray) -> np.ndarray:
    """Determinants of the upper-left j-by-j blocks, j = 1..n."""
    if isinstance(y, SpdPoint):
        a = y.matrix
    elif isinstance(y, SymmetricMatrix):
        a = y.matrix
    else:
        a = np.asarray(y, dtype=float)
    n = a.shape[0]
    return np.array([np.linalg.det(a[: j + 1, : j + 1]) for j in range(n)])


def _fix_eigvec_signs(q: np.ndarray) -> np.ndarray:
    """Flip eigenvector columns so the first nonzero component is positive."""
    q = q.copy()
    for j in range(q.shape[1]):
        col = q[:, j]
        nz = np.nonzero(np.abs(col) > 1e-12)[0]
        pivot = col[nz[0]] if nz.size else 1.0
        if pivot < 0:
            q[:, j] = -col
    return q


def spectral_decompose(y: SpdPoint) -> SpectralData:
    """Spectral data of an SPD point, eigen-exponents ascending.

    Raises :class:`ConvergenceFailure` if the symmetric eigensolver fails.
    """
    try:
        w, q = np.linalg.eigh(y.matrix)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    if np.any(w <= 0):
        raise NotPositiveDefinite("non-positive eigenvalue in spectral decomposition")
    q = _fix_eigvec_signs(q)
    # eigh returns Y = q diag(w) q'; the stored frame is k = q'
    return SpectralData(k=q.T, a=np.log(w))


def sym_exp(s: SymmetricMatrix | np.ndarray) -> SpdPoint:
    """Matrix exponential of a symmetric matrix, landing in the cone."""
    a = s.matrix if isinstance(s, SymmetricMatrix) else np.asarray(s, dtype=float)
    w, q = np.linalg.eigh(a)
    e = q @ np.diag(np.exp(w)) @ q.T
    return SpdPoint.from_matrix((e + e.T) / 2.0)


def sym_log(y: SpdPoint) -> SymmetricMatrix:
    """Matrix logarithm of an SPD point; inverse of :func:`sym_exp`."""
    sd = spectral_decompose(y)
    m = sd.k.T @ np.diag(sd.a) @ sd.k
    return SymmetricMatrix.from_matrix((m + m.T) / 2.0)


def random_spd(n: int, seed: int, spread: float = 1.0) -> SpdPoint:
    """Seeded random SPD point, built as ``G G' + eps I`` from a Gaussian ``G``.

    ``spread`` scales the Gaussian factor; output is deterministic per seed.
    """
    rng = np.random.default_rng(seed)
    g = spread * rng.standard_normal((n, n))
    y = g @ g.T + 1e-6 * max(spread, 1e-6) ** 2 * np.eye(n)
    return SpdPoint.from_matrix((y + y.T) / 2.0)


def random_unit_det_spd(n: int, seed: int, spread: float = 1.0) -> UnitDetSpdPoint:
    """Seeded random determinant-one SPD point."""
    return UnitDetSpdPoint.normalized(random_spd(n, seed, spread).matrix)


def random_orthogonal_haar(n: int, seed: int) -> np.ndarray:
    """Haar-distributed orthogonal matrix via QR with sign correction."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    d = np.sign(np.diag(r))
    d[d == 0] = 1.0
    return q * d
