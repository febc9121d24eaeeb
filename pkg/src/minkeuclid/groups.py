"""Group laws and actions.

The affine group GL(n,R) x R^(m,n) (semidirect product) and its SL flavor,
their action on pairs (Y, V) with Y in the positive cone, the symplectic
group acting on the Siegel space, the Heisenberg and Jacobi groups, and the
finite block-diagonal embeddings between sizes.

Flavor ("GL" vs "SL") is a type-level tag checked at construction, not a
runtime branch inside operations. All values are immutable; every operation
is re-entrant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NotPositiveDefinite, Singular
from .matcore import ComplexSymmetricMatrix, SpdPoint, UnitDetSpdPoint

_DET_TOL = 1e-12
_SYMPLECTIC_TOL = 1e-9
_HEISENBERG_TOL = 1e-10


@dataclass(frozen=True)
class AffineGroupElement:
    """Element (A, a) of GL(n,R) x R^(m,n); ``flavor`` is "GL" or "SL"."""

    A: np.ndarray = field(repr=False)
    a: np.ndarray = field(repr=False)
    flavor: str = "GL"

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        a = np.asarray(self.a, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise DimensionMismatch(f"A must be square, got {A.shape}")
        if a.ndim != 2 or a.shape[1] != A.shape[0]:
            raise DimensionMismatch(
                f"translation shape {a.shape} does not match n={A.shape[0]}"
            )
        det = np.linalg.det(A)
        if abs(det) <= _DET_TOL:
            raise Singular(f"|det A| = {abs(det):g} below tolerance")
        if self.flavor == "SL":
            if abs(det - 1.0) > _DET_TOL:
                raise Singular(f"SL flavor requires det A = 1, got {det!r}")
        elif self.flavor != "GL":
            raise ValueError(f"unknown flavor {self.flavor!r}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "a", a)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.a.shape[0]

    @staticmethod
    def identity(n: int, m: int, flavor: str = "GL") -> "AffineGroupElement":
        return AffineGroupElement(np.eye(n), np.zeros((m, n)), flavor)


@dataclass(frozen=True)
class IntegralGroupElement:
    """Element of GL(n,Z) x Z^(m,n) (det +1 only in the SL flavor)."""

    A: np.ndarray = field(repr=False)
    a: np.ndarray = field(repr=False)
    flavor: str = "GL"

    def __post_init__(self):
        A = np.asarray(self.A)
        a = np.asarray(self.a)
        if not np.issubdtype(A.dtype, np.integer) or not np.issubdtype(
            a.dtype, np.integer
        ):
            raise DimensionMismatch("integral elements require integer arrays")
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise DimensionMismatch(f"A must be square, got {A.shape}")
        if a.ndim != 2 or a.shape[1] != A.shape[0]:
            raise DimensionMismatch("translation shape does not match n")
        det = int(round(float(np.linalg.det(A.astype(float)))))
        allowed = (1,) if self.flavor == "SL" else (1, -1)
        if det not in allowed:
            raise Singular(f"integral determinant must be in {allowed}, got {det}")
        object.__setattr__(self, "A", A.astype(np.int64))
        object.__setattr__(self, "a", a.astype(np.int64))

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.a.shape[0]

    def as_affine(self) -> AffineGroupElement:
        return AffineGroupElement(
            self.A.astype(float), self.a.astype(float), self.flavor
        )


@dataclass(frozen=True)
class MinkowskiEuclidPoint:
    """Pair (Y, V) with Y SPD and V an m x n real matrix.

    ``unit_det`` tags points of the determinant-one slice acted on by the
    SL flavor.
    """

    Y: SpdPoint
    V: np.ndarray = field(repr=False)
    unit_det: bool = False

    def __post_init__(self):
        V = np.asarray(self.V, dtype=float)
        if V.ndim != 2 or V.shape[1] != self.Y.n:
            raise DimensionMismatch(
                f"V shape {V.shape} does not match Y dimension {self.Y.n}"
            )
        if self.unit_det:
            # delegate the tolerance check to the unit-det constructor
            UnitDetSpdPoint(self.Y)
        object.__setattr__(self, "V", V)

    @staticmethod
    def make(y_matrix, v_matrix, unit_det: bool = False) -> "MinkowskiEuclidPoint":
        return MinkowskiEuclidPoint(
            SpdPoint.from_matrix(y_matrix), np.asarray(v_matrix, dtype=float), unit_det
        )

    @property
    def n(self) -> int:
        return self.Y.n

    @property
    def m(self) -> int:
        return self.V.shape[0]


def symplectic_form(n: int) -> np.ndarray:
    """The 2n x 2n block form [[0, I], [-I, 0]]."""
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = np.eye(n)
    j[n:, :n] = -np.eye(n)
    return j


@dataclass(frozen=True)
class SymplecticElement:
    """Real 2n x 2n matrix preserving the standard symplectic form."""

    M: np.ndarray = field(repr=False)

    def __post_init__(self):
        M = np.asarray(self.M, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2 != 0:
            raise DimensionMismatch(f"expected 2n x 2n matrix, got {M.shape}")
        j = symplectic_form(M.shape[0] // 2)
        dev = np.max(np.abs(M.T @ j @ M - j))
        if dev > _SYMPLECTIC_TOL:
            raise DimensionMismatch(
                f"matrix fails the symplectic relation by {dev:g}"
            )
        object.__setattr__(self, "M", M)

    @property
    def n(self) -> int:
        return self.M.shape[0] // 2

    @property
    def blocks(self):
        """(A, B, C, D) by the fixed 2x2 block partition."""
        n = self.n
        return (
            self.M[:n, :n],
            self.M[:n, n:],
            self.M[n:, :n],
            self.M[n:, n:],
        )

    @staticmethod
    def identity(n: int) -> "SymplecticElement":
        return SymplecticElement(np.eye(2 * n))

    def compose(self, other: "SymplecticElement") -> "SymplecticElement":
        return SymplecticElement(self.M @ other.M)


@dataclass(frozen=True)
class SiegelPoint:
    """Complex symmetric matrix with SPD imaginary part."""

    omega: ComplexSymmetricMatrix

    def __post_init__(self):
        # positivity certified by a Cholesky attempt
        SpdPoint.from_matrix(np.imag(self.omega.matrix))

    @staticmethod
    def from_matrix(mat) -> "SiegelPoint":
        return SiegelPoint(ComplexSymmetricMatrix.from_matrix(mat))

    @property
    def n(self) -> int:
        return self.omega.n

    @property
    def matrix(self) -> np.ndarray:
        return self.omega.matrix


@dataclass(frozen=True)
class HeisenbergElement:
    """Triple (lam, mu; kap) with kap + mu lam' symmetric."""

    lam: np.ndarray = field(repr=False)
    mu: np.ndarray = field(repr=False)
    kap: np.ndarray = field(repr=False)

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float)
        mu = np.asarray(self.mu, dtype=float)
        kap = np.asarray(self.kap, dtype=float)
        if lam.shape != mu.shape or lam.ndim != 2:
            raise DimensionMismatch("lam and mu must be m x n matrices")
        m = lam.shape[0]
        if kap.shape != (m, m):
            raise DimensionMismatch("kap must be m x m")
        s = kap + mu @ lam.T
        if np.max(np.abs(s - s.T)) > _HEISENBERG_TOL:
            raise DimensionMismatch("kap + mu lam' is not symmetric within tolerance")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "kap", kap)

    @property
    def m(self) -> int:
        return self.lam.shape[0]

    @property
    def n(self) -> int:
        return self.lam.shape[1]

    @staticmethod
    def identity(n: int, m: int) -> "HeisenbergElement":
        z = np.zeros((m, n))
        return HeisenbergElement(z, z.copy(), np.zeros((m, m)))


@dataclass(frozen=True)
class JacobiElement:
    """Pair of a symplectic element and a Heisenberg element."""

    M: SymplecticElement
    h: HeisenbergElement

    def __post_init__(self):
        if self.M.n != self.h.n:
            raise DimensionMismatch("symplectic degree does not match Heisenberg n")

    @staticmethod
    def identity(n: int, m: int) -> "JacobiElement":
        return JacobiElement(SymplecticElement.identity(n), HeisenbergElement.identity(n, m))


# ---------------------------------------------------------------------------
# group laws


def glnm_compose(g1: AffineGroupElement, g2: AffineGroupElement) -> AffineGroupElement:
    """Product (A1 A2, a1 A2'^{-1} + a2) of two affine elements."""
    if (g1.n, g1.m, g1.flavor) != (g2.n, g2.m, g2.flavor):
        raise DimensionMismatch("affine elements live on different groups")
    A = g1.A @ g2.A
    a = g1.a @ np.linalg.inv(g2.A.T) + g2.a
    return AffineGroupElement(A, a, g1.flavor)


def glnm_inverse(g: AffineGroupElement) -> AffineGroupElement:
    """Inverse (A^{-1}, -a A') of an affine element."""
    return AffineGroupElement(np.linalg.inv(g.A), -g.a @ g.A.T, g.flavor)


def glnm_act(g: AffineGroupElement, p: MinkowskiEuclidPoint) -> MinkowskiEuclidPoint:
    """Action (A, a).(Y, V) = (A Y A', (V + a) A')."""
    if g.n != p.n or g.m != p.m:
        raise DimensionMismatch("group element and point dimensions differ")
    if p.unit_det and g.flavor != "SL":
        raise DimensionMismatch("unit-determinant points require the SL flavor")
    y = g.A @ p.Y.matrix @ g.A.T
    v = (p.V + g.a) @ g.A.T
    return MinkowskiEuclidPoint(SpdPoint.from_matrix((y + y.T) / 2.0), v, p.unit_det)


def congruence(A: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Congruence action A Y A' on a raw symmetric array."""
    out = A @ y @ A.T
    return (out + out.T) / 2.0


def siegel_act(M: SymplecticElement, omega: SiegelPoint) -> SiegelPoint:
    """Fractional-linear action (A W + B)(C W + D)^{-1} on the Siegel space."""
    A, B, C, D = M.blocks
    W = omega.matrix
    denom = C @ W + D
    if np.linalg.cond(denom) > 1.0 / _DET_TOL:
        raise Singular("C Omega + D is singular within tolerance")
    out = np.linalg.solve(denom.T, (A @ W + B).T).T
    out = (out + out.T) / 2.0
    try:
        return SiegelPoint.from_matrix(out)
    except NotPositiveDefinite as exc:
        raise Singular(f"action left the Siegel space: {exc}") from exc


def heisenberg_compose(
    h1: HeisenbergElement, h2: HeisenbergElement
) -> HeisenbergElement:
    """Heisenberg product with twisted central term."""
    if (h1.m, h1.n) != (h2.m, h2.n):
        raise DimensionMismatch("Heisenberg elements have different sizes")
    kap = h1.kap + h2.kap + h1.lam @ h2.mu.T - h1.mu @ h2.lam.T
    return HeisenbergElement(h1.lam + h2.lam, h1.mu + h2.mu, kap)


def heisenberg_inverse(h: HeisenbergElement) -> HeisenbergElement:
    kap = -h.kap + h.lam @ h.mu.T - h.mu @ h.lam.T
    return HeisenbergElement(-h.lam, -h.mu, kap)


def jacobi_compose(j1: JacobiElement, j2: JacobiElement) -> JacobiElement:
    """Jacobi product: symplectic part multiplies, Heisenberg part twists by
    (lam~, mu~) = (lam, mu) M2."""
    if (j1.M.n, j1.h.m) != (j2.M.n, j2.h.m):
        raise DimensionMismatch("Jacobi elements have different sizes")
    A, B, C, D = j2.M.blocks
    lam_t = j1.h.lam @ A + j1.h.mu @ C
    mu_t = j1.h.lam @ B + j1.h.mu @ D
    kap = j1.h.kap + j2.h.kap + lam_t @ j2.h.mu.T - mu_t @ j2.h.lam.T
    return JacobiElement(
        j1.M.compose(j2.M),
        HeisenbergElement(lam_t + j2.h.lam, mu_t + j2.h.mu, kap),
    )


def jacobi_act(j: JacobiElement, omega: SiegelPoint, z: np.ndarray):
    """Action on (Omega, Z): Omega moves fractionally, Z maps to
    (Z + lam Omega + mu)(C Omega + D)^{-1}."""
    z = np.asarray(z, dtype=complex)
    if z.shape != (j.h.m, j.M.n):
        raise DimensionMismatch(f"Z must be {j.h.m} x {j.M.n}, got {z.shape}")
    A, B, C, D = j.M.blocks
    W = omega.matrix
    denom = C @ W + D
    if np.linalg.cond(denom) > 1.0 / _DET_TOL:
        raise Singular("C Omega + D is singular within tolerance")
    new_omega = siegel_act(j.M, omega)
    new_z = np.linalg.solve(denom.T, (z + j.h.lam @ W + j.h.mu).T).T
    return new_omega, new_z


# ---------------------------------------------------------------------------
# embeddings between sizes


def embed_group(g: AffineGroupElement, target_n: int) -> AffineGroupElement:
    """Block-diagonal extension (diag(A, I), (a | 0)) to a larger size."""
    if target_n <= g.n:
        raise DimensionMismatch(f"target size {target_n} must exceed {g.n}")
    A = np.eye(target_n)
    A[: g.n, : g.n] = g.A
    a = np.zeros((g.m, target_n))
    a[:, : g.n] = g.a
    return AffineGroupElement(A, a, g.flavor)


def embed_point(p: MinkowskiEuclidPoint, target_n: int) -> MinkowskiEuclidPoint:
    """Extension (diag(Y, I), (V | 0)) of a point to a larger size."""
    if target_n <= p.n:
        raise DimensionMismatch(f"target size {target_n} must exceed {p.n}")
    y = np.eye(target_n)
    y[: p.n, : p.n] = p.Y.matrix
    v = np.zeros((p.m, target_n))
    v[:, : p.n] = p.V
    return MinkowskiEuclidPoint(SpdPoint.from_matrix(y), v, p.unit_det)


# ---------------------------------------------------------------------------
# seeded random elements (used by invariance probes and the CLI checker)


def random_affine(
    n: int, m: int, seed: int, flavor: str = "GL", spread: float = 0.7
) -> AffineGroupElement:
    """Well-conditioned random affine element, deterministic per seed."""
    from .matcore import random_orthogonal_haar

    rng = np.random.default_rng(seed)
    q1 = random_orthogonal_haar(n, int(rng.integers(2**63)))
    q2 = random_orthogonal_haar(n, int(rng.integers(2**63)))
    d = np.exp(rng.uniform(-spread, spread, size=n))
    A = q1 @ np.diag(d) @ q2
    if flavor == "SL":
        det = np.linalg.det(A)
        if det < 0:
            A[:, 0] = -A[:, 0]
            det = -det
        A /= det ** (1.0 / n)
    a = rng.normal(scale=1.0, size=(m, n))
    return AffineGroupElement(A, a, flavor)


def random_integral(
    n: int, m: int, seed: int, flavor: str = "GL", length: int = 8
) -> IntegralGroupElement:
    """Random word in elementary matrices, giving a unimodular (A, a)."""
    rng = np.random.default_rng(seed)
    A = np.eye(n, dtype=np.int64)
    for _ in range(length):
        kind = rng.integers(3)
        if kind == 0 and n >= 2:  # shear
            i, j = rng.choice(n, size=2, replace=False)
            E = np.eye(n, dtype=np.int64)
            E[i, j] = rng.choice([-1, 1])
            A = A @ E
        elif kind == 1 and n >= 2:  # swap with sign (det +1)
            i, j = rng.choice(n, size=2, replace=False)
            E = np.eye(n, dtype=np.int64)
            E[i, i] = 0
            E[j, j] = 0
            E[i, j] = 1
            E[j, i] = -1
            A = A @ E
        else:  # sign pair (det +1)
            if n >= 2:
                i, j = rng.choice(n, size=2, replace=False)
                E = np.eye(n, dtype=np.int64)
                E[i, i] = -1
                E[j, j] = -1
                A = A @ E
    if flavor == "GL" and rng.integers(2) == 1:
        A[:, 0] = -A[:, 0]
    a = rng.integers(-3, 4, size=(m, n)).astype(np.int64)
    return IntegralGroupElement(A, a, flavor)
