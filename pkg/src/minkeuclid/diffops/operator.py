"""Normal-ordered differential operators with power-monomial coefficients.

An operator is a sum of terms ``coefficient(x) * d^alpha`` with all
derivatives to the right of all coefficients. Composition follows the
generalized Leibniz rule

    (c1 d^a) (c2 d^b) = sum_{g <= a} binom(a, g) c1 d^g(c2) d^(a - g + b),

which keeps the result normal-ordered; with rational scalars the algebra is
exact, so commutator identities can be asserted with zero tolerance.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ..errors import DimensionMismatch
from .coords import CoordinateSystem
from .poly import CoeffPoly


def _multi_binom(alpha, gamma) -> int:
    out = 1
    for a, g in zip(alpha, gamma):
        out *= math.comb(a, g)
    return out


class DiffOperator:
    """Immutable normal-ordered operator over a fixed coordinate system."""

    __slots__ = ("coords", "terms")

    def __init__(self, coords: CoordinateSystem, terms=None):
        self.coords = coords
        cleaned = {}
        if terms:
            for alpha, poly in terms.items():
                if not poly.is_zero:
                    cleaned[alpha] = poly
        self.terms = cleaned

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def zero(coords: CoordinateSystem) -> "DiffOperator":
        return DiffOperator(coords)

    @staticmethod
    def identity(coords: CoordinateSystem) -> "DiffOperator":
        return DiffOperator.multiplication(CoeffPoly.constant(Fraction(1), coords.dim), coords)

    @staticmethod
    def multiplication(poly: CoeffPoly, coords: CoordinateSystem) -> "DiffOperator":
        return DiffOperator(coords, {(0,) * coords.dim: poly})

    @staticmethod
    def partial(coords: CoordinateSystem, index: int, order: int = 1, scalar=Fraction(1)) -> "DiffOperator":
        alpha = [0] * coords.dim
        alpha[index] = order
        return DiffOperator(
            coords, {tuple(alpha): CoeffPoly.constant(scalar, coords.dim)}
        )

    # -- ring structure ---------------------------------------------------------

    def _check(self, other: "DiffOperator"):
        if self.coords != other.coords:
            raise DimensionMismatch("operators live on different coordinate systems")

    def __add__(self, other: "DiffOperator") -> "DiffOperator":
        self._check(other)
        out = dict(self.terms)
        for alpha, poly in other.terms.items():
            out[alpha] = out[alpha] + poly if alpha in out else poly
        return DiffOperator(self.coords, out)

    def __sub__(self, other: "DiffOperator") -> "DiffOperator":
        return self + other.scale(-1)

    def scale(self, c) -> "DiffOperator":
        return DiffOperator(
            self.coords, {a: p.scale(c) for a, p in self.terms.items()}
        )

    def __matmul__(self, other: "DiffOperator") -> "DiffOperator":
        """Normal-ordered composition (generalized Leibniz)."""
        self._check(other)
        dim = self.coords.dim
        out: dict = {}
        for a2, c2 in other.terms.items():
            # lazy cache of iterated derivatives of c2
            derivs = {(0,) * dim: c2}

            def deriv(gamma):
                poly = derivs.get(gamma)
                if poly is not None:
                    return poly
                i = next(k for k, g in enumerate(gamma) if g > 0)
                lower = gamma[:i] + (gamma[i] - 1,) + gamma[i + 1 :]
                poly = deriv(lower).diff(i)
                derivs[gamma] = poly
                return poly

            for a1, c1 in self.terms.items():
                active = [i for i in range(dim) if a1[i] > 0]
                gammas = [(0,) * dim]
                for i in active:
                    gammas = [
                        g[:i] + (k,) + g[i + 1 :]
                        for g in gammas
                        for k in range(a1[i] + 1)
                    ]
                for gamma in gammas:
                    dpoly = deriv(gamma)
                    if dpoly.is_zero:
                        continue
                    coeff = (c1 * dpoly).scale(_multi_binom(a1, gamma))
                    alpha = tuple(x - g + y for x, g, y in zip(a1, gamma, a2))
                    out[alpha] = out[alpha] + coeff if alpha in out else coeff
        return DiffOperator(self.coords, out)

    def commutator(self, other: "DiffOperator") -> "DiffOperator":
        return (self @ other) - (other @ self)

    # -- queries ------------------------------------------------------------------

    @property
    def order(self) -> int:
        return max((sum(a) for a in self.terms), default=0)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient_l1(self) -> float:
        return float(sum(p.l1_norm() for p in self.terms.values()))

    def max_deviation(self, other: "DiffOperator") -> float:
        self._check(other)
        keys = set(self.terms) | set(other.terms)
        zero = CoeffPoly.zero(self.coords.dim)
        dev = 0.0
        for k in keys:
            dev = max(
                dev,
                self.terms.get(k, zero).max_deviation(other.terms.get(k, zero)),
            )
        return dev

    def __eq__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        if self.coords != other.coords or set(self.terms) != set(other.terms):
            return False
        return all(self.terms[k] == other.terms[k] for k in self.terms)

    def __hash__(self):  # pragma: no cover
        return hash((self.coords, tuple(sorted(self.terms))))

    def canonical_terms(self):
        """Terms sorted by derivative multi-index, then exponent vector."""
        return [
            (alpha, self.terms[alpha].canonical())
            for alpha in sorted(self.terms)
        ]

    def __repr__(self):
        if self.is_zero:
            return "DiffOperator<0>"
        names = self.coords.names
        bits = []
        for alpha, poly in self.canonical_terms():
            d = "".join(
                f" d/d{names[i]}" + (f"^{a}" if a > 1 else "")
                for i, a in enumerate(alpha)
                if a
            )
            bits.append(f"({CoeffPoly(self.coords.dim, dict(poly))!r}){d}")
        return "DiffOperator<" + " + ".join(bits) + ">"


# ---------------------------------------------------------------------------
# public functional wrappers


def op_add(d1: DiffOperator, d2: DiffOperator) -> DiffOperator:
    return d1 + d2


def op_scale(c, d: DiffOperator) -> DiffOperator:
    return d.scale(c)


def op_compose(d1: DiffOperator, d2: DiffOperator) -> DiffOperator:
    return d1 @ d2


def op_commutator(d1: DiffOperator, d2: DiffOperator) -> DiffOperator:
    return d1.commutator(d2)


def op_equal(d1: DiffOperator, d2: DiffOperator, tol: float = 0.0) -> bool:
    """Canonical-form equality; exact when ``tol`` is zero."""
    if tol == 0.0:
        return d1 == d2
    return d1.max_deviation(d2) <= tol


# ---------------------------------------------------------------------------
# matrices of operators (the calculus behind the trace constructions)


def mat_from(entries) -> list:
    return [list(row) for row in entries]


def mat_mul(a, b) -> list:
    rows, inner, cols = len(a), len(b), len(b[0])
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = None
            for k in range(inner):
                term = a[i][k] @ b[k][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def mat_power(a, j: int) -> list:
    out = a
    for _ in range(j - 1):
        out = mat_mul(out, a)
    return out


def mat_trace(a) -> DiffOperator:
    acc = a[0][0]
    for i in range(1, len(a)):
        acc = acc + a[i][i]
    return acc


def mat_transpose(a) -> list:
    return [list(row) for row in zip(*a)]


def mat_scale(c, a) -> list:
    return [[entry.scale(c) for entry in row] for row in a]
