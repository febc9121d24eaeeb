"""Truncated multivariate Taylor expansions (jets).

A jet stores the Taylor coefficients of a scalar function at a basepoint up
to a total degree; arithmetic on jets is Taylor-mode differentiation, which
gives exact derivatives for built-in functions. Black-box functions fall
back to nested central finite differences (fourth-order stencils).
"""

from __future__ import annotations

import cmath
import math
from itertools import product

from ..errors import JetOrderError


class Jet:
    """Taylor polynomial in ``dim`` variables truncated at total degree
    ``order``; coefficient of the multi-index ``alpha`` is
    ``d^alpha f / alpha!``."""

    __slots__ = ("dim", "order", "coeffs")

    def __init__(self, dim: int, order: int, coeffs=None):
        self.dim = dim
        self.order = order
        self.coeffs = {}
        if coeffs:
            for alpha, c in coeffs.items():
                if c != 0 and sum(alpha) <= order:
                    self.coeffs[alpha] = c

    # -- constructors --------------------------------------------------------

    @staticmethod
    def constant(value, dim: int, order: int) -> "Jet":
        return Jet(dim, order, {(0,) * dim: complex(value)})

    @staticmethod
    def variable(value, index: int, dim: int, order: int) -> "Jet":
        alpha = [0] * dim
        alpha[index] = 1
        out = {(0,) * dim: complex(value)}
        if order >= 1:
            out[tuple(alpha)] = 1.0 + 0.0j
        return Jet(dim, order, out)

    @property
    def value(self) -> complex:
        return self.coeffs.get((0,) * self.dim, 0.0 + 0.0j)

    def derivative(self, alpha) -> complex:
        """d^alpha f at the basepoint (coefficient times alpha factorial)."""
        alpha = tuple(alpha)
        if sum(alpha) > self.order:
            raise JetOrderError(
                f"jet of order {self.order} cannot provide derivative {alpha}"
            )
        fact = 1
        for a in alpha:
            fact *= math.factorial(a)
        return self.coeffs.get(alpha, 0.0 + 0.0j) * fact

    # -- ring operations -------------------------------------------------------

    def _check(self, other: "Jet"):
        if self.dim != other.dim or self.order != other.order:
            raise JetOrderError("jets have different shapes")

    def __add__(self, other):
        if not isinstance(other, Jet):
            return self + Jet.constant(other, self.dim, self.order)
        self._check(other)
        out = dict(self.coeffs)
        for a, c in other.coeffs.items():
            out[a] = out.get(a, 0.0) + c
        return Jet(self.dim, self.order, out)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.dim, self.order, {a: -c for a, c in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, Jet):
            return self + (-complex(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            other_c = complex(other)
            return Jet(
                self.dim, self.order, {a: c * other_c for a, c in self.coeffs.items()}
            )
        self._check(other)
        out: dict = {}
        for a1, c1 in self.coeffs.items():
            d1 = sum(a1)
            for a2, c2 in other.coeffs.items():
                if d1 + sum(a2) > self.order:
                    continue
                key = tuple(x + y for x, y in zip(a1, a2))
                out[key] = out.get(key, 0.0) + c1 * c2
        return Jet(self.dim, self.order, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.inverse()
        return self * (1.0 / complex(other))

    def nilpotent(self) -> "Jet":
        out = dict(self.coeffs)
        out.pop((0,) * self.dim, None)
        return Jet(self.dim, self.order, out)

    def _compose_series(self, series) -> "Jet":
        """sum_k series[k] * N^k for the nilpotent part N."""
        n = self.nilpotent()
        acc = Jet.constant(series[0], self.dim, self.order)
        power = Jet.constant(1.0, self.dim, self.order)
        for k in range(1, len(series)):
            power = power * n
            if not power.coeffs:
                break
            acc = acc + power * series[k]
        return acc

    def inverse(self) -> "Jet":
        c0 = self.value
        if c0 == 0:
            raise ZeroDivisionError("jet with vanishing value has no inverse")
        series = [(-1) ** k / c0 ** (k + 1) for k in range(self.order + 1)]
        return self._compose_series(series)

    def power(self, s) -> "Jet":
        """Principal branch of jet**s for scalar (possibly complex) s."""
        if isinstance(s, int) or (isinstance(s, float) and s.is_integer()):
            k = int(s)
            if k >= 0:
                out = Jet.constant(1.0, self.dim, self.order)
                for _ in range(k):
                    out = out * self
                return out
            return self.inverse().power(-k)
        c0 = self.value
        if c0 == 0:
            raise ZeroDivisionError("fractional power of a vanishing jet")
        lead = cmath.exp(s * cmath.log(c0))
        series = [lead]
        binom = 1.0 + 0.0j
        for k in range(1, self.order + 1):
            binom *= (s - (k - 1)) / k
            series.append(lead * binom / c0**k)
        return self._compose_series(series)

    def exp(self) -> "Jet":
        e0 = cmath.exp(self.value)
        series = [e0 / math.factorial(k) for k in range(self.order + 1)]
        return self._compose_series(series)

    def log(self) -> "Jet":
        c0 = self.value
        if c0 == 0:
            raise ZeroDivisionError("log of a vanishing jet")
        series = [cmath.log(c0)]
        for k in range(1, self.order + 1):
            series.append((-1) ** (k + 1) / (k * c0**k))
        return self._compose_series(series)

    def sqrt(self) -> "Jet":
        return self.power(0.5)


def seed_jets(point, order: int) -> list:
    """Coordinate jets at a basepoint."""
    dim = len(point)
    return [Jet.variable(point[i], i, dim, order) for i in range(dim)]


def jet_det(mat: list) -> Jet:
    """Determinant of a square matrix of jets by cofactor expansion."""
    n = len(mat)
    if n == 1:
        return mat[0][0]
    if n == 2:
        return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    acc = None
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        term = mat[0][j] * jet_det(minor)
        if j % 2 == 1:
            term = -term
        acc = term if acc is None else acc + term
    return acc


# ---------------------------------------------------------------------------
# finite differences for black-box functions

# fourth-order-accurate central stencils, offset -> weight (times h^-order)
_STENCILS = {
    0: {0: 1.0},
    1: {-2: 1 / 12, -1: -8 / 12, 1: 8 / 12, 2: -1 / 12},
    2: {-2: -1 / 12, -1: 16 / 12, 0: -30 / 12, 1: 16 / 12, 2: -1 / 12},
    3: {-3: 1 / 8, -2: -1.0, -1: 13 / 8, 1: -13 / 8, 2: 1.0, 3: -1 / 8},
    4: {-3: -1 / 6, -2: 2.0, -1: -13 / 2, 0: 28 / 3, 1: -13 / 2, 2: 2.0, 3: -1 / 6},
}


def finite_difference_jet(f, point, order: int, step: float = 0.02) -> Jet:
    """Jet of a black-box scalar function via nested central differences.

    Each mixed partial up to total degree ``order`` (at most 4 per
    coordinate) is a tensor product of fourth-order one-dimensional
    stencils with step ``step`` per coordinate.
    """
    dim = len(point)
    base = [float(x) for x in point]
    coeffs = {}
    cache = {}

    def call(offsets):
        key = tuple(offsets)
        if key not in cache:
            shifted = [b + o * step for b, o in zip(base, offsets)]
            cache[key] = complex(f(shifted))
        return cache[key]

    for alpha in _multi_indices(dim, order):
        if any(a > 4 for a in alpha):
            raise JetOrderError("finite differences support order <= 4 per axis")
        active = [i for i in range(dim) if alpha[i] > 0]
        stencils = [_STENCILS[alpha[i]] for i in active]
        total = 0.0 + 0.0j
        for combo in product(*[list(s.items()) for s in stencils]):
            offsets = [0] * dim
            weight = 1.0
            for (off, w), i in zip(combo, active):
                offsets[i] = off
                weight *= w
            total += weight * call(offsets)
        k = sum(alpha)
        fact = 1
        for a in alpha:
            fact *= math.factorial(a)
        coeffs[alpha] = total / step**k / fact
    return Jet(dim, order, coeffs)


def _multi_indices(dim: int, order: int):
    """All multi-indices with total degree at most ``order``."""
    if dim == 0:
        yield ()
        return
    for head in range(order + 1):
        for tail in _multi_indices(dim - 1, order - head):
            yield (head,) + tail
