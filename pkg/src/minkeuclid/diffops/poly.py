"""Coefficient arithmetic: finite sums of power monomials.

A monomial is ``scalar * prod_i x_i^(e_i)`` with exponents that are exact
integers or fractions (fractional powers carry the ``v^(k/(k-1))`` factors
of the recursive chart). Scalars are exact rationals whenever possible and
floats otherwise; the class is closed under product and differentiation.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import ChartError


def _is_zero(c) -> bool:
    return c == 0


class CoeffPoly:
    """Canonical sum of power monomials over a fixed coordinate tuple."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms=None):
        self.dim = dim
        cleaned = {}
        if terms:
            for exps, c in terms.items():
                if not _is_zero(c):
                    cleaned[exps] = c
        self.terms = cleaned

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(dim: int) -> "CoeffPoly":
        return CoeffPoly(dim)

    @staticmethod
    def constant(c, dim: int) -> "CoeffPoly":
        return CoeffPoly(dim, {(0,) * dim: c})

    @staticmethod
    def monomial(c, exps, dim: int) -> "CoeffPoly":
        exps = tuple(exps)
        if len(exps) != dim:
            raise ChartError("exponent vector has the wrong length")
        return CoeffPoly(dim, {exps: c})

    @staticmethod
    def variable(index: int, dim: int, power=1) -> "CoeffPoly":
        exps = [0] * dim
        exps[index] = power
        return CoeffPoly(dim, {tuple(exps): Fraction(1)})

    # -- algebra --------------------------------------------------------------

    def __add__(self, other: "CoeffPoly") -> "CoeffPoly":
        out = dict(self.terms)
        for exps, c in other.terms.items():
            out[exps] = out.get(exps, 0) + c
        return CoeffPoly(self.dim, out)

    def __sub__(self, other: "CoeffPoly") -> "CoeffPoly":
        out = dict(self.terms)
        for exps, c in other.terms.items():
            out[exps] = out.get(exps, 0) - c
        return CoeffPoly(self.dim, out)

    def __neg__(self) -> "CoeffPoly":
        return CoeffPoly(self.dim, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other: "CoeffPoly") -> "CoeffPoly":
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                out[key] = out.get(key, 0) + c1 * c2
        return CoeffPoly(self.dim, out)

    def scale(self, c) -> "CoeffPoly":
        if _is_zero(c):
            return CoeffPoly.zero(self.dim)
        return CoeffPoly(self.dim, {e: c * v for e, v in self.terms.items()})

    def diff(self, i: int) -> "CoeffPoly":
        out: dict = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if _is_zero(e):
                continue
            key = exps[:i] + (e - 1,) + exps[i + 1 :]
            out[key] = out.get(key, 0) + c * e
        return CoeffPoly(self.dim, out)

    # -- queries ---------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def depends_on(self, i: int) -> bool:
        return any(not _is_zero(e[i]) for e in self.terms)

    def evaluate(self, point) -> float:
        total = 0.0
        for exps, c in self.terms.items():
            val = float(c)
            for x, e in zip(point, exps):
                if _is_zero(e):
                    continue
                if isinstance(e, int) or (isinstance(e, Fraction) and e.denominator == 1):
                    val *= float(x) ** int(e)
                else:
                    if x <= 0:
                        raise ChartError(
                            "fractional power of a non-positive coordinate"
                        )
                    val *= float(x) ** float(e)
            total += val
        return total

    def l1_norm(self) -> float:
        return float(sum(abs(c) for c in self.terms.values()))

    def max_deviation(self, other: "CoeffPoly") -> float:
        keys = set(self.terms) | set(other.terms)
        dev = 0.0
        for k in keys:
            dev = max(dev, abs(float(self.terms.get(k, 0)) - float(other.terms.get(k, 0))))
        return dev

    def canonical(self):
        """Deterministically ordered (exps, scalar) pairs."""
        return sorted(self.terms.items(), key=lambda kv: tuple(map(float, kv[0])))

    def __eq__(self, other):
        if not isinstance(other, CoeffPoly):
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[k] == other.terms[k] for k in self.terms)

    def __hash__(self):  # pragma: no cover - not used as dict key
        return hash(tuple(self.canonical()))

    def __repr__(self):
        if self.is_zero:
            return "0"
        bits = []
        for exps, c in self.canonical():
            mono = "*".join(
                f"x{i}^{e}" for i, e in enumerate(exps) if not _is_zero(e)
            )
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)
