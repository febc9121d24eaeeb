"""Matrix-argument Bessel integrals over the cone.

Implemented with the decaying exponential ``exp(-Tr(A Y + B Y^{-1}))``: the
printed growing sign diverges for positive definite arguments and is kept
only behind a flag that reports the divergence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.integrate

from ..errors import DivergentParameters, QuadratureFailure
from ..matcore import SpdPoint, UnitDetSpdPoint


@dataclass(frozen=True)
class BesselQuery:
    s: tuple
    A: np.ndarray
    B: np.ndarray
    epsabs: float = 1e-10
    epsrel: float = 1e-10
    sign: str = "decaying"

    def __post_init__(self):
        a = self.A.matrix if isinstance(self.A, (SpdPoint, UnitDetSpdPoint)) else np.asarray(self.A, float)
        b = self.B.matrix if isinstance(self.B, (SpdPoint, UnitDetSpdPoint)) else np.asarray(self.B, float)
        SpdPoint.from_matrix(a)
        SpdPoint.from_matrix(b)
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "B", b)
        s = tuple(complex(x) for x in np.atleast_1d(np.asarray(self.s)))
        if len(s) != a.shape[0]:
            raise DivergentParameters("exponent count must match the matrix size")
        object.__setattr__(self, "s", s)

    @property
    def n(self) -> int:
        return self.A.shape[0]


def _quad_complex(f, lo, hi, epsabs, epsrel, limit=200):
    re, re_err = scipy.integrate.quad(
        lambda t: f(t).real, lo, hi, epsabs=epsabs, epsrel=epsrel, limit=limit
    )
    im, im_err = scipy.integrate.quad(
        lambda t: f(t).imag, lo, hi, epsabs=epsabs, epsrel=epsrel, limit=limit
    )
    return complex(re, im), re_err + im_err


def k_bessel(query: BesselQuery) -> tuple[complex, float]:
    """Cone Bessel integral with an absolute-error estimate.

    n=1 is adaptive quadrature on the half line of
    ``y^(s-1) exp(-(a y + b / y))``; n=2 is iterated quadrature in upper
    Cholesky coordinates ``Y = T' T`` (t1, t2 positive, t3 free), where the
    invariant measure pulls back to ``4 t1^(2 s1 + 2 s2 - 1) t2^(2 s2 - 2)``
    times Lebesgue measure.
    """
    if query.sign == "as_printed":
        raise DivergentParameters(
            "the growing exponential diverges for positive definite arguments; "
            "use the decaying sign"
        )
    if query.n == 1:
        a = float(query.A[0, 0])
        b = float(query.B[0, 0])
        s = query.s[0]

        def integrand(y):
            return y ** (s - 1.0) * np.exp(-(a * y + b / y))

        value, err = _quad_complex(integrand, 0.0, np.inf, query.epsabs, query.epsrel)
        if not np.isfinite(value.real):
            raise QuadratureFailure("half-line quadrature failed")
        return value, err
    if query.n == 2:
        return _k_bessel_n2(query)
    raise QuadratureFailure("quadrature is budgeted for n <= 2")


def _k_bessel_n2(query: BesselQuery) -> tuple[complex, float]:
    a_mat = query.A
    b_mat = query.B
    s1, s2 = query.s
    eps = max(query.epsabs, 1e-9)

    total_err = 0.0

    def innermost(t1, t2):
        def f(t3):
            y = np.array(
                [[t1 * t1, t1 * t3], [t1 * t3, t3 * t3 + t2 * t2]]
            )
            det = t1 * t1 * t2 * t2
            yinv = (
                np.array([[t3 * t3 + t2 * t2, -t1 * t3], [-t1 * t3, t1 * t1]]) / det
            )
            tr = np.trace(a_mat @ y) + np.trace(b_mat @ yinv)
            return (
                4.0
                * t1 ** (2.0 * s1 + 2.0 * s2 - 1.0)
                * t2 ** (2.0 * s2 - 2.0)
                * np.exp(-tr)
            )

        val, err = _quad_complex(f, -np.inf, np.inf, eps * 10, 1e-8, limit=80)
        return val

    def middle(t1):
        def f(t2):
            return innermost(t1, t2)

        val, err = _quad_complex(f, 0.0, np.inf, eps * 100, 1e-7, limit=60)
        return val

    value, err = _quad_complex(middle, 0.0, np.inf, eps * 1000, 1e-6, limit=60)
    total_err = err
    if not np.isfinite(value.real):
        raise QuadratureFailure("iterated quadrature failed")
    return value, total_err
