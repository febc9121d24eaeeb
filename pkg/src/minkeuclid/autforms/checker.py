"""Composite automorphic-form checker.

Runs the definitional conditions against a function: invariance under
random integral group elements, simultaneous-eigenfunction behavior for a
user-selected commuting operator family (the center of the full operator
algebra is unknown, so a verified-commutative subalgebra stands in for it),
cusp integrals, and the growth envelope. The report carries residuals and
verdicts; failures are data, not errors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from ..diffops.analysis import eigenvalue_extract
from ..diffops.functions import ChartFn
from ..diffops.operator import DiffOperator
from ..errors import ChartError, DimensionMismatch
from ..groups import random_integral
from .fourier import cusp_integral, growth_ratio


@dataclass(frozen=True)
class CheckSubject:
    """Function under test.

    ``value(y, v)`` evaluates on a cone point (``v`` is ``None`` when m=0);
    ``chart_fn`` (optional) provides the jet-capable form used by the
    eigenfunction checks, on whatever chart the configured operators use;
    ``chart_points`` are probe points on that chart.
    """

    n: int
    m: int
    value: Callable
    chart_fn: Optional[ChartFn] = None
    label: str = ""


@dataclass(frozen=True)
class AutomorphicCheckConfig:
    """Knobs of the composite check; defaults follow the module contract
    (20 group elements, 5 eigen-points, 2^14 quasi-random points)."""

    group: str  # gl_n | sl_n | gl_nm | sl_nm
    operators: Sequence[DiffOperator] = ()
    probe_points: Sequence = ()  # (y, v) pairs
    chart_points: Sequence = ()  # chart vectors for the eigen checks
    cusp_js: Sequence[int] = ()
    cusp_point: object = None
    cusp_variant: str = "cone"
    growth_ray: Optional[Callable] = None
    growth_s: Optional[Sequence] = None
    growth_samples: Sequence = ()
    n_group_elements: int = 20
    qmc_points: int = 2**14
    seed: int = 0
    invariance_tol: float = 1e-9
    eigen_tol: float = 1e-6
    cusp_tol: float = 1e-6
    growth_cap: float = 1e3
    operator_commute_tol: float = 0.0
    workers: int = 1

    def __post_init__(self):
        if self.group not in ("gl_n", "sl_n", "gl_nm", "sl_nm"):
            raise ChartError(f"unknown group variant {self.group!r}")


def _verify_commuting(operators, tol: float):
    ops = list(operators)
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            norm = ops[i].commutator(ops[j]).coefficient_l1()
            if norm > tol:
                raise ChartError(
                    "operator set is not commutative "
                    f"(pair {i},{j} has commutator norm {norm:g}); "
                    "the eigen-system condition needs a commutative subalgebra"
                )


def automorphic_check(subject: CheckSubject, config: AutomorphicCheckConfig) -> dict:
    """Run all configured conditions and return a structured report."""
    if config.operators:
        _verify_commuting(config.operators, config.operator_commute_tol)
    report: dict = {"label": subject.label, "group": config.group, "conditions": {}}

    # invariance under random integral elements
    if config.probe_points and config.n_group_elements > 0:
        flavor = "SL" if config.group.startswith("sl") else "GL"
        m_group = subject.m if config.group.endswith("nm") else 0
        worst = 0.0
        for k in range(config.n_group_elements):
            g = random_integral(
                subject.n, max(m_group, 0), seed=config.seed + 7 * k, flavor=flavor
            )
            a_f = g.A.astype(float)
            trans = g.a.astype(float)
            for y, v in config.probe_points:
                y = np.asarray(y, float)
                base = subject.value(y, v)
                y2 = a_f @ y @ a_f.T
                y2 = (y2 + y2.T) / 2.0
                if subject.m and v is not None:
                    v2 = (np.asarray(v, float) + trans) @ a_f.T if m_group else np.asarray(v, float) @ a_f.T
                    moved = subject.value(y2, v2)
                else:
                    moved = subject.value(y2, None)
                worst = max(worst, abs(moved - base) / (1.0 + abs(base)))
        report["conditions"]["invariance"] = {
            "residual": worst,
            "tolerance": config.invariance_tol,
            "pass": bool(worst <= config.invariance_tol),
        }

    # eigenfunction conditions
    if config.operators:
        if subject.chart_fn is None or not len(config.chart_points):
            raise DimensionMismatch(
                "eigen checks need a chart function and chart probe points"
            )
        entries = []
        for op in config.operators:
            cv = eigenvalue_extract(op, subject.chart_fn, config.chart_points)
            entries.append(
                {
                    "eigenvalue": cv.value,
                    "constancy_residual": cv.constancy_residual,
                    "skipped_points": cv.skipped,
                    "pass": bool(cv.constancy_residual <= config.eigen_tol),
                }
            )
        report["conditions"]["eigenfunction"] = {
            "operators": entries,
            "tolerance": config.eigen_tol,
            "pass": bool(all(e["pass"] for e in entries)),
        }

    # cusp integrals
    if config.cusp_js:
        entries = []
        for j in config.cusp_js:
            val, err = cusp_integral(
                _cusp_adapter(subject, config.cusp_variant),
                j,
                config.cusp_variant,
                config.cusp_point,
                n_points=config.qmc_points,
                seed=config.seed,
                workers=config.workers,
            )
            entries.append(
                {
                    "j": j,
                    "integral": val,
                    "stderr": err,
                    "vanishes": bool(abs(val) <= max(config.cusp_tol, 4 * err)),
                }
            )
        report["conditions"]["cusp"] = {
            "integrals": entries,
            "tolerance": config.cusp_tol,
            "pass": bool(all(e["vanishes"] for e in entries)),
        }

    # growth envelope
    if config.growth_ray is not None and config.growth_s is not None:
        ratio = growth_ratio(
            _growth_adapter(subject),
            config.growth_s,
            config.growth_ray,
            config.growth_samples,
        )
        report["conditions"]["growth"] = {
            "max_ratio": ratio,
            "cap": config.growth_cap,
            "pass": bool(ratio <= config.growth_cap),
        }

    report["pass"] = bool(
        all(c.get("pass", True) for c in report["conditions"].values())
    )
    return report


def _cusp_adapter(subject: CheckSubject, variant: str):
    if variant in ("cone", "sl"):
        return lambda y: subject.value(y, None)
    if variant == "pnm":
        return lambda y, eta: subject.value(y, eta)
    raise ChartError(f"checker does not drive the {variant!r} cusp variant")


def _growth_adapter(subject: CheckSubject):
    def f(y, v=None):
        mat = y if isinstance(y, np.ndarray) else y.matrix
        return subject.value(mat, v)

    return f
