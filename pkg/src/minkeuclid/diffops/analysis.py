"""Applying operators to functions and the derived residual checks."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import JetOrderError
from ..groups import AffineGroupElement, glnm_act, MinkowskiEuclidPoint
from ..matcore import SpdPoint
from .coords import coords_to_point, point_to_coords
from .functions import ChartFn, pushforward_fn
from .jets import Jet, finite_difference_jet, seed_jets
from .operator import DiffOperator

DEFAULT_JET_ORDER = 6


@dataclass(frozen=True)
class CharacterValue:
    """Eigenvalue estimate with its constancy defect across probe points."""

    value: complex
    constancy_residual: float
    skipped: int = 0


def jet_of(fn, point, order: int = DEFAULT_JET_ORDER, step: float = 0.02) -> Jet:
    """Jet of a chart function: exact Taylor mode for built-ins, nested
    central differences for black boxes."""
    point = np.asarray(point, dtype=float).reshape(-1)
    if isinstance(fn, ChartFn) and fn.jet is not None:
        return fn.jet(seed_jets(point, order))
    value = fn.value if isinstance(fn, ChartFn) else fn
    return finite_difference_jet(value, point, order, step=step)


def op_apply(
    d: DiffOperator,
    fn,
    point,
    jet_order: int | None = None,
    step: float = 0.02,
) -> complex:
    """Contract an operator against the jet of a function at a point.

    The jet order defaults to the operator order; an explicitly smaller jet
    order is refused rather than silently truncated.
    """
    needed = d.order
    order = needed if jet_order is None else jet_order
    if order < needed:
        raise JetOrderError(
            f"operator has order {needed} but the jet order is {order}"
        )
    point = np.asarray(point, dtype=float).reshape(-1)
    jet = jet_of(fn, point, order, step=step)
    total = 0.0 + 0.0j
    for alpha, poly in d.terms.items():
        fact = 1
        for a in alpha:
            fact *= math.factorial(a)
        total += poly.evaluate(point) * fact * jet.coeffs.get(alpha, 0.0 + 0.0j)
    return total


def invariance_residual(
    d: DiffOperator,
    g: AffineGroupElement,
    fn: ChartFn,
    points,
    jet_order: int | None = None,
) -> float:
    """max over points of |D(f o g)(p) - (D f)(g p)| / scale."""
    coords = fn.coords
    fg = pushforward_fn(fn, g)
    worst = 0.0
    for point in points:
        point = np.asarray(point, dtype=float).reshape(-1)
        y, v = coords_to_point(coords, point)
        moved = glnm_act(g, MinkowskiEuclidPoint(SpdPoint.from_matrix(y), v))
        moved_point = point_to_coords(coords, moved.Y.matrix, moved.V)
        lhs = op_apply(d, fg, point, jet_order)
        rhs = op_apply(d, fn, moved_point, jet_order)
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return worst


def eigenvalue_extract(
    d: DiffOperator,
    fn,
    points,
    jet_order: int | None = None,
    zero_tol: float = 1e-12,
    step: float = 0.02,
) -> CharacterValue:
    """Mean ratio (D f) / f over probe points with its constancy residual.

    Points where ``f`` vanishes (below ``zero_tol``) are skipped and counted.
    """
    ratios = []
    skipped = 0
    for point in points:
        point = np.asarray(point, dtype=float).reshape(-1)
        fv = fn.value(point) if isinstance(fn, ChartFn) else fn(point)
        if abs(fv) <= zero_tol:
            skipped += 1
            continue
        ratios.append(op_apply(d, fn, point, jet_order, step=step) / fv)
    if not ratios:
        return CharacterValue(complex("nan"), float("inf"), skipped)
    mean = sum(ratios) / len(ratios)
    residual = max(abs(r - mean) for r in ratios)
    return CharacterValue(mean, residual, skipped)


def commutes_with_all(d: DiffOperator, generators) -> list:
    """Coefficient norms of the commutators with each generator (exact zeros
    for rational operators that commute)."""
    return [d.commutator(g).coefficient_l1() for g in generators]
