"""Symbolic invariant differential operators and their numeric application."""

from .analysis import (
    CharacterValue,
    commutes_with_all,
    eigenvalue_extract,
    invariance_residual,
    jet_of,
    op_apply,
)
from .builders import (
    IndexMatrix,
    op_D,
    op_L,
    op_M,
    op_Omega,
    op_delta,
    op_laplace_cone,
    op_laplace_pnm,
    op_laplace_sl_iwasawa,
)
from .coords import (
    CoordinateSystem,
    coords_to_point,
    iwasawa_coords,
    pnm_coords,
    point_to_coords,
)
from .functions import ChartFn, inu_fn, phi_fn, probe_fn, ps_fn, pushforward_fn
from .jets import Jet, finite_difference_jet, jet_det, seed_jets
from .operator import (
    DiffOperator,
    op_add,
    op_commutator,
    op_compose,
    op_equal,
    op_scale,
)
from .poly import CoeffPoly

__all__ = [
    "CharacterValue",
    "ChartFn",
    "CoeffPoly",
    "CoordinateSystem",
    "DiffOperator",
    "IndexMatrix",
    "Jet",
    "commutes_with_all",
    "coords_to_point",
    "eigenvalue_extract",
    "finite_difference_jet",
    "inu_fn",
    "invariance_residual",
    "iwasawa_coords",
    "jet_det",
    "jet_of",
    "op_D",
    "op_L",
    "op_M",
    "op_Omega",
    "op_add",
    "op_apply",
    "op_commutator",
    "op_compose",
    "op_delta",
    "op_equal",
    "op_laplace_cone",
    "op_laplace_pnm",
    "op_laplace_sl_iwasawa",
    "op_scale",
    "phi_fn",
    "pnm_coords",
    "point_to_coords",
    "probe_fn",
    "ps_fn",
    "pushforward_fn",
    "seed_jets",
]
