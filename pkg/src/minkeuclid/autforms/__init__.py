"""Special functions and automorphic-form checkers."""

from .bessel import BesselQuery, k_bessel
from .checker import AutomorphicCheckConfig, CheckSubject, automorphic_check
from .eisenstein import (
    EisensteinQuery,
    coset_pairs_n3,
    coset_vectors_n2,
    eisenstein,
    eisenstein_chart_fn,
    eisenstein_eigenvalue,
)
from .fourier import cusp_integral, fourier_coefficient, growth_ratio, unipotent_dim
from .power import (
    b_matrix,
    i_nu,
    i_nu_tilde,
    phi_z,
    power_p,
    spherical_h,
    tau_from_s,
    tau_r,
)

__all__ = [
    "AutomorphicCheckConfig",
    "BesselQuery",
    "CheckSubject",
    "EisensteinQuery",
    "automorphic_check",
    "b_matrix",
    "coset_pairs_n3",
    "coset_vectors_n2",
    "cusp_integral",
    "eisenstein",
    "eisenstein_chart_fn",
    "eisenstein_eigenvalue",
    "fourier_coefficient",
    "growth_ratio",
    "i_nu",
    "i_nu_tilde",
    "k_bessel",
    "phi_z",
    "power_p",
    "spherical_h",
    "tau_from_s",
    "tau_r",
    "unipotent_dim",
]
