import numpy as np

from minkeuclid.matcore import SpdPoint


def well_conditioned_spd(n, seed, floor=0.5):
    """Random SPD point bounded away from the cone boundary: finite-difference
    stencils and fractional powers stay well inside the domain."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, n))
    y = g @ g.T / n + floor * np.eye(n)
    return SpdPoint.from_matrix((y + y.T) / 2.0)
