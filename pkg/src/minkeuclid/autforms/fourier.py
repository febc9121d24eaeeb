"""Fourier coefficients, cusp integrals and growth bounds."""

from __future__ import annotations

import numpy as np
from scipy.stats import qmc

from .._parallel import map_chunks
from ..errors import ChartError, DimensionMismatch
from ..geometry import GoldfeldPoint, goldfeld_left_act
from ..matcore import SpdPoint, UnitDetSpdPoint
from .power import power_p


def fourier_coefficient(f, index, v: float, w, grid: int) -> complex:
    """Torus Fourier coefficient of a function periodic in the x-coordinate
    of the chart ``[v, x, W]``.

    Tensor-product trapezoidal quadrature on ``grid`` points per axis, which
    is spectrally accurate for smooth periodic integrands; grids that cannot
    resolve the requested index are rejected (aliasing guard).
    """
    index = np.asarray(index, dtype=np.int64).reshape(-1)
    if grid < 2 * (int(np.max(np.abs(index))) + 1):
        raise ChartError(
            f"grid {grid} cannot resolve index {tuple(index)} without aliasing"
        )
    dim = index.shape[0]
    axes = [np.arange(grid) / grid for _ in range(dim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    xs = np.stack([m.reshape(-1) for m in mesh], axis=1)
    w_mat = w.matrix if isinstance(w, (SpdPoint, UnitDetSpdPoint)) else np.asarray(w, float)
    total = 0.0 + 0.0j
    for x in xs:
        phase = np.exp(-2j * np.pi * float(x @ index))
        total += complex(f(v, x, w_mat)) * phase
    return total / xs.shape[0]


def _upper_unipotent(n: int, j: int, x: np.ndarray) -> np.ndarray:
    u = np.eye(n)
    u[:j, j:] = x.reshape(j, n - j)
    return u


def _block_unipotent(partition, x: np.ndarray) -> np.ndarray:
    n = int(sum(partition))
    u = np.eye(n)
    pos = 0
    offs = np.cumsum([0] + list(partition))
    for bi in range(len(partition)):
        for bj in range(bi + 1, len(partition)):
            r = partition[bi] * partition[bj]
            block = x[pos : pos + r].reshape(partition[bi], partition[bj])
            u[offs[bi] : offs[bi + 1], offs[bj] : offs[bj + 1]] = block
            pos += r
    return u


def unipotent_dim(partition) -> int:
    parts = list(partition)
    return int(sum(parts[i] * parts[j] for i in range(len(parts)) for j in range(i + 1, len(parts))))


def cusp_integral(
    f,
    j: int,
    variant: str,
    point,
    n_points: int = 2**14,
    seed: int = 0,
    partition=None,
    workers: int = 1,
) -> tuple[complex, float]:
    """Quasi-Monte Carlo average of ``f`` over the compact unipotent torus.

    Variants:

    * ``"cone"`` / ``"sl"``: point is a cone / slice point ``Y``; the torus
      is the (j, n-j) block, acting by the congruence bracket; ``f(Y')``.
    * ``"pnm"``: point is ``(Y, V)``; the torus also sweeps the Euclidean
      coordinate; ``f(Y', eta)``.
    * ``"unipotent"``: block partition ``r_1 + ... + r_b = n`` acting on the
      triangular model by left translation; point is a triangular-model
      point (or a pair with a Euclidean part); ``f(z')`` or ``f(z', V')``.

    Returns (integral, standard error over scrambled replicates).
    """
    if variant in ("cone", "sl"):
        mat = point.matrix if isinstance(point, (SpdPoint, UnitDetSpdPoint)) else np.asarray(point, float)
        n = mat.shape[0]
        if not 1 <= j <= n - 1:
            raise DimensionMismatch("block index j must satisfy 1 <= j <= n-1")
        dim = j * (n - j)

        def evaluate(x):
            u = _upper_unipotent(n, j, x)
            return f(u.T @ mat @ u)

    elif variant == "pnm":
        y, v = point
        mat = y.matrix if isinstance(y, (SpdPoint, UnitDetSpdPoint)) else np.asarray(y, float)
        v = np.asarray(v, dtype=float)
        n = mat.shape[0]
        m = v.shape[0]
        if not 1 <= j <= n - 1:
            raise DimensionMismatch("block index j must satisfy 1 <= j <= n-1")
        dim = j * (n - j) + m * n

        def evaluate(x):
            u = _upper_unipotent(n, j, x[: j * (n - j)])
            eta = x[j * (n - j) :].reshape(m, n)
            return f(u.T @ mat @ u, eta)

    elif variant == "unipotent":
        if partition is None:
            raise ChartError("the unipotent variant needs a block partition")
        parts = tuple(int(r) for r in partition)
        if min(parts) < 1:
            raise ChartError("partition entries must be positive")
        if isinstance(point, tuple):
            z, v = point
            v = np.asarray(v, dtype=float)
        else:
            z, v = point, None
        if not isinstance(z, GoldfeldPoint):
            raise DimensionMismatch("unipotent variant needs a triangular-model point")
        n = z.n
        if sum(parts) != n:
            raise ChartError("partition must sum to n")
        udim = unipotent_dim(parts)
        dim = udim + (v.size if v is not None else 0)

        def evaluate(x):
            u = _block_unipotent(parts, x[:udim])
            moved = goldfeld_left_act(u, z)
            if v is None:
                return f(moved)
            lam = x[udim:].reshape(v.shape)
            return f(moved, (v + lam) @ u.T)

    else:
        raise ChartError(f"unknown cusp variant {variant!r}")

    if dim == 0:
        val = complex(evaluate(np.zeros(0)))
        return val, 0.0

    replicates = 8
    per = max(n_points // replicates, 2)

    def run(r):
        sampler = qmc.Sobol(d=dim, scramble=True, seed=seed * 7919 + r)
        xs = sampler.random(per)
        return complex(np.mean([evaluate(x) for x in xs]))

    means = np.array(map_chunks(run, list(range(replicates)), workers))
    value = complex(means.mean())
    stderr = float(means.std(ddof=1) / np.sqrt(replicates))
    return value, stderr


def growth_ratio(f, s, ray, samples) -> float:
    """Max of |f| against the reference power envelope along a ray.

    ``ray`` maps the sample parameter to a cone point (or pair); the
    envelope is ``|p_{-s}(Y)|``. A finite maximum over samples with the
    determinants growing is the testable form of polynomial growth.
    """
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    worst = 0.0
    for t in samples:
        p = ray(t)
        if isinstance(p, tuple):
            y, v = p
            fv = f(y, v)
        else:
            y = p
            fv = f(y)
        mat = y.matrix if isinstance(y, (SpdPoint, UnitDetSpdPoint)) else np.asarray(y, float)
        envelope = abs(power_p(-s, mat))
        if envelope == 0.0:
            raise ChartError("power envelope vanished along the ray")
        worst = max(worst, abs(fv) / envelope)
    return worst
