"""Coordinate systems the symbolic operators act on.

Two chart families:

* ``pnm``: entries ``y_ij`` (i <= j, symmetry baked into the ordering) of the
  cone factor followed by entries ``v_kl`` of the Euclidean factor;
* ``iwasawa_sl``: the flattened recursive chart on the determinant-one slice,
  levels ``n, n-1, ..., 2`` each contributing ``(v_level, x_level,1..level-1)``.

The coordinate order is fixed and shared by the numeric chart helpers in
:mod:`minkeuclid.geometry`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatch


@dataclass(frozen=True)
class CoordinateSystem:
    kind: str
    n: int
    m: int
    names: tuple

    @property
    def dim(self) -> int:
        return len(self.names)

    def __eq__(self, other):
        return (
            isinstance(other, CoordinateSystem)
            and (self.kind, self.n, self.m) == (other.kind, other.n, other.m)
        )

    def __hash__(self):
        return hash((self.kind, self.n, self.m))

    # -- pnm indexing -------------------------------------------------------

    def y_index(self, i: int, j: int) -> int:
        """Flat index of y_ij (0-based i, j; order-insensitive)."""
        if self.kind != "pnm":
            raise DimensionMismatch("y_index only exists on the pnm chart")
        if i > j:
            i, j = j, i
        if not (0 <= i <= j < self.n):
            raise DimensionMismatch(f"y index ({i},{j}) out of range")
        return i * self.n - i * (i - 1) // 2 + (j - i)

    def v_index(self, k: int, l: int) -> int:
        """Flat index of v_kl (0-based row k < m, column l < n)."""
        if self.kind != "pnm":
            raise DimensionMismatch("v_index only exists on the pnm chart")
        if not (0 <= k < self.m and 0 <= l < self.n):
            raise DimensionMismatch(f"v index ({k},{l}) out of range")
        return self.n * (self.n + 1) // 2 + k * self.n + l

    # -- iwasawa indexing ----------------------------------------------------

    def level_offset(self, level: int) -> int:
        """Start of the block (v_level, x_level,*) in the flattened chart."""
        if self.kind != "iwasawa_sl":
            raise DimensionMismatch("levels only exist on the iwasawa chart")
        if not (2 <= level <= self.n):
            raise DimensionMismatch(f"level {level} out of range")
        # levels n, n-1, ..., level+1 occupy sum_{k=level+1..n} k slots
        return sum(range(level + 1, self.n + 1))

    def v_level_index(self, level: int) -> int:
        return self.level_offset(level)

    def x_level_index(self, level: int, i: int) -> int:
        if not (0 <= i < level - 1):
            raise DimensionMismatch(f"x index {i} out of range at level {level}")
        return self.level_offset(level) + 1 + i


def pnm_coords(n: int, m: int = 0) -> CoordinateSystem:
    names = [f"y_{i + 1}{j + 1}" for i in range(n) for j in range(i, n)]
    names += [f"v_{k + 1}{l + 1}" for k in range(m) for l in range(n)]
    return CoordinateSystem("pnm", n, m, tuple(names))


def iwasawa_coords(n: int) -> CoordinateSystem:
    names = []
    for level in range(n, 1, -1):
        names.append(f"v{level}")
        names += [f"x{level}_{i + 1}" for i in range(level - 1)]
    return CoordinateSystem("iwasawa_sl", n, 0, tuple(names))


def point_to_coords(coords: CoordinateSystem, y, v=None) -> np.ndarray:
    """Flatten a pair (Y, V) into the pnm chart vector."""
    if coords.kind != "pnm":
        raise DimensionMismatch("point_to_coords targets the pnm chart")
    y = np.asarray(y, dtype=float)
    out = np.empty(coords.dim)
    pos = 0
    for i in range(coords.n):
        for j in range(i, coords.n):
            out[pos] = y[i, j]
            pos += 1
    if coords.m:
        if v is None:
            raise DimensionMismatch("chart has v coordinates but no V was given")
        out[pos:] = np.asarray(v, dtype=float).reshape(-1)
    return out


def coords_to_point(coords: CoordinateSystem, vec):
    """Inverse of :func:`point_to_coords`: returns (Y, V) arrays."""
    if coords.kind != "pnm":
        raise DimensionMismatch("coords_to_point targets the pnm chart")
    vec = np.asarray(vec, dtype=float).reshape(-1)
    if vec.shape[0] != coords.dim:
        raise DimensionMismatch("chart vector has the wrong length")
    n, m = coords.n, coords.m
    y = np.zeros((n, n))
    pos = 0
    for i in range(n):
        for j in range(i, n):
            y[i, j] = vec[pos]
            y[j, i] = vec[pos]
            pos += 1
    v = vec[pos:].reshape(m, n) if m else np.zeros((0, n))
    return y, v
