"""Geometry, invariant differential operators and automorphic-form checkers
on the cone of positive matrices and its Euclidean extensions."""

__version__ = "0.1.0"
