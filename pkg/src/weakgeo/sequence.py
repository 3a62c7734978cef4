"""Finite truncations of the sequence space l2.

Points and tangent vectors are plain 1-D float arrays of length ``D`` (the
truncation dimension).  Tangent spaces are identified with the space itself,
so the same representation serves both.  Vectors built through :func:`vector`
are validated and marked read-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

TruncatedVector = np.ndarray


class DimensionError(ValueError):
    """Raised when vectors from incompatible truncations interact."""


def vector(coords: Sequence[float] | np.ndarray, dim: int | None = None) -> TruncatedVector:
    """Build a validated, read-only truncated vector.

    ``coords`` shorter than ``dim`` are zero-padded; longer ones are rejected.
    """
    arr = np.array(coords, dtype=float).ravel()
    if dim is not None:
        if dim < 1:
            raise DimensionError(f"truncation dimension must be positive, got {dim}")
        if arr.size > dim:
            raise DimensionError(f"{arr.size} coordinates do not fit in dimension {dim}")
        arr = np.concatenate([arr, np.zeros(dim - arr.size)])
    if arr.size < 1:
        raise DimensionError("a truncated vector needs at least one coordinate")
    if not np.all(np.isfinite(arr)):
        raise ValueError("coordinates must be finite")
    arr.flags.writeable = False
    return arr


def zeros(dim: int) -> TruncatedVector:
    return vector(np.zeros(dim))


def basis_vector(k: int, dim: int) -> TruncatedVector:
    """Return ``e_k`` (1-based index) in dimension ``dim``."""
    if not 1 <= k <= dim:
        raise DimensionError(f"basis index {k} lies beyond truncation dimension {dim}")
    arr = np.zeros(dim)
    arr[k - 1] = 1.0
    return vector(arr)


def check_same_dim(*vectors: np.ndarray) -> int:
    dims = {np.shape(v)[-1] for v in vectors}
    if len(dims) != 1:
        raise DimensionError(f"incompatible truncations: dimensions {sorted(dims)}")
    return dims.pop()


def _dot(x: np.ndarray, y: np.ndarray) -> float:
    # fsum is correctly rounded, so zero padding never changes the result
    return math.fsum(np.multiply(x, y))


def inner(x: TruncatedVector, y: TruncatedVector) -> float:
    check_same_dim(x, y)
    return _dot(x, y)


def norm(x: TruncatedVector) -> float:
    return math.sqrt(_dot(x, x))


@dataclass(frozen=True)
class WeightSequence:
    """Positive diagonal weights ``w_k``, ``k >= 1``.

    ``rule`` maps an integer array of 1-based indices to weights.
    """

    rule: Callable[[np.ndarray], np.ndarray]
    name: str = "custom"

    def prefix(self, dim: int) -> np.ndarray:
        w = np.asarray(self.rule(np.arange(1, dim + 1)), dtype=float)
        if w.shape != (dim,) or not np.all(w > 0) or not np.all(np.isfinite(w)):
            raise ValueError(f"weight sequence {self.name!r} must be finite and positive")
        return w

    def __call__(self, k: int) -> float:
        if k < 1:
            raise ValueError("weight indices start at 1")
        return float(self.prefix(k)[-1])


def power_weights(exponent: float) -> WeightSequence:
    """Weights ``k**-exponent``; exponent 0 gives the identity operator."""
    return WeightSequence(lambda k: np.power(k, -float(exponent)), name=f"k^-{exponent:g}")


DEFAULT_WEIGHTS = power_weights(4)
UNIT_WEIGHTS = power_weights(0)


def apply_diagonal(w: WeightSequence, x: TruncatedVector) -> TruncatedVector:
    return vector(w.prefix(np.shape(x)[-1]) * x)


def bilinear_B(w: WeightSequence, x: TruncatedVector, y: TruncatedVector) -> float:
    """``<x, A y>`` with ``A`` the diagonal operator of ``w``."""
    dim = check_same_dim(x, y)
    return _dot(x, w.prefix(dim) * y)
