"""Conformal metrics ``g_p(v, w) = phi(p) * B(v, w)`` on truncated l2."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .sequence import (
    DEFAULT_WEIGHTS,
    UNIT_WEIGHTS,
    TruncatedVector,
    WeightSequence,
    bilinear_B,
    check_same_dim,
    norm,
)


class Conformal(enum.Enum):
    GAUSSIAN = "gaussian"  # phi(p) = exp(-|p|^2)
    CONSTANT_ONE = "constant_one"  # phi(p) = 1

    def log_factor(self, sqnorm):
        """``log phi`` as a function of ``|p|^2``; accepts scalars or arrays."""
        if self is Conformal.GAUSSIAN:
            return -np.asarray(sqnorm, dtype=float)
        return np.zeros_like(np.asarray(sqnorm, dtype=float))

    def log_factor_grad(self, point: np.ndarray) -> np.ndarray:
        """Gradient of ``log phi`` at ``point`` (last axis = coordinates)."""
        if self is Conformal.GAUSSIAN:
            return -2.0 * np.asarray(point, dtype=float)
        return np.zeros_like(np.asarray(point, dtype=float))


@dataclass(frozen=True)
class MetricSpec:
    conformal: Conformal
    weights: WeightSequence
    name: str = ""

    def factor(self, p: TruncatedVector) -> float:
        # underflows to 0.0 for large |p|; see README
        if self.conformal is Conformal.CONSTANT_ONE:
            return 1.0
        return math.exp(-norm(p) ** 2)


WEAK = MetricSpec(Conformal.GAUSSIAN, DEFAULT_WEIGHTS, name="weak")
EUCLIDEAN = MetricSpec(Conformal.CONSTANT_ONE, UNIT_WEIGHTS, name="euclidean")

METRICS = {"weak": WEAK, "euclidean": EUCLIDEAN}


def metric_eval(m: MetricSpec, p: TruncatedVector, v: TruncatedVector, w: TruncatedVector) -> float:
    check_same_dim(p, v, w)
    return m.factor(p) * bilinear_B(m.weights, v, w)


def tangent_norm(m: MetricSpec, p: TruncatedVector, v: TruncatedVector) -> float:
    """Length of ``v`` in the tangent space at ``p``."""
    return math.sqrt(metric_eval(m, p, v, v))
