"""Discrete geodesic shortening and upper bounds on the geodesic distance.

The energy of a polyline ``x_0, ..., x_m`` evaluates the metric tensor at
segment midpoints::

    E = m * sum_i phi(c_i) * B(d_i, d_i),  c_i = (x_i + x_{i+1}) / 2,  d_i = x_{i+1} - x_i

and is minimized over the interior points by gradient descent with Armijo
backtracking.  The quadrature length of the resulting polyline is an
admissible competitor, hence an upper bound on the distance; nothing here
certifies a lower bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curves import (
    DEFAULT_QUADRATURE,
    ParamCurve,
    QuadratureRule,
    curve_length,
    detour_curve,
    sample_polyline,
    segment_curve,
)
from .metric import MetricSpec
from .sequence import TruncatedVector, check_same_dim


class OptimizationError(RuntimeError):
    """Non-finite energy or gradient during shortening."""

    def __init__(self, iteration: int, what: str):
        super().__init__(f"non-finite {what} at iteration {iteration}")
        self.iteration = iteration


@dataclass(frozen=True, eq=False)
class DiscretePath:
    points: np.ndarray  # shape (m + 1, D)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 2:
            raise ValueError("a discrete path needs at least one segment")
        if not np.all(np.isfinite(pts)):
            raise ValueError("path points must be finite")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @classmethod
    def straight(cls, p: TruncatedVector, q: TruncatedVector, segments: int) -> "DiscretePath":
        check_same_dim(p, q)
        s = np.arange(segments + 1)[:, None] / segments
        pts = np.asarray(p) + s * (np.asarray(q) - np.asarray(p))
        pts[-1] = q
        return cls(pts)

    @classmethod
    def from_curve(cls, c: ParamCurve, segments: int) -> "DiscretePath":
        return cls(sample_polyline(c, segments))

    @property
    def segments(self) -> int:
        return self.points.shape[0] - 1

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def with_interior(self, interior: np.ndarray) -> "DiscretePath":
        pts = self.points.copy()
        pts[1:-1] = interior
        return DiscretePath(pts)

    def to_curve(self) -> ParamCurve:
        return ParamCurve(self.points)

    def perturbed(self, scale: float, seed: int) -> "DiscretePath":
        """Add seeded Gaussian noise to the interior points."""
        rng = np.random.default_rng(seed)
        pts = self.points.copy()
        pts[1:-1] += scale * rng.standard_normal(pts[1:-1].shape)
        return DiscretePath(pts)


@dataclass(frozen=True)
class OptimizerConfig:
    max_iters: int = 5000
    grad_tol: float = 1e-8
    step: float = 1.0
    backtrack: float = 0.5
    armijo: float = 1e-4
    rng_seed: int = 0
    max_backtracks: int = 80

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("initial step must be positive")
        if not 0 < self.backtrack < 1:
            raise ValueError("backtracking factor must lie in (0, 1)")
        if self.max_iters < 0:
            raise ValueError("max_iters must be non-negative")


@dataclass(frozen=True)
class Iterate:
    iteration: int
    energy: float
    length: float
    grad_norm: float
    path: DiscretePath


@dataclass(frozen=True, eq=False)
class DistanceEstimate:
    """Upper bound on the geodesic distance, with the curve that achieves it."""

    value: float
    strategy: str
    witness: ParamCurve
    source: str = "segment"
    best_n: int | None = None
    params: dict = field(default_factory=dict)


def _segment_terms(pts: np.ndarray, m: MetricSpec):
    deltas = np.diff(pts, axis=0)
    mids = 0.5 * (pts[:-1] + pts[1:])
    w = m.weights.prefix(pts.shape[1])
    phi = np.exp(m.conformal.log_factor(np.einsum("ij,ij->i", mids, mids)))
    b = np.einsum("ij,j,ij->i", deltas, w, deltas)
    return deltas, mids, w, phi, b


def _energy(pts: np.ndarray, m: MetricSpec) -> float:
    _, _, _, phi, b = _segment_terms(pts, m)
    return (pts.shape[0] - 1) * float(np.sum(phi * b))


def _gradient(pts: np.ndarray, m: MetricSpec) -> np.ndarray:
    nseg = pts.shape[0] - 1
    deltas, mids, w, phi, b = _segment_terms(pts, m)
    # both endpoints of a segment see half of the conformal-factor derivative
    conf = (0.5 * nseg * phi * b)[:, None] * m.conformal.log_factor_grad(mids)
    quad = (2.0 * nseg * phi)[:, None] * (w * deltas)
    return conf[:-1] + quad[:-1] + conf[1:] - quad[1:]


def discrete_energy(path: DiscretePath, m: MetricSpec) -> float:
    return _energy(path.points, m)


def energy_gradient(path: DiscretePath, m: MetricSpec) -> list[np.ndarray]:
    """Gradient of :func:`discrete_energy` with respect to each interior point."""
    return list(_gradient(path.points, m))


def shorten(
    init: DiscretePath,
    m: MetricSpec,
    cfg: OptimizerConfig = OptimizerConfig(),
    quad: QuadratureRule = DEFAULT_QUADRATURE,
    history: list | None = None,
) -> tuple[DiscretePath, float]:
    """Minimize the discrete energy over interior points.

    Returns the shortest accepted iterate (by quadrature length) together
    with that length.  Energy decrease does not imply length decrease, so the
    last iterate is not always the best bound; every iterate has energy at
    most the initial one.  When ``history`` is a list, one :class:`Iterate`
    per accepted step (plus the initial point) is appended to it.

    Raises
    ------
    OptimizationError
        If the energy or its gradient stops being finite.
    """
    pts = init.points.copy()
    energy = _energy(pts, m)
    if not math.isfinite(energy):
        raise OptimizationError(0, "energy")

    length = curve_length(ParamCurve(pts), m, quad)
    best_pts, best_len = pts, length
    it = 0
    while True:
        grad = _gradient(pts, m)
        if not np.all(np.isfinite(grad)):
            raise OptimizationError(it, "gradient")
        gnorm = float(np.max(np.abs(grad))) if grad.size else 0.0
        if history is not None:
            history.append(Iterate(it, energy, length, gnorm, DiscretePath(pts)))
        if gnorm < cfg.grad_tol or it >= cfg.max_iters:
            break

        slope = float(np.sum(grad * grad))
        t = cfg.step
        for _ in range(cfg.max_backtracks):
            trial = pts.copy()
            trial[1:-1] -= t * grad
            trial_energy = _energy(trial, m)
            if not math.isfinite(trial_energy):
                raise OptimizationError(it + 1, "energy")
            if trial_energy <= energy - cfg.armijo * t * slope:
                break
            t *= cfg.backtrack
        else:
            # no representable step decreases the energy any further
            break

        pts, energy = trial, trial_energy
        it += 1
        length = curve_length(ParamCurve(pts), m, quad)
        if length <= best_len:
            best_pts, best_len = pts, length

    return DiscretePath(best_pts), best_len


STRATEGIES = ("segment", "detour_sweep", "optimized")


def estimate_distance(
    p: TruncatedVector,
    q: TruncatedVector,
    m: MetricSpec,
    strategy: str = "optimized",
    cfg: OptimizerConfig = OptimizerConfig(),
    quad: QuadratureRule = DEFAULT_QUADRATURE,
    *,
    n_max: int | None = None,
    segments: int = 12,
) -> DistanceEstimate:
    """Upper bound on the geodesic distance from ``p`` to ``q``.

    ``segment`` uses the straight line, ``detour_sweep`` the shortest detour
    with ``n <= min(n_max, D)``, and ``optimized`` the best of both plus a
    shortened polyline started from the best of those curves.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    dim = check_same_dim(p, q)
    n_top = dim if n_max is None else min(n_max, dim)
    label = f"detour_sweep({n_top})" if strategy == "detour_sweep" else strategy
    params = {"n_max": n_top, "segments": segments} if strategy != "segment" else {}

    seg = segment_curve(p, q)
    if np.array_equal(p, q):
        return DistanceEstimate(0.0, label, seg, "segment", None, params)

    candidates: list[tuple[float, str, int | None, ParamCurve]] = []
    if strategy != "detour_sweep":
        candidates.append((curve_length(seg, m, quad), "segment", None, seg))
    if strategy != "segment":
        for n in range(1, n_top + 1):
            c = detour_curve(p, q, n)
            candidates.append((curve_length(c, m, quad), "detour", n, c))

    best = min(candidates, key=lambda c: c[0])
    if strategy == "optimized":
        init = DiscretePath.from_curve(best[3], max(segments, best[3].n_pieces))
        path, length = shorten(init, m, cfg, quad)
        if length < best[0]:
            best = (length, "shortened", best[2], path.to_curve())

    value, source, best_n, witness = best
    return DistanceEstimate(value, label, witness, source, best_n, params)
