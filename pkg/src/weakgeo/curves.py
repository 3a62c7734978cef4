"""Piecewise-affine curves, their lengths, and the detour construction.

A :class:`ParamCurve` with ``k`` pieces is parameterized on ``[0, 1]`` with
each piece occupying a global interval of width ``1/k``.  Lengths are
computed by composite Gauss-Legendre quadrature of the metric speed, one
piece at a time, with panel doubling until the per-piece relative change
drops below a threshold.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .metric import MetricSpec
from .sequence import (
    DEFAULT_WEIGHTS,
    DimensionError,
    TruncatedVector,
    WeightSequence,
    basis_vector,
    bilinear_B,
    check_same_dim,
    norm,
    vector,
)


@dataclass(frozen=True, eq=False)
class ParamCurve:
    """Polyline through ``vertices`` (shape ``(k + 1, D)``), ``k >= 1`` pieces.

    Storing shared vertices makes consecutive pieces continuous by
    construction.
    """

    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[0] < 2:
            raise ValueError("a curve needs at least one piece (two vertices)")
        if not np.all(np.isfinite(v)):
            raise ValueError("curve vertices must be finite")
        v.flags.writeable = False
        object.__setattr__(self, "vertices", v)

    @classmethod
    def from_pieces(cls, pieces) -> "ParamCurve":
        """Build from ``(start, end)`` pairs; joints must match exactly."""
        pieces = list(pieces)
        if not pieces:
            raise ValueError("a curve needs at least one piece")
        check_same_dim(*(x for pair in pieces for x in pair))
        for (_, end), (start, _) in zip(pieces, pieces[1:]):
            if not np.array_equal(end, start):
                raise ValueError("consecutive pieces must share their joint exactly")
        return cls(np.vstack([pieces[0][0]] + [end for _, end in pieces]))

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def n_pieces(self) -> int:
        return self.vertices.shape[0] - 1

    @property
    def pieces(self) -> list[tuple[np.ndarray, np.ndarray]]:
        v = self.vertices
        return [(v[i], v[i + 1]) for i in range(self.n_pieces)]

    @property
    def start(self) -> np.ndarray:
        return self.vertices[0]

    @property
    def end(self) -> np.ndarray:
        return self.vertices[-1]

    def piece(self, i: int) -> "ParamCurve":
        return ParamCurve(self.vertices[i : i + 2])

    def _locate(self, t: float) -> tuple[int, float]:
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"curve parameter {t} outside [0, 1]")
        k = self.n_pieces
        i = min(int(math.floor(t * k)), k - 1)
        return i, t * k - i

    def __call__(self, t: float) -> np.ndarray:
        i, s = self._locate(t)
        if s == 0.0:
            return self.vertices[i]
        if s == 1.0:
            return self.vertices[i + 1]
        a, b = self.vertices[i], self.vertices[i + 1]
        return vector(a + s * (b - a))

    def velocity(self, t: float) -> np.ndarray:
        """Constant per-piece velocity in the global parameter (right-continuous)."""
        i, _ = self._locate(t)
        return vector((self.vertices[i + 1] - self.vertices[i]) * self.n_pieces)

    def reversed(self) -> "ParamCurve":
        return ParamCurve(self.vertices[::-1])

    def split_piece(self, i: int, s: float = 0.5) -> "ParamCurve":
        """Insert a collinear vertex at local parameter ``s`` of piece ``i``."""
        a, b = self.vertices[i], self.vertices[i + 1]
        mid = a + s * (b - a)
        return ParamCurve(np.vstack([self.vertices[: i + 1], mid, self.vertices[i + 1 :]]))


def segment_curve(p: TruncatedVector, q: TruncatedVector) -> ParamCurve:
    check_same_dim(p, q)
    return ParamCurve(np.vstack([p, q]))


def detour_curve(p: TruncatedVector, q: TruncatedVector, n: int) -> ParamCurve:
    """Out along ``n e_n``, across by ``q - p``, then back along ``-n e_n``."""
    dim = check_same_dim(p, q)
    if n < 1:
        raise ValueError(f"detour index must be positive, got {n}")
    if n > dim:
        raise DimensionError(f"detour direction e_{n} lies outside truncation dimension {dim}")
    shift = n * basis_vector(n, dim)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return ParamCurve(np.vstack([p, p + shift, q + shift, q]))


@functools.lru_cache(maxsize=None)
def _gauss_legendre(nodes: int, panels: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(nodes)
    h = 1.0 / panels
    left = np.arange(panels)[:, None] * h
    t = (left + 0.5 * h * (x + 1.0)).ravel()
    wt = np.tile(0.5 * h * w, panels)
    t.flags.writeable = False
    wt.flags.writeable = False
    return t, wt


@dataclass(frozen=True)
class QuadratureRule:
    nodes_per_panel: int = 16
    panels_per_piece: int = 8
    rtol: float = 1e-10
    max_panels: int = 2**10

    def __post_init__(self):
        if self.nodes_per_panel < 2:
            raise ValueError("nodes_per_panel must be at least 2")
        if not 1 <= self.panels_per_piece <= self.max_panels:
            raise ValueError("panels_per_piece must lie in [1, max_panels]")
        if not self.rtol > 0:
            raise ValueError("rtol must be positive")

    def nodes_weights(self, panels: int) -> tuple[np.ndarray, np.ndarray]:
        """Composite rule on ``[0, 1]`` with ``panels`` equal panels."""
        return _gauss_legendre(self.nodes_per_panel, panels)


DEFAULT_QUADRATURE = QuadratureRule()


def _integrate_pieces(starts, deltas, m: MetricSpec, panels: int, rule: QuadratureRule, speeds):
    s, wts = rule.nodes_weights(panels)
    mids = starts + 0.5 * deltas
    c0 = np.einsum("ij,ij->i", mids, mids)
    c1 = 2.0 * np.einsum("ij,ij->i", mids, deltas)
    c2 = np.einsum("ij,ij->i", deltas, deltas)
    u = s - 0.5
    sq = np.maximum(c0[:, None] + u * c1[:, None] + u * u * c2[:, None], 0.0)
    root_factor = np.exp(0.5 * m.conformal.log_factor(sq))
    return speeds * (root_factor @ wts)


def piece_lengths(c: ParamCurve, m: MetricSpec, quad: QuadratureRule = DEFAULT_QUADRATURE) -> np.ndarray:
    """Per-piece lengths of ``c`` under ``m``."""
    v = c.vertices
    starts, deltas = v[:-1], np.diff(v, axis=0)
    w = m.weights.prefix(c.dim)
    speeds = np.sqrt(np.einsum("ij,j,ij->i", deltas, w, deltas))

    panels = quad.panels_per_piece
    out = _integrate_pieces(starts, deltas, m, panels, quad, speeds)
    active = np.flatnonzero(speeds > 0)
    while active.size and panels < quad.max_panels:
        panels = min(2 * panels, quad.max_panels)
        new = _integrate_pieces(starts[active], deltas[active], m, panels, quad, speeds[active])
        old = out[active]
        out[active] = new
        done = np.abs(new - old) <= quad.rtol * np.abs(new)
        active = active[~done]
    return out


def curve_length(c: ParamCurve, m: MetricSpec, quad: QuadratureRule = DEFAULT_QUADRATURE) -> float:
    return math.fsum(piece_lengths(c, m, quad))


def alpha_bound(n: int) -> float:
    """Upper bound on the lengths of the outgoing and returning detour legs."""
    if n < 1:
        raise ValueError("n must be positive")
    return 1.0 / n


def beta_bound(p: TruncatedVector, q: TruncatedVector, n: int, w: WeightSequence = DEFAULT_WEIGHTS) -> float:
    """Upper bound on the length of the crossing leg of the ``n``-th detour."""
    check_same_dim(p, q)
    diff = np.asarray(q, dtype=float) - np.asarray(p, dtype=float)
    b = bilinear_B(w, diff, diff)
    if b == 0.0:
        return 0.0
    exponent = 0.5 * math.log(b) - 0.5 * n * n + n * (norm(p) + norm(diff))
    return math.exp(exponent)


def sample_polyline(c: ParamCurve, segments: int) -> np.ndarray:
    """Resample ``c`` into ``segments`` straight segments that keep every joint.

    Segments are shared out among pieces as evenly as possible, earlier
    pieces taking the remainder.
    """
    k = c.n_pieces
    if segments < k:
        raise ValueError(f"need at least {k} segments to keep the {k} pieces of the curve")
    counts = np.full(k, segments // k)
    counts[: segments % k] += 1
    rows = []
    for (a, b), cnt in zip(c.pieces, counts):
        s = np.arange(cnt)[:, None] / cnt
        rows.append(a + s * (b - a))
    rows.append(c.end[None, :])
    return np.vstack(rows)
