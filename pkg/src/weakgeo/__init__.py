"""Numerics for a conformal weak metric on truncated l2 whose geodesic
distance collapses: detour curves, length bounds, and path shortening."""

from .curves import (
    DEFAULT_QUADRATURE,
    ParamCurve,
    QuadratureRule,
    alpha_bound,
    beta_bound,
    curve_length,
    detour_curve,
    piece_lengths,
    segment_curve,
)
from .geodesic import (
    DiscretePath,
    DistanceEstimate,
    OptimizationError,
    OptimizerConfig,
    discrete_energy,
    energy_gradient,
    estimate_distance,
    shorten,
)
from .metric import EUCLIDEAN, WEAK, Conformal, MetricSpec, metric_eval, tangent_norm
from .sequence import (
    DEFAULT_WEIGHTS,
    UNIT_WEIGHTS,
    DimensionError,
    WeightSequence,
    apply_diagonal,
    basis_vector,
    bilinear_B,
    inner,
    norm,
    power_weights,
    vector,
    zeros,
)

__version__ = "0.1.0"
