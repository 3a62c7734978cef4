"""Exit criteria for the package, one test per criterion."""

import time

import numpy as np
import pytest

import oracles
from weakgeo.cli import main
from weakgeo.curves import (
    ParamCurve,
    alpha_bound,
    beta_bound,
    curve_length,
    detour_curve,
    piece_lengths,
    segment_curve,
)
from weakgeo.geodesic import DiscretePath, OptimizerConfig, discrete_energy, energy_gradient, estimate_distance, shorten
from weakgeo.metric import EUCLIDEAN, WEAK
from weakgeo.sequence import DEFAULT_WEIGHTS, basis_vector, bilinear_B, norm, vector, zeros

DIM = 60
P, Q = zeros(DIM), basis_vector(1, DIM)
SLACK = 1e-9


@pytest.mark.acceptance("C1 bound certification, n = 1..50")
def test_c1_bound_certification():
    start = time.perf_counter()
    for n in range(1, 51):
        la, lb, lg = piece_lengths(detour_curve(P, Q, n), WEAK)
        assert la <= alpha_bound(n) * (1 + SLACK), n
        assert lg <= alpha_bound(n) * (1 + SLACK), n
        assert lb <= beta_bound(P, Q, n) * (1 + SLACK), n
    assert time.perf_counter() - start < 5


@pytest.mark.acceptance("C2 vanishing trend of the detour sweep")
def test_c2_vanishing_trend():
    start = time.perf_counter()
    est = estimate_distance(P, Q, WEAK, "detour_sweep", n_max=50)
    assert norm(Q - P) == 1
    assert est.value < 0.05
    lengths = [curve_length(detour_curve(P, Q, n), WEAK) for n in range(1, 51)]
    running = np.minimum.accumulate(lengths)
    assert np.all(np.diff(running[2:]) < 0)
    assert time.perf_counter() - start < 5


@pytest.mark.acceptance("C3 strong-metric control keeps the chord bound")
def test_c3_strong_metric_control():
    start = time.perf_counter()
    est = estimate_distance(P, Q, EUCLIDEAN, "optimized")
    assert 1 - 1e-9 <= est.value <= 1 + 1e-6

    rng = np.random.default_rng(3)
    lengths = [curve_length(detour_curve(P, Q, n), EUCLIDEAN) for n in range(1, DIM + 1)]
    lengths.append(curve_length(segment_curve(P, Q), EUCLIDEAN))
    for _ in range(200):
        k = int(rng.integers(1, 10))
        inner = rng.standard_normal((k, DIM)) * rng.uniform(0.01, 3)
        lengths.append(curve_length(ParamCurve(np.vstack([P, inner, Q])), EUCLIDEAN))
    for seed in range(5):
        init = DiscretePath.straight(P, Q, 8).perturbed(0.3, seed)
        _, length = shorten(init, EUCLIDEAN, OptimizerConfig(max_iters=2000))
        lengths.append(length)
    assert min(lengths) >= 1 - 1e-9
    assert time.perf_counter() - start < 30


@pytest.mark.acceptance("C4 first-leg length matches the Simpson oracle")
def test_c4_oracle_value():
    leg = detour_curve(zeros(DIM), Q, 1).piece(0)
    assert curve_length(leg, WEAK) == pytest.approx(0.8556243918, abs=1e-8)
    assert oracles.first_leg_length_oracle() == pytest.approx(0.8556243918, abs=1e-8)


@pytest.mark.acceptance("C5 analytic gradient vs central differences")
def test_c5_gradient_suite():
    rng = np.random.default_rng(5)
    checked = 0
    worst = 0.0
    for metric in (WEAK, EUCLIDEAN):
        for dim in (4, 16):
            for m in (2, 8):
                for _ in range(25):
                    path = DiscretePath(0.6 * rng.standard_normal((m + 1, dim)))
                    fd = oracles.central_difference(
                        lambda x: discrete_energy(path.with_interior(x), metric), path.points[1:-1], h=1e-5
                    )
                    analytic = np.array(energy_gradient(path, metric))
                    worst = max(worst, np.max(np.abs(analytic - fd)) / np.max(np.abs(fd)))
                    checked += 1
    assert checked >= 200
    assert worst < 1e-5


@pytest.mark.acceptance("C6 discrete Cauchy-Schwarz, length^2 <= energy")
def test_c6_discrete_cauchy_schwarz():
    rng = np.random.default_rng(6)
    for metric in (WEAK, EUCLIDEAN):
        for _ in range(120):
            dim, m = int(rng.integers(2, 17)), int(rng.integers(1, 9))
            path = DiscretePath(oracles.unit_ball_points(rng, m + 1, dim))
            length = curve_length(path.to_curve(), metric)
            assert length**2 <= discrete_energy(path, metric) + 1e-9


@pytest.mark.acceptance("C7 truncation, additivity and split exactness")
def test_c7_exactness():
    rng = np.random.default_rng(7)
    for _ in range(100):
        d0 = int(rng.integers(1, 10))
        x, y = rng.standard_normal((2, d0))
        base = bilinear_B(DEFAULT_WEIGHTS, x, y)
        for dim in (d0, d0 + 1, 64, 1000):
            assert bilinear_B(DEFAULT_WEIGHTS, vector(x, dim), vector(y, dim)) == base

    for _ in range(30):
        p, q = rng.standard_normal((2, 12))
        c = detour_curve(p, q, int(rng.integers(1, 13)))
        for metric in (WEAK, EUCLIDEAN):
            parts = sum(curve_length(c.piece(i), metric) for i in range(3))
            assert abs(curve_length(c, metric) - parts) <= 1e-10
            split = c.split_piece(int(rng.integers(0, 3)), float(rng.uniform(0.05, 0.95)))
            assert abs(curve_length(split, metric) - curve_length(c, metric)) < 1e-10


@pytest.mark.acceptance("C8 byte-identical CSV across repeated CLI runs")
def test_c8_determinism(tmp_path):
    runs = {
        "verify-bounds": [],
        "sweep-detours": [],
        "optimize": ["--init", "perturbed", "--seed", "9", "--max-iters", "400"],
        "compare": ["--max-iters", "400"],
    }
    for command, extra in runs.items():
        bodies = []
        for i in range(2):
            out = tmp_path / f"{command}-{i}.csv"
            assert main([command, "--dim", "60", "--n-max", "50", "--out", str(out), *extra]) == 0
            bodies.append(out.read_bytes())
        assert bodies[0] == bodies[1], command
