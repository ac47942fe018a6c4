"""Shared fixtures: sample builders and the synthetic stroke benchmark.

The benchmark draws ten parametric single-stroke shapes (lines, arcs, loops,
hooks at distinct orientations), samples each with a random monotone time warp
of the parameter, and adds coordinate jitter of 2% of the shape's bounding
box.  The warp leaves geometry intact but shifts where the sample points fall
along the curve, which is exactly the misalignment DTW absorbs and a
fixed-length no-warping Euclidean comparison does not.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from grantha_ink.dtw import DtwConfig, RecognitionModel, train
from grantha_ink.ink import InkSample, Point, Stroke


def make_sample(*strokes, label=None) -> InkSample:
    """Build a sample from lists of (x, y) or (x, y, t) tuples."""
    built = []
    for stroke in strokes:
        built.append(Stroke(tuple(Point(*p) for p in stroke)))
    return InkSample(tuple(built), label)


def random_int_sample(rng: np.random.Generator, strokes_max: int = 3,
                      span: int = 400) -> InkSample:
    """Random multi-stroke sample on an integer grid (device units)."""
    strokes = []
    for _ in range(rng.integers(1, strokes_max + 1)):
        n = int(rng.integers(2, 12))
        pts = rng.integers(-span, span, size=(n, 2))
        strokes.append([(float(x), float(y)) for x, y in pts])
    return make_sample(*strokes)


def _hook(u: float, first: tuple[float, float], second: tuple[float, float],
          corner: tuple[float, float], split: float = 0.55) -> tuple[float, float]:
    if u < split:
        s = u / split
        return (first[0] + (corner[0] - first[0]) * s,
                first[1] + (corner[1] - first[1]) * s)
    s = (u - split) / (1.0 - split)
    return (corner[0] + (second[0] - corner[0]) * s,
            corner[1] + (second[1] - corner[1]) * s)


BENCHMARK_SHAPES = {
    "line_e": lambda u: (u, 0.0),
    "line_n": lambda u: (0.0, u),
    "line_ne": lambda u: (u, u),
    "line_nw": lambda u: (-u, u),
    "arc_top": lambda u: (-math.cos(math.pi * u), math.sin(math.pi * u)),
    "arc_bottom": lambda u: (-math.cos(math.pi * u), -math.sin(math.pi * u)),
    "loop_ccw": lambda u: (math.cos(2 * math.pi * u - math.pi / 2),
                           math.sin(2 * math.pi * u - math.pi / 2)),
    "loop_cw": lambda u: (math.cos(-2 * math.pi * u - math.pi / 2),
                          math.sin(-2 * math.pi * u - math.pi / 2)),
    "hook_dr": lambda u: _hook(u, (0.0, 1.0), (1.0, 0.0), (0.0, 0.0)),
    "hook_rd": lambda u: _hook(u, (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)),
}


def draw_shape(
    rng: np.random.Generator,
    shape: str,
    *,
    time_warp: bool = True,
    jitter: float = 0.02,
    scale: float = 200.0,
) -> InkSample:
    """One noisy rendition of a benchmark shape as a single-stroke sample.

    The jitter is a smooth random deformation (hand wobble is low-frequency)
    with rms amplitude ``jitter`` times the bounding-box side; white noise of
    that size would swamp the per-step direction channels at this sampling
    density, which no pen produces.
    """
    fn = BENCHMARK_SHAPES[shape]
    n = int(rng.integers(35, 61))
    u = np.linspace(0.0, 1.0, n)
    if time_warp:
        gamma = math.exp(rng.uniform(math.log(0.4), math.log(2.5)))
        blend = rng.uniform(0.0, 0.6)
        u = (1.0 - blend) * u**gamma + blend * (1.0 - np.cos(math.pi * u)) / 2.0
    xy = np.array([fn(v) for v in u]) * scale
    extent = max(np.ptp(xy[:, 0]), np.ptp(xy[:, 1]))
    sigma = jitter * extent
    base = np.linspace(0.0, 1.0, n)
    for col in range(2):
        f1, f2 = rng.uniform(0.5, 2.5, 2)
        p1, p2 = rng.uniform(0.0, 2.0 * math.pi, 2)
        wobble = (0.7 * np.sin(2.0 * math.pi * f1 * base + p1)
                  + 0.3 * np.sin(2.0 * math.pi * f2 * base + p2))
        xy[:, col] += sigma * math.sqrt(2.0) * wobble
    points = tuple(Point(float(x), float(y), float(10 * i)) for i, (x, y) in enumerate(xy))
    return InkSample((Stroke(points),), label=shape)


def benchmark_split(
    seed: int,
    per_class_train: int = 20,
    per_class_test: int = 20,
    time_warp: bool = True,
) -> tuple[list[InkSample], list[InkSample]]:
    rng = np.random.default_rng(seed)
    train_set, test_set = [], []
    for shape in BENCHMARK_SHAPES:
        train_set.extend(draw_shape(rng, shape, time_warp=time_warp)
                         for _ in range(per_class_train))
        test_set.extend(draw_shape(rng, shape, time_warp=time_warp)
                        for _ in range(per_class_test))
    return train_set, test_set


@pytest.fixture(scope="session")
def benchmark_data() -> tuple[list[InkSample], list[InkSample]]:
    return benchmark_split(seed=2024)

@pytest.fixture(scope="session")
def benchmark_model(benchmark_data) -> RecognitionModel:
    # 0.2 band: the benchmark warps are strong enough to push correspondences
    # past a 10% index offset
    train_set, _ = benchmark_data
    return train(train_set, prototypes_per_class=4, dtw_config=DtwConfig(0.2))


@pytest.fixture(scope="session")
def small_model() -> RecognitionModel:
    """A quick 3-class model for CLI/service tests."""
    rng = np.random.default_rng(7)
    shapes = ("line_e", "arc_top", "loop_ccw")
    samples = [draw_shape(rng, s) for s in shapes for _ in range(6)]
    return train(samples, prototypes_per_class=2, dtw_config=DtwConfig(0.2))
