"""Per-point feature extraction for ink samples.

Each preprocessed point yields 8 channels: normalized x/y, pen state, local
bounding-box aspect, writing direction (cos/sin) and curvature (cos/sin).
A single synthetic pen-up vector is inserted between consecutive strokes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .ink import InkSample, Point, Stroke, validate

__all__ = [
    "CHANNELS",
    "N_CHANNELS",
    "DegenerateInkError",
    "FeatureConfig",
    "FeatureVector",
    "FeatureSequence",
    "dedupe",
    "normalize",
    "resample",
    "pen_state",
    "aspect_ratio",
    "writing_direction",
    "curvature",
    "extract_features",
]

CHANNELS = ("x", "y", "pen", "aspect", "cos_dir", "sin_dir", "cos_curv", "sin_curv")
N_CHANNELS = len(CHANNELS)


class DegenerateInkError(ValueError):
    """All ink points coincide, so the sample has no usable geometry."""


@dataclass(frozen=True)
class FeatureConfig:
    """Feature extraction parameters, serialized inside model files.

    ``neighborhood_half_width`` is the number of points taken on each side for
    the aspect-ratio bounding box.  ``resample_points`` switches on equidistant
    resampling of the pen trajectory to that many points (off by default; the
    recognizer consumes raw point sequences).  ``duplicate_tolerance`` is the
    max coordinate difference treated as a duplicate point.
    """

    neighborhood_half_width: int = 2
    resample_points: int | None = None
    duplicate_tolerance: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "neighborhood_half_width": self.neighborhood_half_width,
            "resample_points": self.resample_points,
            "duplicate_tolerance": self.duplicate_tolerance,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "FeatureConfig":
        return cls(**data)


@dataclass(frozen=True)
class FeatureVector:
    x: float
    y: float
    pen: int
    aspect: float
    cos_dir: float
    sin_dir: float
    cos_curv: float
    sin_curv: float


@dataclass(frozen=True, eq=False)
class FeatureSequence:
    """The stacked per-point vectors for one sample.

    ``vectors`` is float64 of shape (n, 8) in :data:`CHANNELS` order;
    ``stroke_starts`` gives the row where each source stroke begins (the
    synthetic pen-up row sits just before each start except the first).
    """

    vectors: np.ndarray
    stroke_starts: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vectors)

    def row(self, i: int) -> FeatureVector:
        x, y, pen, aspect, cd, sd, cc, sc = self.vectors[i]
        return FeatureVector(x, y, int(pen), aspect, cd, sd, cc, sc)


def dedupe(sample: InkSample, tolerance: float = 0.0) -> InkSample:
    """Collapse consecutive points with identical (x, y) within each stroke."""
    strokes = []
    for stroke in sample.strokes:
        kept: list[Point] = []
        for p in stroke.points:
            if kept and abs(p.x - kept[-1].x) <= tolerance and abs(p.y - kept[-1].y) <= tolerance:
                continue
            kept.append(p)
        strokes.append(Stroke(tuple(kept)))
    return InkSample(tuple(strokes), sample.label)


def normalize(sample: InkSample) -> InkSample:
    """Isotropic min-max scaling into [0, 1]^2.

    The longer bounding-box side maps onto [0, 1]; the shorter side is centered,
    which preserves the aspect ratio of the ink.
    """
    xs = [p.x for s in sample.strokes for p in s.points]
    ys = [p.y for s in sample.strokes for p in s.points]
    min_x, max_x = min(xs), max(xs)
    min_y, max_y = min(ys), max(ys)
    width, height = max_x - min_x, max_y - min_y
    side = max(width, height)
    if side <= 0:
        raise DegenerateInkError("all points coincide; bounding box has no extent")
    off_x = (1.0 - width / side) / 2.0
    off_y = (1.0 - height / side) / 2.0
    strokes = tuple(
        Stroke(tuple(Point((p.x - min_x) / side + off_x, (p.y - min_y) / side + off_y, p.t)
                     for p in s.points))
        for s in sample.strokes
    )
    return InkSample(strokes, sample.label)


def resample(sample: InkSample, total_points: int) -> InkSample:
    """Arc-length-equidistant resampling of the whole trajectory.

    The point budget is split across strokes proportionally to arc length
    (at least one point per stroke), then each stroke is resampled uniformly
    along its own length.  Timestamps are dropped.
    """
    if total_points < len(sample.strokes):
        total_points = len(sample.strokes)
    lengths = []
    for stroke in sample.strokes:
        xy = np.array([(p.x, p.y) for p in stroke.points], dtype=np.float64)
        seg = np.hypot(*np.diff(xy, axis=0).T) if len(xy) > 1 else np.zeros(0)
        lengths.append((xy, seg, float(seg.sum())))
    total_len = sum(l for _, _, l in lengths)

    # largest-remainder split of the budget, minimum one point per stroke
    shares = [l / total_len * total_points if total_len > 0 else total_points / len(lengths)
              for _, _, l in lengths]
    counts = [max(1, int(s)) for s in shares]
    order = np.argsort([c - s for c, s in zip(counts, shares)])
    i = 0
    while sum(counts) < total_points:
        counts[order[i % len(counts)]] += 1
        i += 1
    while sum(counts) > total_points:
        j = int(np.argmax(counts))
        if counts[j] <= 1:
            break
        counts[j] -= 1

    strokes = []
    for (xy, seg, length), count in zip(lengths, counts):
        if len(xy) == 1 or length == 0 or count == 1:
            pts = np.repeat(xy[:1], count, axis=0)
        else:
            along = np.concatenate([[0.0], np.cumsum(seg)])
            targets = np.linspace(0.0, length, count)
            pts = np.column_stack([np.interp(targets, along, xy[:, 0]),
                                   np.interp(targets, along, xy[:, 1])])
        strokes.append(Stroke(tuple(Point(float(x), float(y)) for x, y in pts)))
    return InkSample(tuple(strokes), sample.label)


def _stroke_xy(stroke: Stroke) -> np.ndarray:
    return np.array([(p.x, p.y) for p in stroke.points], dtype=np.float64)


def _direction_angles(xy: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """cos/sin of the writing direction per point; the first point replicates
    the second's angle.  Single-point strokes get (1, 0)."""
    n = len(xy)
    if n == 1:
        return np.ones(1), np.zeros(1)
    d = np.diff(xy, axis=0)
    dist = np.hypot(d[:, 0], d[:, 1])
    if np.any(dist == 0):
        raise ValueError("zero-length step; dedupe the sample first")
    cos = np.concatenate([[d[0, 0] / dist[0]], d[:, 0] / dist])
    sin = np.concatenate([[d[0, 1] / dist[0]], d[:, 1] / dist])
    return cos, sin


def _curvature_pairs(cos: np.ndarray, sin: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """cos/sin of the angle turned between the previous and next direction.
    At the stroke ends the missing neighbor is replaced by the point's own
    direction, which leaves (1, 0) when there is no turn to measure."""
    n = len(cos)
    left_c = np.concatenate([cos[:1], cos[:-1]])
    left_s = np.concatenate([sin[:1], sin[:-1]])
    right_c = np.concatenate([cos[1:], cos[-1:]])
    right_s = np.concatenate([sin[1:], sin[-1:]])
    cos_curv = left_c * right_c + left_s * right_s
    sin_curv = left_c * right_s - left_s * right_c
    return cos_curv, sin_curv


def _aspect_values(xy: np.ndarray, half_width: int) -> np.ndarray:
    """Aspect of the bounding box over the +/- half_width point neighborhood,
    truncated at the stroke ends: 2*dy/(dx+dy) - 1, or 0 for an empty box."""
    n = len(xy)
    out = np.zeros(n)
    for i in range(n):
        lo, hi = max(0, i - half_width), min(n, i + half_width + 1)
        window = xy[lo:hi]
        dx = window[:, 0].max() - window[:, 0].min()
        dy = window[:, 1].max() - window[:, 1].min()
        extent = dx + dy
        if extent > 0:
            out[i] = 2.0 * dy / extent - 1.0
    return out


def _flat_index(sample: InkSample, n: int) -> tuple[int, int]:
    """Map a flat recorded-point index to (stroke index, point index)."""
    offset = 0
    for si, stroke in enumerate(sample.strokes):
        if n < offset + len(stroke):
            return si, n - offset
        offset += len(stroke)
    raise IndexError(f"point index {n} out of range for {offset} points")


def pen_state(sample: InkSample, n: int) -> int:
    """Pen channel at emitted-sequence position ``n``: 1 for recorded points,
    0 for the synthetic transition point between consecutive strokes."""
    position = 0
    for si, stroke in enumerate(sample.strokes):
        if si > 0:
            if n == position:
                return 0
            position += 1
        if n < position + len(stroke):
            return 1
        position += len(stroke)
    raise IndexError(f"position {n} out of range for {position} emitted vectors")


def aspect_ratio(sample: InkSample, n: int, half_width: int = 2) -> float:
    si, pi = _flat_index(sample, n)
    return float(_aspect_values(_stroke_xy(sample.strokes[si]), half_width)[pi])


def writing_direction(sample: InkSample, n: int) -> tuple[float, float]:
    si, pi = _flat_index(sample, n)
    cos, sin = _direction_angles(_stroke_xy(sample.strokes[si]))
    return float(cos[pi]), float(sin[pi])


def curvature(sample: InkSample, n: int) -> tuple[float, float]:
    si, pi = _flat_index(sample, n)
    cos_curv, sin_curv = _curvature_pairs(*_direction_angles(_stroke_xy(sample.strokes[si])))
    return float(cos_curv[pi]), float(sin_curv[pi])


def extract_features(sample: InkSample, config: FeatureConfig = FeatureConfig()) -> FeatureSequence:
    """Dedupe, normalize, then stack the 8 channels for every point in order,
    inserting one pen-up vector at each stroke boundary.  Deterministic."""
    problems = validate(sample)
    if problems:
        raise ValueError(f"invalid ink sample: {problems[0]}")
    prepared = dedupe(sample, config.duplicate_tolerance)
    if config.resample_points is not None:
        prepared = resample(prepared, config.resample_points)
    prepared = normalize(prepared)

    blocks: list[np.ndarray] = []
    stroke_starts: list[int] = []
    position = 0
    for si, stroke in enumerate(prepared.strokes):
        xy = _stroke_xy(stroke)
        if si > 0:
            marker = np.array([[xy[0, 0], xy[0, 1], 0.0, 0.0, 1.0, 0.0, 1.0, 0.0]])
            blocks.append(marker)
            position += 1
        cos_dir, sin_dir = _direction_angles(xy)
        cos_curv, sin_curv = _curvature_pairs(cos_dir, sin_dir)
        aspect = _aspect_values(xy, config.neighborhood_half_width)
        pen = np.ones(len(xy))
        blocks.append(np.column_stack([xy[:, 0], xy[:, 1], pen, aspect,
                                       cos_dir, sin_dir, cos_curv, sin_curv]))
        stroke_starts.append(position)
        position += len(xy)
    return FeatureSequence(np.concatenate(blocks), tuple(stroke_starts))
