"""DTW distance under boundary/continuity/monotonicity/window constraints,
prototype selection by hierarchical clustering, and k-NN recognition.

The distance between sequences Q and C is the minimum over admissible warping
paths of sqrt(sum of squared-Euclidean step costs) / K, where K is the path
length.  Because K varies per path, the dynamic program is resolved by path
length: table[k][i][j] holds the best cost sum over paths of exactly k cells
ending at (i, j), built from the three adjacent predecessor cells.
"""

from __future__ import annotations

import json
import math
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.spatial.distance import cdist, squareform

from .features import (
    N_CHANNELS,
    DegenerateInkError,
    FeatureConfig,
    FeatureSequence,
    extract_features,
)
from .ink import InkSample, SymbolClass

__all__ = [
    "MODEL_VERSION",
    "DtwConfig",
    "DtwConfigError",
    "WarpingPath",
    "Candidate",
    "RecognitionModel",
    "TrainingError",
    "RecognitionError",
    "ModelFormatError",
    "dtw_distance",
    "warping_path",
    "train",
    "recognize",
]

MODEL_VERSION = 1
CONFIDENCE_EPSILON = 1e-9

DistanceFn = Callable[[np.ndarray, np.ndarray], float]


class DtwConfigError(ValueError):
    """Invalid DTW configuration (window cannot connect the corners)."""


class TrainingError(ValueError):
    """Training input cannot produce a model."""


class RecognitionError(ValueError):
    """A query sample cannot be recognized."""


class ModelFormatError(ValueError):
    """A model file does not match the expected schema or version."""


@dataclass(frozen=True)
class DtwConfig:
    """Sakoe-Chiba band width as a fraction of max(n, m); the band is widened
    to |n - m| when that is needed to connect (0, 0) with (n-1, m-1)."""

    window_fraction: float = 0.1

    def __post_init__(self):
        if not 0.0 < self.window_fraction <= 1.0:
            raise DtwConfigError(
                f"window_fraction must be in (0, 1], got {self.window_fraction}")

    def band_width(self, n: int, m: int) -> int:
        return max(math.ceil(self.window_fraction * max(n, m)), abs(n - m))

    def to_dict(self) -> dict[str, Any]:
        return {"window_fraction": self.window_fraction}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "DtwConfig":
        return cls(**data)


@dataclass(frozen=True)
class WarpingPath:
    """The matched index pairs of an optimal alignment, 0-indexed, from (0, 0)
    to (n-1, m-1), stepping by one in i, j, or both."""

    pairs: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class Candidate:
    class_id: str
    distance: float
    confidence: float


def _as_matrix(sequence: FeatureSequence | np.ndarray, name: str) -> np.ndarray:
    vectors = sequence.vectors if isinstance(sequence, FeatureSequence) else np.asarray(
        sequence, dtype=np.float64)
    if vectors.ndim == 1:
        vectors = vectors[:, None]
    if vectors.ndim != 2 or len(vectors) == 0:
        raise ValueError(f"{name} must be a non-empty 2-D sequence of vectors")
    return vectors


def _banded_cost(q: np.ndarray, c: np.ndarray, config: DtwConfig) -> np.ndarray:
    n, m = len(q), len(c)
    width = config.band_width(n, m)
    cost = cdist(q, c, "sqeuclidean")
    offsets = np.arange(n)[:, None] - np.arange(m)[None, :]
    return np.where(np.abs(offsets) <= width, cost, np.inf)


def _length_resolved_dp(cost: np.ndarray, keep_choices: bool):
    """Run the per-path-length recurrence.  Returns the corner cost sum per
    path length k (index k, 0 unused) and, optionally, the predecessor choice
    per (k, i, j): 0 = diagonal, 1 = i-advance, 2 = j-advance."""
    n, m = cost.shape
    k_max = n + m - 1
    current = np.full((n, m), np.inf)
    current[0, 0] = cost[0, 0]
    corner = np.full(k_max + 1, np.inf)
    corner[1] = current[-1, -1]
    choices = np.zeros((k_max + 1, n, m), dtype=np.uint8) if keep_choices else None
    shifted = np.empty((3, n, m))
    for k in range(2, k_max + 1):
        shifted.fill(np.inf)
        shifted[0, 1:, 1:] = current[:-1, :-1]
        shifted[1, 1:, :] = current[:-1, :]
        shifted[2, :, 1:] = current[:, :-1]
        if keep_choices:
            choices[k] = shifted.argmin(axis=0)
        current = cost + shifted.min(axis=0)
        corner[k] = current[-1, -1]
    return corner, choices


def dtw_distance(
    q: FeatureSequence | np.ndarray,
    c: FeatureSequence | np.ndarray,
    config: DtwConfig = DtwConfig(),
) -> float:
    """Minimum over admissible warping paths of sqrt(cost sum) / path length."""
    qm = _as_matrix(q, "q")
    cm = _as_matrix(c, "c")
    if qm.shape[1] != cm.shape[1]:
        raise ValueError(f"channel mismatch: {qm.shape[1]} vs {cm.shape[1]}")
    corner, _ = _length_resolved_dp(_banded_cost(qm, cm, config), keep_choices=False)
    lengths = np.arange(len(corner), dtype=np.float64)
    lengths[0] = 1.0
    return float(np.min(np.sqrt(corner) / lengths))


def warping_path(
    q: FeatureSequence | np.ndarray,
    c: FeatureSequence | np.ndarray,
    config: DtwConfig = DtwConfig(),
) -> WarpingPath:
    """A warping path achieving :func:`dtw_distance`, backtracked from the
    table; ties prefer the diagonal step, then the i-advance."""
    qm = _as_matrix(q, "q")
    cm = _as_matrix(c, "c")
    if qm.shape[1] != cm.shape[1]:
        raise ValueError(f"channel mismatch: {qm.shape[1]} vs {cm.shape[1]}")
    corner, choices = _length_resolved_dp(_banded_cost(qm, cm, config), keep_choices=True)
    lengths = np.arange(len(corner), dtype=np.float64)
    lengths[0] = 1.0
    k = int(np.argmin(np.sqrt(corner) / lengths))
    i, j = len(qm) - 1, len(cm) - 1
    pairs = [(i, j)]
    while k > 1:
        step = choices[k, i, j]
        if step == 0:
            i, j = i - 1, j - 1
        elif step == 1:
            i -= 1
        else:
            j -= 1
        pairs.append((i, j))
        k -= 1
    return WarpingPath(tuple(reversed(pairs)))


def _euclidean_resampled(length: int) -> DistanceFn:
    """Fixed-length baseline metric: linear row interpolation of both feature
    matrices to ``length`` rows, then sqrt(sum of squared differences)/length.
    No warping; this is deliberately alignment-sensitive."""

    def resample_rows(v: np.ndarray) -> np.ndarray:
        if len(v) == 1:
            return np.repeat(v, length, axis=0)
        positions = np.linspace(0.0, len(v) - 1.0, length)
        base = np.arange(len(v), dtype=np.float64)
        return np.column_stack([np.interp(positions, base, v[:, ch])
                                for ch in range(v.shape[1])])

    def distance(q: np.ndarray, c: np.ndarray) -> float:
        dq, dc = resample_rows(q), resample_rows(c)
        return float(np.sqrt(np.sum((dq - dc) ** 2)) / length)

    return distance


@dataclass(frozen=True)
class RecognitionModel:
    """Immutable trained model: classes in rank order and their prototype
    feature sequences, plus the configurations that produced them."""

    classes: tuple[SymbolClass, ...]
    prototypes: tuple[tuple[FeatureSequence, ...], ...]
    feature_config: FeatureConfig
    dtw_config: DtwConfig
    version: int = MODEL_VERSION

    def __post_init__(self):
        if len(self.classes) != len(self.prototypes):
            raise ValueError("classes and prototypes are misaligned")
        seen: set[str] = set()
        for cls, protos in zip(self.classes, self.prototypes):
            if cls.id in seen:
                raise ValueError(f"duplicate class id {cls.id!r}")
            seen.add(cls.id)
            if not protos:
                raise ValueError(f"class {cls.id!r} has no prototypes")
            for p in protos:
                if p.vectors.shape[1] != N_CHANNELS:
                    raise ValueError(f"prototype for {cls.id!r} is not {N_CHANNELS}-channel")

    def class_by_id(self, class_id: str) -> SymbolClass:
        for cls in self.classes:
            if cls.id == class_id:
                return cls
        raise KeyError(class_id)

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "version": self.version,
            "feature_config": self.feature_config.to_dict(),
            "dtw_config": self.dtw_config.to_dict(),
            "classes": [
                {
                    "id": cls.id,
                    "codepoints": cls.codepoints,
                    "prototypes": [p.vectors.tolist() for p in protos],
                }
                for cls, protos in zip(self.classes, self.prototypes)
            ],
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_json_dict(), ensure_ascii=False), encoding="utf-8")

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "RecognitionModel":
        if not isinstance(data, dict) or data.get("version") != MODEL_VERSION:
            raise ModelFormatError(
                f"unsupported model version {data.get('version')!r}; expected {MODEL_VERSION}")
        try:
            feature_config = FeatureConfig.from_dict(data["feature_config"])
            dtw_config = DtwConfig.from_dict(data["dtw_config"])
            classes = []
            prototypes = []
            for entry in data["classes"]:
                classes.append(SymbolClass(entry["id"], entry["codepoints"]))
                protos = []
                for rows in entry["prototypes"]:
                    vectors = np.asarray(rows, dtype=np.float64)
                    protos.append(FeatureSequence(vectors, _starts_from_pen(vectors)))
                prototypes.append(tuple(protos))
        except (KeyError, TypeError, ValueError) as exc:
            raise ModelFormatError(f"malformed model file: {exc}") from exc
        return cls(tuple(classes), tuple(prototypes), feature_config, dtw_config)

    @classmethod
    def load(cls, path: str | Path) -> "RecognitionModel":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"model file is not valid JSON: {exc}") from exc
        return cls.from_json_dict(data)


def _starts_from_pen(vectors: np.ndarray) -> tuple[int, ...]:
    if vectors.ndim != 2 or vectors.shape[1] != N_CHANNELS:
        raise ValueError(f"prototype rows must have {N_CHANNELS} channels")
    pen = vectors[:, 2]
    starts = [0]
    starts.extend(int(i) + 1 for i in np.flatnonzero(pen == 0.0))
    return tuple(starts)


def _medoid(square: np.ndarray, members: np.ndarray) -> int:
    within = square[np.ix_(members, members)].sum(axis=1)
    return int(members[int(np.argmin(within))])


def _select_prototypes(
    features: list[FeatureSequence],
    count: int,
    dtw_config: DtwConfig,
) -> list[FeatureSequence]:
    """Agglomerative clustering (average linkage) under DTW distance, cut to
    ``count`` clusters; each cluster is represented by its medoid."""
    if count >= len(features) or len(features) == 1:
        return list(features)
    pair_count = len(features)
    square = np.zeros((pair_count, pair_count))
    for a in range(pair_count):
        for b in range(a + 1, pair_count):
            d = dtw_distance(features[a], features[b], dtw_config)
            square[a, b] = square[b, a] = d
    assignments = fcluster(linkage(squareform(square), method="average"),
                           t=count, criterion="maxclust")
    chosen = []
    for cluster_id in sorted(set(assignments)):
        members = np.flatnonzero(assignments == cluster_id)
        chosen.append(_medoid(square, members))
    return [features[i] for i in sorted(chosen)]


def train(
    samples: Iterable[InkSample],
    prototypes_per_class: int = 4,
    dtw_config: DtwConfig = DtwConfig(),
    feature_config: FeatureConfig = FeatureConfig(),
    classes: Sequence[SymbolClass] | None = None,
) -> RecognitionModel:
    """Build a model from labeled samples.

    Classes default to one per distinct label (sorted), each emitting its label
    text.  When ``classes`` is given, every declared class must have samples.
    """
    if prototypes_per_class < 1:
        raise TrainingError("prototypes_per_class must be positive")
    grouped: dict[str, list[InkSample]] = {}
    for sample in samples:
        if sample.label is None:
            raise TrainingError("training sample without a label")
        grouped.setdefault(sample.label, []).append(sample)
    if classes is None:
        classes = [SymbolClass(label, label) for label in sorted(grouped)]
    else:
        declared = {cls.id for cls in classes}
        stray = sorted(set(grouped) - declared)
        if stray:
            raise TrainingError(f"samples labeled outside declared classes: {stray}")
    if not classes:
        raise TrainingError("no labeled samples to train on")

    prototypes = []
    for cls in classes:
        class_samples = grouped.get(cls.id, [])
        if not class_samples:
            raise TrainingError(f"class {cls.id!r} has no training samples")
        features = [extract_features(s, feature_config) for s in class_samples]
        chosen = _select_prototypes(features, prototypes_per_class, dtw_config)
        prototypes.append(tuple(chosen))
    return RecognitionModel(tuple(classes), tuple(prototypes), feature_config, dtw_config)


def recognize(
    model: RecognitionModel,
    sample: InkSample,
    n_best: int = 5,
    k: int = 3,
    *,
    distance_fn: DistanceFn | None = None,
) -> list[Candidate]:
    """Rank classes for a query sample.

    Every prototype is scored; the k nearest prototypes vote.  Classes are
    ranked by (vote count desc, mean voted-hit distance asc); classes with no
    votes follow, ordered by their nearest-prototype distance.  A candidate's
    distance is its class's nearest-prototype distance, and confidences are
    inverse-distance weights normalized over the returned list.
    """
    if n_best < 1 or k < 1:
        raise RecognitionError("n_best and k must be positive")
    try:
        query = extract_features(sample, model.feature_config)
    except (DegenerateInkError, ValueError) as exc:
        raise RecognitionError(f"cannot extract features: {exc}") from exc

    hits = []  # (distance, class index, prototype index)
    for ci, protos in enumerate(model.prototypes):
        for pi, proto in enumerate(protos):
            if distance_fn is None:
                d = dtw_distance(query, proto, model.dtw_config)
            else:
                d = distance_fn(query.vectors, proto.vectors)
            hits.append((d, ci, pi))

    nearest = {ci: min(d for d, c, _ in hits if c == ci) for ci in range(len(model.classes))}
    hits.sort()
    votes: dict[int, list[float]] = {}
    for d, ci, _ in hits[:k]:
        votes.setdefault(ci, []).append(d)

    def rank_key(ci: int):
        voted = votes.get(ci)
        tiebreak = sum(voted) / len(voted) if voted else nearest[ci]
        return (-(len(voted) if voted else 0), tiebreak, nearest[ci], ci)

    ranked = sorted(range(len(model.classes)), key=rank_key)[:min(n_best, len(model.classes))]
    weights = [1.0 / (nearest[ci] + CONFIDENCE_EPSILON) for ci in ranked]
    total = sum(weights)
    return [
        Candidate(model.classes[ci].id, nearest[ci], w / total)
        for ci, w in zip(ranked, weights)
    ]
