"""Fast approximation of the between-group set distance.

One trial projects every point onto a random direction drawn from the
L1 unit sphere, sorts the projected values, and for each anchor point
inspects only a bounded window of opposite-group neighbors on each side
of it in the sorted order. A projection with L1 norm 1 never expands
Euclidean distances, so an anchor's true nearest opposite point tends to
land near it in the sorted order; and since the window is a subset of
the opposite group, the per-anchor minimum can only overestimate the
true nearest-opposite distance. Every trial therefore yields an upper
bound on the exact set distance, and repeating with fresh directions and
keeping the smallest trial result tightens it.

Sorting dominates the cost, giving O(m1 * n * (log n + m2)) overall
against O(n0 * n1) for the exact computation.

Determinism: trial j draws its direction from a child seed derived from
(seed, j), so results never depend on scheduling and the sequence of
trial outcomes for a given master seed is a fixed stream (running more
trials can only lower the reported minimum).
"""

from __future__ import annotations

import hashlib
import math
import time
from dataclasses import dataclass

import numpy as np

from .dataset import GroupPartition, LabeledDataset, LabelSource
from .errors import DimensionError, EmptyGroup, InvalidArgument
from .exact import DistanceResult, augmented_points

DEFAULT_M1 = 25
DEFAULT_SEED = 42


@dataclass(frozen=True)
class ProjectionVector:
    """A direction on the L1 unit sphere in the (label, features) space.

    weights[0] multiplies the label slot, weights[1:] the features.
    Every coordinate lies in [-1, 1] and the absolute values sum to 1,
    which makes the induced projection 1-Lipschitz for the point metric.
    """

    weights: np.ndarray

    def __post_init__(self):
        weights = np.array(self.weights, dtype=np.float64, copy=True)
        weights.flags.writeable = False
        object.__setattr__(self, "weights", weights)
        if weights.ndim != 1 or len(weights) < 1:
            raise InvalidArgument("projection weights must form a nonempty vector")
        if abs(float(np.abs(weights).sum()) - 1.0) > 1e-12:
            raise InvalidArgument("projection weights must have L1 norm 1")
        if float(np.abs(weights).max()) > 1.0:
            raise InvalidArgument("projection weights must lie in [-1, 1]")

    @property
    def dim(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class ApproxParams:
    """Trial count m1, per-direction neighbor window m2, and master seed.

    m2=None means "derive from the dataset size" via default_m2.
    """

    m1: int = DEFAULT_M1
    m2: int | None = None
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.m1 < 1:
            raise InvalidArgument("m1 must be a positive integer")
        if self.m2 is not None and self.m2 < 1:
            raise InvalidArgument("m2 must be a positive integer")
        if self.seed < 0:
            raise InvalidArgument("seed must be a nonnegative integer")


def default_m2(n: int) -> int:
    """Default neighbor window for a dataset of n rows: ceil(2*log10(n)),
    at least 1."""
    if n < 1:
        raise InvalidArgument("n must be positive")
    return max(1, math.ceil(2.0 * math.log10(n)))


def derived_seed(master: int, tag: str) -> int:
    """A stable 64-bit child seed for a named subcomputation."""
    digest = hashlib.sha256(f"{master}:{tag}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial,))))


def sample_l1_unit_vector(dim: int, rng: np.random.Generator) -> ProjectionVector:
    """Draw a direction uniformly from the L1 unit sphere.

    Coordinates are sampled iid from the standard Laplace distribution and
    normalized by their L1 norm, the L1 analogue of normalizing a Gaussian
    draw to get a uniform point on the Euclidean sphere.
    """
    if dim < 1:
        raise InvalidArgument("dim must be a positive integer")
    while True:
        raw = rng.laplace(size=dim)
        norm = np.abs(raw).sum()
        if norm > 0:
            return ProjectionVector(raw / norm)


def project(features: np.ndarray, value: float, w: ProjectionVector) -> float:
    """Inner product of [value, features...] with the direction."""
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 1 or len(features) + 1 != w.dim:
        raise DimensionError("feature vector length must be projection dim - 1")
    return float(w.weights[0] * value + (w.weights[1:] * features).sum())


def _project_all(features: np.ndarray, values: np.ndarray, w: ProjectionVector) -> np.ndarray:
    if features.shape[1] + 1 != w.dim:
        raise DimensionError("feature matrix width must be projection dim - 1")
    # elementwise multiply + reduce keeps the result independent of any
    # threaded BLAS configuration
    return w.weights[0] * values + (features * w.weights[1:]).sum(axis=1)


def _window_minima(
    z_sorted: np.ndarray, anchor_pos: np.ndarray, opposite_pos: np.ndarray, m2: int
) -> np.ndarray:
    """Per-anchor minimum distance over at most m2 opposite-group points
    on each side of the anchor in the sorted projection order.

    Works one window offset at a time: anchor positions are ascending, so
    the anchors for which the k-th left (right) neighbor exists form a
    suffix (prefix) slice and no masking is needed. Minima are tracked on
    squared distances; the square root is applied once at the end.
    """
    n_opp = len(opposite_pos)
    za = z_sorted[anchor_pos]
    z_opp = z_sorted[opposite_pos]
    # count of opposite points strictly left of each anchor; non-decreasing
    n_left = np.searchsorted(opposite_pos, anchor_pos)
    best = np.full(len(anchor_pos), np.inf)
    for k in range(1, m2 + 1):
        start = int(np.searchsorted(n_left, k))  # first anchor with k left neighbors
        if start < len(anchor_pos):
            diff = za[start:] - z_opp[n_left[start:] - k]
            np.minimum(
                best[start:], np.einsum("ij,ij->i", diff, diff), out=best[start:]
            )
        stop = int(np.searchsorted(n_left, n_opp - k, side="right"))
        if stop > 0:
            diff = za[:stop] - z_opp[n_left[:stop] + (k - 1)]
            np.minimum(best[:stop], np.einsum("ij,ij->i", diff, diff), out=best[:stop])
    return np.sqrt(best)


def projection_scan_distance(
    dataset: LabeledDataset,
    partition: GroupPartition,
    source: LabelSource,
    w: ProjectionVector,
    m2: int,
) -> float:
    """One sorted-scan trial: project, sort, take each anchor's windowed
    nearest-opposite distance, and return the worst case over all anchors.

    The result is always >= the exact set distance, and equals it exactly
    once m2 covers the larger group (the windows then contain every
    opposite point).
    """
    if partition.has_empty_group:
        raise EmptyGroup("both groups must be nonempty to compute a distance")
    if m2 < 1:
        raise InvalidArgument("m2 must be a positive integer")
    values = dataset.values_for(source).astype(np.float64)
    projected = _project_all(dataset.features, values, w)
    # stable ordering: ties keep their original row order, fixing the scan
    # semantics across platforms
    order = np.argsort(projected, kind="stable")
    in_group1 = np.zeros(dataset.n, dtype=bool)
    in_group1[partition.group1] = True
    sorted_in_group1 = in_group1[order]
    z_sorted = augmented_points(dataset.features[order], values[order])
    pos0 = np.nonzero(~sorted_in_group1)[0]
    pos1 = np.nonzero(sorted_in_group1)[0]
    worst = 0.0
    for anchors, opponents in ((pos0, pos1), (pos1, pos0)):
        minima = _window_minima(z_sorted, anchors, opponents, m2)
        worst = max(worst, float(minima.max()))
    return worst


def approx_set_distance(
    dataset: LabeledDataset,
    partition: GroupPartition,
    source: LabelSource,
    params: ApproxParams | None = None,
) -> DistanceResult:
    """Approximate the set distance as the minimum over m1 independent
    sorted-scan trials, each with a freshly sampled direction."""
    if partition.has_empty_group:
        raise EmptyGroup("both groups must be nonempty to compute a distance")
    params = params or ApproxParams()
    m2 = params.m2 if params.m2 is not None else default_m2(dataset.n)
    start = time.perf_counter_ns()
    dataset.values_for(source)  # fail fast on missing predictions
    best = math.inf
    for trial in range(params.m1):
        w = sample_l1_unit_vector(1 + dataset.n_features, _trial_rng(params.seed, trial))
        best = min(best, projection_scan_distance(dataset, partition, source, w, m2))
    elapsed = time.perf_counter_ns() - start
    return DistanceResult(
        value=best,
        method="approx",
        label_source=source,
        elapsed_ns=elapsed,
        m1=params.m1,
        m2=m2,
        seed=params.seed,
    )
