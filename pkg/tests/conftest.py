"""Shared fixtures and independent reference oracles.

The oracles here are deliberately naive (pure-Python nested loops) so the
vectorized implementations are checked against an independent route, not
against themselves.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from fairdist import GroupPartition, LabeledDataset, LabelSource


def make_dataset(features, sensitive, labels, predictions=None) -> LabeledDataset:
    features = np.atleast_2d(np.asarray(features, dtype=float))
    if features.shape[0] == 1 and len(np.asarray(labels).ravel()) > 1:
        features = features.T
    sensitive = np.asarray(sensitive)
    if sensitive.ndim == 1:
        sensitive = sensitive[:, None]
    return LabeledDataset(features, sensitive, np.asarray(labels), predictions)


def two_group_dataset(points0, labels0, points1, labels1):
    """Bundle two raw point sets into one dataset plus its partition."""
    points0 = np.atleast_2d(np.asarray(points0, dtype=float))
    points1 = np.atleast_2d(np.asarray(points1, dtype=float))
    features = np.vstack([points0, points1])
    sensitive = np.array([0] * len(points0) + [1] * len(points1))[:, None]
    labels = np.concatenate([labels0, labels1])
    dataset = LabeledDataset(features, sensitive, labels)
    partition = GroupPartition(
        attr_indices=(0,),
        group0=np.arange(len(points0)),
        group1=np.arange(len(points0), len(points0) + len(points1)),
        n=len(labels),
    )
    return dataset, partition


def naive_point_distance(xa, ya, xb, yb, counter=None) -> float:
    if counter is not None:
        counter[0] += 1
    total = (ya - yb) ** 2
    for a, b in zip(xa, xb):
        total += (a - b) ** 2
    return math.sqrt(total)


def naive_directed(points_from, values_from, points_to, values_to, counter=None) -> float:
    worst = 0.0
    for xa, ya in zip(points_from, values_from):
        nearest = min(
            naive_point_distance(xa, ya, xb, yb, counter)
            for xb, yb in zip(points_to, values_to)
        )
        worst = max(worst, nearest)
    return worst


def naive_set_distance(points0, values0, points1, values1, counter=None) -> float:
    return max(
        naive_directed(points0, values0, points1, values1, counter),
        naive_directed(points1, values1, points0, values0, counter),
    )


def naive_set_distance_of(dataset, partition, source, counter=None) -> float:
    values = dataset.values_for(source).astype(float)
    g0, g1 = partition.group0, partition.group1
    return naive_set_distance(
        dataset.features[g0], values[g0], dataset.features[g1], values[g1], counter
    )


def reference_scan(dataset, partition, source, w, m2) -> float:
    """Pure-Python re-implementation of the sorted-window scan: project,
    stable-sort, walk outward collecting at most m2 opposite-group points
    per side, min per anchor, max over anchors."""
    values = dataset.values_for(source).astype(float)
    projected = [
        float(w.weights[0] * values[i] + w.weights[1:] @ dataset.features[i])
        for i in range(dataset.n)
    ]
    order = sorted(range(dataset.n), key=lambda i: (projected[i], i))
    in_group1 = set(int(i) for i in partition.group1)
    worst = 0.0
    for position, row in enumerate(order):
        mine = row in in_group1
        candidates = []
        found = 0
        for q in range(position - 1, -1, -1):
            other = order[q]
            if (other in in_group1) != mine:
                candidates.append(other)
                found += 1
                if found == m2:
                    break
        found = 0
        for q in range(position + 1, dataset.n):
            other = order[q]
            if (other in in_group1) != mine:
                candidates.append(other)
                found += 1
                if found == m2:
                    break
        nearest = min(
            naive_point_distance(dataset.features[row], values[row],
                                 dataset.features[other], values[other])
            for other in candidates
        )
        worst = max(worst, nearest)
    return worst


def random_grouped_dataset(rng, n_lo=6, n_hi=40, nx_hi=4, with_predictions=True):
    """A small random dataset guaranteed to have two nonempty groups."""
    n = int(rng.integers(n_lo, n_hi + 1))
    nx = int(rng.integers(1, nx_hi + 1))
    sensitive = np.zeros(n, dtype=int)
    n1 = int(rng.integers(1, n))
    sensitive[rng.permutation(n)[:n1]] = 1
    features = rng.uniform(0.0, 1.0, size=(n, nx))
    labels = rng.integers(1, 3, size=n)
    predictions = rng.integers(1, 3, size=n) if with_predictions else None
    return make_dataset(features, sensitive, labels, predictions)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240809))


@pytest.fixture
def six_row_dataset():
    # groups {(0.0,1),(0.2,1),(0.5,2)} vs {(1.0,1),(0.9,2),(0.4,2)}:
    # directed max-mins are 1.0 and 0.8, so the distance is 1.0
    return two_group_dataset(
        [[0.0], [0.2], [0.5]], [1, 1, 2], [[1.0], [0.9], [0.4]], [1, 2, 2]
    )


TRUE = LabelSource.TRUE_LABELS
PRED = LabelSource.PREDICTIONS
