"""Seeded generators for the two artificial benchmarks and their true mixtures."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .certainty import GenerativeMixture
from .core import InvalidInputError, LabeledDataset

KINDS = ("gaussian-clusters", "pearl-necklace")

GAUSSIAN_MEANS = np.array([[-4.0, 4.0], [4.5, 0.5]])
GAUSSIAN_STDS = np.array([[5.2, 2.5], [7.1, 2.1]])

PEARL_X = np.array([2.0, 44.0, 85.0, 100.0, 136.0])
PEARL_STD = np.array([1.0, 20.0, 0.5, 7.0, 11.0])
PEARL_Y = 3.0

BOX_INFLATION = 0.2


@dataclass(frozen=True)
class SyntheticSpec:
    kind: str = "pearl-necklace"
    points_per_cluster: int = 500
    noise_fraction: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInputError(f"unknown dataset kind {self.kind!r}")
        if self.points_per_cluster < 1:
            raise InvalidInputError("points_per_cluster must be >= 1")
        if not 0.0 <= self.noise_fraction < 1.0:
            raise InvalidInputError("noise_fraction must lie in [0, 1)")


def _clusters(rng, means, stds, n):
    X = np.concatenate([m + s * rng.standard_normal((n, len(m))) for m, s in zip(means, stds)])
    y = np.repeat(np.arange(1, len(means) + 1), n)
    return X, y


def gen_gaussian_clusters(spec: SyntheticSpec):
    """Two overlapping 2-D Gaussians plus a uniform noise overlay.

    ``noise_fraction`` is the share of noise points in the final set.  Noise
    is uniform on the bounding box of the Gaussian samples, widened by 20%
    of its extent on each side, and is labelled by the closest cluster mean.
    """
    if spec.kind != "gaussian-clusters":
        raise InvalidInputError("spec.kind must be 'gaussian-clusters'")
    rng = np.random.default_rng(spec.seed)
    n = spec.points_per_cluster
    X, y = _clusters(rng, GAUSSIAN_MEANS, GAUSSIAN_STDS, n)
    n_noise = int(round(2 * n * spec.noise_fraction / (1.0 - spec.noise_fraction)))
    low = high = None
    if n_noise:
        lo, hi = X.min(axis=0), X.max(axis=0)
        pad = BOX_INFLATION * (hi - lo)
        low, high = lo - pad, hi + pad
        noise = rng.uniform(low, high, size=(n_noise, 2))
    total = 2 * n + n_noise
    truth = GenerativeMixture(
        GAUSSIAN_MEANS,
        GAUSSIAN_STDS,
        np.full(2, n / total),
        np.array([1, 2]),
        n_classes=2,
        noise_mass=n_noise / total,
        noise_low=low,
        noise_high=high,
    )
    if n_noise:
        X = np.concatenate([X, noise])
        y = np.concatenate([y, truth.noise_labels(noise)])
    return LabeledDataset(X, y, 2), truth


def gen_pearl_necklace(spec: SyntheticSpec):
    """Five clusters along the x axis with strongly varying spread."""
    if spec.kind != "pearl-necklace":
        raise InvalidInputError("spec.kind must be 'pearl-necklace'")
    rng = np.random.default_rng(spec.seed)
    means = np.column_stack([PEARL_X, np.full(5, PEARL_Y)])
    stds = np.column_stack([PEARL_STD, PEARL_STD])
    X, y = _clusters(rng, means, stds, spec.points_per_cluster)
    truth = GenerativeMixture(means, stds, np.full(5, 0.2), np.arange(1, 6), n_classes=5)
    return LabeledDataset(X, y, 5), truth


def generate(spec: SyntheticSpec):
    if spec.kind == "gaussian-clusters":
        return gen_gaussian_clusters(spec)
    return gen_pearl_necklace(spec)
