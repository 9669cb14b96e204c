"""Datasets, prototype models, distances and winner-takes-all classification.

Missing feature values are stored as NaN.  A missing dimension is dropped
from the quadratic form entirely: the difference vector gets a zero in that
slot, which removes every matrix row and column touching it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

METRICS = ("euclidean", "global", "local")


class InvalidInputError(ValueError):
    """Raised for malformed datasets, models or arguments."""


@dataclass(frozen=True)
class LabeledDataset:
    """Feature matrix (NaN = missing) with integer labels in ``1..n_classes``."""

    points: np.ndarray
    labels: np.ndarray
    n_classes: int = 0

    def __post_init__(self):
        points = np.array(self.points, dtype=float)
        labels = np.array(self.labels, dtype=int)
        if points.ndim == 1:
            points = points[:, None]
        if points.ndim != 2:
            raise InvalidInputError("points must be a 2-D array")
        if labels.shape != (points.shape[0],):
            raise InvalidInputError("need exactly one label per point")
        n_classes = self.n_classes or (int(labels.max()) if labels.size else 0)
        if labels.size and (labels.min() < 1 or labels.max() > n_classes):
            raise InvalidInputError(f"labels must lie in 1..{n_classes}")
        if np.isinf(points).any():
            raise InvalidInputError("infinite feature values are not allowed")
        points.flags.writeable = False
        labels.flags.writeable = False
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "n_classes", n_classes)

    def __len__(self):
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def subset(self, index) -> "LabeledDataset":
        return LabeledDataset(self.points[index], self.labels[index], self.n_classes)

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_classes + 1)[1:]


@dataclass(frozen=True)
class PrototypeModel:
    """Labelled prototypes plus a metric.

    ``omega`` holds the metric factor: ``None`` for the Euclidean metric, an
    ``(R, M)`` array for one global matrix and a ``(n_prototypes, R, M)``
    array for local matrices.  The metric itself is ``omega.T @ omega`` and
    hence positive semi-definite by construction.  ``sigma`` and ``priors``
    are only set for RSLVQ models.
    """

    prototypes: np.ndarray
    proto_labels: np.ndarray
    metric: str = "euclidean"
    omega: np.ndarray | None = None
    sigma: np.ndarray | None = None
    priors: np.ndarray | None = None
    n_classes: int = field(default=0)

    def __post_init__(self):
        W = np.array(self.prototypes, dtype=float)
        if W.ndim != 2:
            raise InvalidInputError("prototypes must be a 2-D array")
        c = np.array(self.proto_labels, dtype=int)
        if c.shape != (W.shape[0],):
            raise InvalidInputError("need exactly one label per prototype")
        if self.metric not in METRICS:
            raise InvalidInputError(f"unknown metric {self.metric!r}")
        omega = None
        if self.metric == "euclidean":
            if self.omega is not None:
                raise InvalidInputError("euclidean metric takes no matrix")
        else:
            omega = np.array(self.omega, dtype=float)
            want = 2 if self.metric == "global" else 3
            if omega.ndim != want or omega.shape[-1] != W.shape[1]:
                raise InvalidInputError("metric factor has the wrong shape")
            if self.metric == "local" and omega.shape[0] != W.shape[0]:
                raise InvalidInputError("need one local matrix per prototype")
        sigma = priors = None
        if (self.sigma is None) != (self.priors is None):
            raise InvalidInputError("sigma and priors must be given together")
        if self.sigma is not None:
            sigma = np.broadcast_to(np.asarray(self.sigma, dtype=float), c.shape).copy()
            priors = np.array(self.priors, dtype=float)
            if priors.shape != c.shape:
                raise InvalidInputError("need one prior per prototype")
            if np.any(sigma <= 0):
                raise InvalidInputError("bandwidths must be positive")
            if np.any(priors < 0) or abs(priors.sum() - 1.0) > 1e-9:
                raise InvalidInputError("priors must be nonnegative and sum to 1")
        if c.min() < 1:
            raise InvalidInputError("prototype labels must be positive")
        # coverage of 1..Z is only checked when Z is stated explicitly
        n_classes = self.n_classes or int(c.max())
        missing = set(range(1, n_classes + 1)) - set(c.tolist())
        if missing and self.n_classes:
            raise InvalidInputError(f"classes without prototype: {sorted(missing)}")
        for arr in (W, c, omega, sigma, priors):
            if arr is not None:
                arr.flags.writeable = False
        object.__setattr__(self, "prototypes", W)
        object.__setattr__(self, "proto_labels", c)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "priors", priors)
        object.__setattr__(self, "n_classes", n_classes)

    @property
    def n_prototypes(self) -> int:
        return self.prototypes.shape[0]

    @property
    def dim(self) -> int:
        return self.prototypes.shape[1]

    @property
    def is_probabilistic(self) -> bool:
        return self.sigma is not None

    def lambdas(self) -> np.ndarray:
        """Metric matrices, shape ``(n_prototypes, M, M)``."""
        M = self.dim
        if self.metric == "euclidean":
            return np.broadcast_to(np.eye(M), (self.n_prototypes, M, M))
        if self.metric == "global":
            lam = self.omega.T @ self.omega
            return np.broadcast_to(lam, (self.n_prototypes, M, M))
        return np.einsum("jrm,jrn->jmn", self.omega, self.omega)


@dataclass(frozen=True)
class ClassificationOutcome:
    predicted: int
    cell: int
    correct: bool | None = None


def _as_points(x, dim: int) -> np.ndarray:
    X = np.asarray(x, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != dim:
        raise InvalidInputError(f"expected feature vectors of dimension {dim}, got shape {np.shape(x)}")
    return X


def masked_differences(X: np.ndarray, W: np.ndarray) -> np.ndarray:
    """``X[:, None] - W[None]`` with missing coordinates set to zero."""
    diff = X[:, None, :] - W[None, :, :]
    return np.where(np.isnan(diff), 0.0, diff)


def distances(model: PrototypeModel, X) -> np.ndarray:
    """Squared (matrix) distances of every point to every prototype, shape (N, n_prototypes)."""
    X = _as_points(X, model.dim)
    diff = masked_differences(X, model.prototypes)
    if model.metric == "euclidean":
        return np.einsum("njm,njm->nj", diff, diff)
    if model.metric == "global":
        proj = diff @ model.omega.T
    else:
        proj = np.einsum("jrm,njm->njr", model.omega, diff)
    return np.einsum("njr,njr->nj", proj, proj)


def distance(model: PrototypeModel, j: int, x) -> float:
    """Distance between prototype ``j`` (0-based) and a single point ``x``."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise InvalidInputError("distance takes a single feature vector")
    if not 0 <= j < model.n_prototypes:
        raise InvalidInputError(f"prototype index {j} out of range")
    return float(distances(model, x)[0, j])


def winners(model: PrototypeModel, X) -> np.ndarray:
    """Index of the closest prototype per point; ties go to the smallest index."""
    return np.argmin(distances(model, X), axis=1)


def classify(model: PrototypeModel, x, label: int | None = None) -> ClassificationOutcome:
    if np.ndim(x) != 1:
        raise InvalidInputError("classify takes a single feature vector")
    cell = int(winners(model, x)[0])
    predicted = int(model.proto_labels[cell])
    correct = None if label is None else predicted == int(label)
    return ClassificationOutcome(predicted, cell, correct)


def predict(model: PrototypeModel, X) -> np.ndarray:
    return model.proto_labels[winners(model, X)]


def voronoi_partition(model: PrototypeModel, data: LabeledDataset | np.ndarray) -> np.ndarray:
    """Cell index (0-based prototype index) of every point."""
    X = data.points if isinstance(data, LabeledDataset) else data
    return winners(model, X)


def closest_same_and_other(D: np.ndarray, proto_labels: np.ndarray, y: np.ndarray):
    """Indices of the closest prototype with label ``y`` and with a label other than ``y``.

    Returns ``(J, K)``; ``K`` is ``-1`` for rows where no other-class prototype exists.
    """
    same = proto_labels[None, :] == np.asarray(y)[:, None]
    J = np.argmin(np.where(same, D, np.inf), axis=1)
    other = np.where(~same, D, np.inf)
    K = np.argmin(other, axis=1)
    K = np.where(np.isinf(other[np.arange(len(K)), K]), -1, K)
    return J, K
