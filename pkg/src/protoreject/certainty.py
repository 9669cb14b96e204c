"""Certainty measures r(x); larger values mean a more certain classification."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .classifiers import posterior
from .core import InvalidInputError, PrototypeModel, distances, winners

MEASURES = ("relsim", "conf", "bayes")


@dataclass(frozen=True)
class GenerativeMixture:
    """Ground-truth sampling law: axis-aligned Gaussians plus optional uniform noise.

    Component ``k`` has mean ``means[k]``, per-dimension standard deviation
    ``stds[k]``, weight ``priors[k]`` and class ``labels[k]``.  The noise
    component has weight ``noise_mass`` and is uniform on the box
    ``[noise_low, noise_high]``.  With ``noise_rule="nearest-mean"`` a noise
    point takes the class of the closest component mean (Euclidean);
    with ``"uniform"`` its class is drawn uniformly.
    """

    means: np.ndarray
    stds: np.ndarray
    priors: np.ndarray
    labels: np.ndarray
    n_classes: int
    noise_mass: float = 0.0
    noise_low: np.ndarray | None = None
    noise_high: np.ndarray | None = None
    noise_rule: str = "nearest-mean"

    def __post_init__(self):
        means = np.atleast_2d(np.asarray(self.means, dtype=float))
        stds = np.atleast_2d(np.asarray(self.stds, dtype=float))
        priors = np.asarray(self.priors, dtype=float)
        labels = np.asarray(self.labels, dtype=int)
        if stds.shape != means.shape or priors.shape != labels.shape or len(priors) != len(means):
            raise InvalidInputError("inconsistent mixture shapes")
        if np.any(stds <= 0):
            raise InvalidInputError("standard deviations must be positive")
        if not 0.0 <= self.noise_mass < 1.0:
            raise InvalidInputError("noise mass must lie in [0, 1)")
        if abs(priors.sum() + self.noise_mass - 1.0) > 1e-9:
            raise InvalidInputError("component priors and noise mass must sum to 1")
        if self.noise_mass > 0 and (self.noise_low is None or self.noise_high is None):
            raise InvalidInputError("noise component needs a support box")
        if self.noise_rule not in ("nearest-mean", "uniform"):
            raise InvalidInputError(f"unknown noise rule {self.noise_rule!r}")
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "stds", stds)
        object.__setattr__(self, "priors", priors)
        object.__setattr__(self, "labels", labels)
        if self.noise_low is not None:
            object.__setattr__(self, "noise_low", np.asarray(self.noise_low, dtype=float))
            object.__setattr__(self, "noise_high", np.asarray(self.noise_high, dtype=float))

    @property
    def dim(self) -> int:
        return self.means.shape[1]

    def class_log_densities(self, X) -> np.ndarray:
        """log p(x, class k) for classes 1..Z, shape (N, Z); missing dims are marginalised."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.dim:
            raise InvalidInputError("dimension mismatch")
        mask = ~np.isnan(X)
        Xf = np.where(mask, X, 0.0)
        z = (Xf[:, None, :] - self.means[None]) / self.stds[None]
        per_dim = -0.5 * z**2 - np.log(self.stds[None]) - 0.5 * np.log(2 * np.pi)
        with np.errstate(divide="ignore"):
            comp = np.log(self.priors)[None, :] + np.sum(per_dim * mask[:, None, :], axis=2)
        out = np.full((len(X), self.n_classes), -np.inf)
        for k in range(self.n_classes):
            sel = self.labels == k + 1
            if sel.any():
                out[:, k] = logsumexp(comp[:, sel], axis=1)
        if self.noise_mass > 0:
            width = self.noise_high - self.noise_low
            inside = np.all(~mask | ((Xf >= self.noise_low) & (Xf <= self.noise_high)), axis=1)
            log_u = -np.sum(np.log(width)[None, :] * mask, axis=1)
            if self.noise_rule == "uniform":
                share = np.full((len(X), self.n_classes), 1.0 / self.n_classes)
            else:
                share = np.zeros((len(X), self.n_classes))
                share[np.arange(len(X)), self.noise_labels(X) - 1] = 1.0
            with np.errstate(divide="ignore"):
                noise = np.where(inside, np.log(self.noise_mass) + log_u, -np.inf)[:, None] + np.log(share)
            out = np.logaddexp(out, noise)
        return out

    def noise_labels(self, X) -> np.ndarray:
        """Class of the component mean closest to each point (observed dims only)."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        diff = np.nan_to_num(X[:, None, :] - self.means[None], nan=0.0)
        return self.labels[np.argmin(np.sum(diff**2, axis=2), axis=1)]

    def class_posteriors(self, X) -> np.ndarray:
        C = self.class_log_densities(X)
        total = logsumexp(C, axis=1, keepdims=True)
        with np.errstate(invalid="ignore"):
            P = np.exp(C - total)
        P[~np.isfinite(total[:, 0])] = 1.0 / self.n_classes
        return P

    def predict(self, X) -> np.ndarray:
        """Bayes classifier: the class with the largest posterior (smallest label on ties)."""
        return np.argmax(self.class_posteriors(X), axis=1) + 1


def relsim(model: PrototypeModel, X) -> np.ndarray:
    """Relative similarity ``(d- - d+) / (d- + d+)``.

    ``d+`` is the distance to the winning prototype, ``d-`` the distance to
    the closest prototype with a different label.  Points that coincide
    with prototypes of two classes get 0.
    """
    if len(np.unique(model.proto_labels)) < 2:
        raise InvalidInputError("relsim needs prototypes of at least two classes")
    D = distances(model, X)
    win = np.argmin(D, axis=1)
    rows = np.arange(len(D))
    dp = D[rows, win]
    other = model.proto_labels[None, :] != model.proto_labels[win][:, None]
    dm = np.min(np.where(other, D, np.inf), axis=1)
    s = dp + dm
    return np.divide(dm - dp, s, out=np.zeros_like(s), where=s > 0)


def conf(model: PrototypeModel, X) -> np.ndarray:
    """Largest estimated class posterior of an RSLVQ model."""
    P = posterior(model, np.atleast_2d(np.asarray(X, dtype=float)))
    return P.max(axis=1)


def bayes_certainty(truth: GenerativeMixture, X) -> np.ndarray:
    """Largest true class posterior under the generating mixture."""
    return truth.class_posteriors(X).max(axis=1)


def score(measure: str, X, model: PrototypeModel | None = None, truth: GenerativeMixture | None = None):
    """Certainty values, predicted labels and cells for a measure.

    For ``bayes`` the classifier is the Bayes rule of ``truth`` and the
    cell of a point is its predicted class (0-based).
    """
    if measure == "bayes":
        if truth is None:
            raise InvalidInputError("the bayes measure needs the generating mixture")
        P = truth.class_posteriors(X)
        pred = np.argmax(P, axis=1) + 1
        return P.max(axis=1), pred, pred - 1
    if model is None:
        raise InvalidInputError(f"the {measure} measure needs a model")
    if measure == "relsim":
        values = relsim(model, X)
    elif measure == "conf":
        values = conf(model, X)
    else:
        raise InvalidInputError(f"unknown measure {measure!r}")
    cells = winners(model, X)
    return values, model.proto_labels[cells], cells
