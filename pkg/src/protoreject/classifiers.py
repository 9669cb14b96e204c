"""Training of GLVQ, GMLVQ, LGMLVQ and RSLVQ by stochastic gradient steps.

All four trainers work on an isotropically rescaled copy of the data
(centred, divided by one global scale).  Scaling every coordinate by the
same factor multiplies all distances by a constant, so the returned model,
mapped back to input coordinates, classifies and scores exactly like the
one that was trained.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from . import _kernels
from .core import (
    InvalidInputError,
    LabeledDataset,
    PrototypeModel,
    closest_same_and_other,
    distances,
    masked_differences,
    predict,
)

MODEL_KINDS = ("glvq", "gmlvq", "lgmlvq", "rslvq")


@dataclass
class TrainConfig:
    prototypes_per_class: int = 1
    epochs: int = 30
    lr_prototypes: float = 0.01
    lr_metric: float = 0.002
    lr_decay: float = 0.01
    phi: str = "identity"
    sigma: float = 0.5
    seed: int = 0
    # "each": every local matrix gets trace 1; "joint": the mean trace is 1,
    # which keeps the relative scale of the local metrics.
    local_normalization: str = "joint"

    def __post_init__(self):
        if self.prototypes_per_class < 1:
            raise InvalidInputError("prototypes_per_class must be >= 1")
        if self.epochs < 1:
            raise InvalidInputError("epochs must be >= 1")
        if self.lr_prototypes <= 0 or self.lr_metric <= 0:
            raise InvalidInputError("learning rates must be positive")
        if self.lr_decay < 0:
            raise InvalidInputError("lr_decay must be nonnegative")
        if self.phi not in ("identity", "logistic"):
            raise InvalidInputError(f"unknown phi {self.phi!r}")
        if not self.sigma > 0:
            raise InvalidInputError("sigma must be positive")
        if self.local_normalization not in ("each", "joint"):
            raise InvalidInputError(f"unknown local_normalization {self.local_normalization!r}")


@dataclass
class TrainReport:
    cost_trace: list = field(default_factory=list)
    final_train_accuracy: float = 0.0


def _phi(name):
    if name == "identity":
        return (lambda m: m), (lambda m: 1.0)

    def logistic(m):
        return 1.0 / (1.0 + np.exp(-m))

    return logistic, (lambda m: logistic(m) * (1.0 - logistic(m)))


# ---------------------------------------------------------------------------
# GLVQ family


def relative_differences(model: PrototypeModel, data: LabeledDataset) -> np.ndarray:
    """Per-point ``(d+ - d-) / (d+ + d-)`` with d+ / d- to the closest correct / wrong prototype."""
    D = distances(model, data.points)
    J, K = closest_same_and_other(D, model.proto_labels, data.labels)
    if np.any(K < 0):
        raise InvalidInputError("model has no prototype of a different class for some point")
    rows = np.arange(len(J))
    dp, dm = D[rows, J], D[rows, K]
    s = dp + dm
    return np.divide(dp - dm, s, out=np.zeros_like(s), where=s > 0)


def glvq_cost(model: PrototypeModel, data: LabeledDataset, phi: str = "identity") -> float:
    f, _ = _phi(phi)
    return float(np.sum(f(relative_differences(model, data))))


def _kernel_inputs(model: PrototypeModel, X: np.ndarray):
    masks = ~np.isnan(X)
    Xf = np.where(masks, X, 0.0)
    kind = {"euclidean": 0, "global": 1, "local": 2}[model.metric]
    if kind == 0:
        omega = np.eye(model.dim)[None]
    elif kind == 1:
        omega = np.array(model.omega)[None]
    else:
        omega = np.array(model.omega)
    return Xf, masks, kind, omega


def glvq_gradient(model: PrototypeModel, data: LabeledDataset, phi: str = "identity"):
    """Cost and its gradients w.r.t. prototypes and metric factor(s).

    Sums the same per-sample gradients the SGD trainer uses.  The metric
    gradient has the shape of ``model.omega`` and is ``None`` for the
    Euclidean metric.
    """
    _phi(phi)
    Xf, masks, kind, omega = _kernel_inputs(model, data.points)
    cost, gW, gO = _kernels.glvq_batch(
        Xf, masks, data.labels, np.array(model.prototypes), model.proto_labels, omega, kind, phi == "logistic"
    )
    if kind == 0:
        gO = None
    elif kind == 1:
        gO = gO[0]
    return float(cost), gW, gO


# ---------------------------------------------------------------------------
# RSLVQ


def _log_components(model: PrototypeModel, X: np.ndarray) -> np.ndarray:
    """log P(j) + log p(x|j) for every point and component, shape (N, n_prototypes)."""
    diff = masked_differences(X, model.prototypes)
    d = np.einsum("njm,njm->nj", diff, diff)
    m_eff = np.sum(~np.isnan(X), axis=1)[:, None]
    var = model.sigma[None, :] ** 2
    with np.errstate(divide="ignore"):
        logp = np.log(model.priors)[None, :]
    return logp - d / (2.0 * var) - 0.5 * m_eff * np.log(2.0 * np.pi * var)


def _class_logsums(model: PrototypeModel, A: np.ndarray) -> np.ndarray:
    out = np.full((A.shape[0], model.n_classes), -np.inf)
    for k in range(model.n_classes):
        sel = model.proto_labels == k + 1
        out[:, k] = logsumexp(A[:, sel], axis=1)
    return out


def posterior(model: PrototypeModel, X) -> np.ndarray:
    """Class posteriors ``p(x, k | W) / p(x | W)``, one row per point, columns = classes 1..Z."""
    if not model.is_probabilistic:
        raise InvalidInputError("posterior needs an RSLVQ model (sigma and priors)")
    X = np.asarray(X, dtype=float)
    single = X.ndim == 1
    if single:
        X = X[None, :]
    if X.shape[1] != model.dim:
        raise InvalidInputError("dimension mismatch")
    C = _class_logsums(model, _log_components(model, X))
    P = np.exp(C - logsumexp(C, axis=1, keepdims=True))
    return P[0] if single else P


def rslvq_loglik(model: PrototypeModel, data: LabeledDataset) -> float:
    """Log likelihood ratio: sum of log p(x, y | W) - log p(x | W)."""
    A = _log_components(model, data.points)
    C = _class_logsums(model, A)
    own = C[np.arange(len(data)), data.labels - 1]
    return float(np.sum(own - logsumexp(A, axis=1)))


def rslvq_gradient(model: PrototypeModel, data: LabeledDataset):
    """Log likelihood ratio and its gradient w.r.t. the prototypes."""
    masks = ~np.isnan(data.points)
    with np.errstate(divide="ignore"):
        logprior = np.log(model.priors)
    total, gW = _kernels.rslvq_batch(
        np.where(masks, data.points, 0.0), masks, data.labels, np.array(model.prototypes),
        model.proto_labels, logprior, model.sigma**2,
    )
    return float(total), gW


# ---------------------------------------------------------------------------
# training


def _standardize(X: np.ndarray):
    center = np.nan_to_num(np.nanmean(X, axis=0)) if X.size else np.zeros(X.shape[1])
    var = np.nan_to_num(np.nanvar(X, axis=0))
    scale = float(np.sqrt(var.mean())) if var.size else 1.0
    if not np.isfinite(scale) or scale <= 0:
        scale = 1.0
    return (X - center) / scale, center, scale


def _init_prototypes(Xz, y, n_classes, ppc, rng):
    W, c = [], []
    spread = 0.01
    for k in range(1, n_classes + 1):
        pts = Xz[y == k]
        if len(pts):
            with np.errstate(all="ignore"):
                mean = np.nan_to_num(np.nanmean(pts, axis=0))
        else:
            mean = np.zeros(Xz.shape[1])
        for _ in range(ppc):
            W.append(mean + spread * rng.standard_normal(Xz.shape[1]))
            c.append(k)
    return np.array(W), np.array(c)


def _check_data(data: LabeledDataset, min_classes: int = 2):
    if len(data) == 0:
        raise InvalidInputError("empty training set")
    if np.count_nonzero(data.class_counts()) < min_classes:
        raise InvalidInputError("training needs at least two classes")


def _normalize(omega, single, how):
    traces = np.einsum("jrm,jrm->j", omega, omega)
    if single or how == "joint":
        total = traces.mean()
        return omega / np.sqrt(total) if total > 0 else omega
    traces = np.where(traces > 0, traces, 1.0)
    return omega / np.sqrt(traces)[:, None, None]


def _glvq_model(W, c, metric, omega, n_classes):
    factor = None if metric == "euclidean" else (omega[0] if metric == "global" else omega)
    return PrototypeModel(W.copy(), c, metric, None if factor is None else factor.copy(), n_classes=n_classes)


def _train_glvq_family(data: LabeledDataset, config: TrainConfig, metric: str):
    _check_data(data)
    rng = np.random.default_rng(config.seed)
    Xz, center, scale = _standardize(data.points)
    y = data.labels
    W, c = _init_prototypes(Xz, y, data.n_classes, config.prototypes_per_class, rng)
    M = data.dim
    kind = {"euclidean": 0, "global": 1, "local": 2}[metric]
    # kernel layout: one factor per prototype for local metrics, else a single one
    omega = np.repeat((np.eye(M) / np.sqrt(M))[None], len(W) if kind == 2 else 1, axis=0)
    f, _ = _phi(config.phi)
    masks = ~np.isnan(Xz)
    Xf = np.where(masks, Xz, 0.0)
    zdata = LabeledDataset(Xz, y, data.n_classes)
    trace = []
    for epoch in range(config.epochs):
        lr_w = config.lr_prototypes / (1.0 + config.lr_decay * epoch)
        lr_m = config.lr_metric / (1.0 + config.lr_decay * epoch)
        order = rng.permutation(len(Xf))
        _kernels.glvq_epoch(Xf, masks, y, order, W, c, omega, kind, config.phi == "logistic", lr_w, lr_m)
        if kind:
            omega = _normalize(omega, kind == 1, config.local_normalization)
        current = _glvq_model(W, c, metric, omega, data.n_classes)
        trace.append(float(np.sum(f(relative_differences(current, zdata)))))
    model = _glvq_model(W * scale + center, c, metric, omega, data.n_classes)
    acc = float(np.mean(predict(model, data.points) == y))
    return model, TrainReport(trace, acc)


def train_glvq(data: LabeledDataset, config: TrainConfig | None = None):
    return _train_glvq_family(data, config or TrainConfig(), "euclidean")


def train_gmlvq(data: LabeledDataset, config: TrainConfig | None = None):
    return _train_glvq_family(data, config or TrainConfig(), "global")


def train_lgmlvq(data: LabeledDataset, config: TrainConfig | None = None):
    return _train_glvq_family(data, config or TrainConfig(), "local")


def train_rslvq(data: LabeledDataset, config: TrainConfig | None = None):
    """Gradient ascent on the log likelihood ratio with fixed uniform priors and one bandwidth.

    The step is ``lr_prototypes * sigma**2`` times the gradient, so the
    learning rate does not have to be retuned when the bandwidth changes.
    """
    config = config or TrainConfig()
    _check_data(data, min_classes=1)
    rng = np.random.default_rng(config.seed)
    Xz, center, scale = _standardize(data.points)
    y = data.labels
    W, c = _init_prototypes(Xz, y, data.n_classes, config.prototypes_per_class, rng)
    priors = np.full(len(W), 1.0 / len(W))
    logprior = np.log(priors)
    sigma2 = np.full(len(W), config.sigma**2)
    masks = ~np.isnan(Xz)
    Xf = np.where(masks, Xz, 0.0)
    zdata = LabeledDataset(Xz, y, data.n_classes)
    trace = []
    for epoch in range(config.epochs):
        lr = config.sigma**2 * config.lr_prototypes / (1.0 + config.lr_decay * epoch)
        _kernels.rslvq_epoch(Xf, masks, y, rng.permutation(len(Xf)), W, c, logprior, sigma2, lr)
        current = PrototypeModel(W.copy(), c, sigma=config.sigma, priors=priors, n_classes=data.n_classes)
        trace.append(rslvq_loglik(current, zdata))
    model = PrototypeModel(W * scale + center, c, sigma=config.sigma * scale, priors=priors, n_classes=data.n_classes)
    acc = float(np.mean(predict(model, data.points) == y))
    return model, TrainReport(trace, acc)


TRAINERS = {"glvq": train_glvq, "gmlvq": train_gmlvq, "lgmlvq": train_lgmlvq, "rslvq": train_rslvq}


def train(kind: str, data: LabeledDataset, config: TrainConfig | None = None):
    try:
        trainer = TRAINERS[kind]
    except KeyError:
        raise InvalidInputError(f"unknown model kind {kind!r}") from None
    return trainer(data, config)
