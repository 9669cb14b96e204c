"""Accuracy-reject curves, Pareto extraction and the repeated cross-validation harness."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .certainty import GenerativeMixture, score
from .classifiers import MODEL_KINDS, TrainConfig, train
from .core import InvalidInputError, LabeledDataset
from .reject import REJECT_KINDS, ThresholdFront, optimise

PROVENANCES = ("global", "local-dp", "local-greedy", "bayes")
_EPS = 1e-9


@dataclass(frozen=True)
class ARCCurve:
    """Classified fraction ``t_c`` (strictly decreasing from 1) against accuracy ``t_a``."""

    t_c: np.ndarray
    t_a: np.ndarray
    provenance: str = "global"

    def __len__(self):
        return len(self.t_c)


@dataclass(frozen=True)
class AveragedARC:
    t_c: np.ndarray
    t_a: np.ndarray
    support: np.ndarray
    provenance: str = "global"

    def at(self, t_c: float) -> float | None:
        hit = np.flatnonzero(np.abs(self.t_c - t_c) < _EPS)
        return float(self.t_a[hit[0]]) if hit.size else None


def _curve(n_false, n_true, n_correct, n_total, provenance):
    """ARC from reject counts listed in order of preference; the no-reject point comes first."""
    tc, ta = [1.0], [n_correct / n_total]
    for n, t in zip(n_false, n_true):
        kept = n_total - n - t
        if kept <= 0:
            continue
        c = kept / n_total
        if c < tc[-1] - _EPS:
            tc.append(c)
            ta.append((n_correct - n) / kept)
    return ARCCurve(np.array(tc), np.array(ta), provenance)


def arc_from_front(front: ThresholdFront, n_correct: int, n_errors: int, n_total: int | None = None,
                   provenance: str = "global") -> ARCCurve:
    """ARC of a front on the data it was computed from.

    Entries that reject everything are dropped, as are entries that do not
    lower the classified fraction.
    """
    if n_total is None:
        n_total = n_correct + n_errors
    if n_total != n_correct + n_errors:
        raise InvalidInputError("|X| must equal |L| + |E|")
    if n_total == 0:
        raise InvalidInputError("empty evaluation set")
    return _curve(front.n, front.t, n_correct, n_total, provenance)


def arc_on_data(front: ThresholdFront, scores, correct, cells, provenance: str = "global") -> ARCCurve:
    """ARC obtained by applying every threshold vector of ``front`` to (held-out) data.

    Rows are taken in front order; when two vectors classify the same
    number of points only the first is kept, and vectors that classify more
    points than an earlier one are skipped, so ``t_c`` stays decreasing.
    """
    scores = np.asarray(scores, dtype=float)
    correct = np.asarray(correct, dtype=bool)
    cells = np.asarray(cells, dtype=int)
    if len(scores) == 0:
        raise InvalidInputError("empty evaluation set")
    rejected = scores[None, :] < front.thresholds[:, cells]
    n_false = np.sum(rejected & correct[None, :], axis=1)
    n_true = np.sum(rejected & ~correct[None, :], axis=1)
    return _curve(n_false, n_true, int(correct.sum()), len(scores), provenance)


def pareto_extract(front: ThresholdFront) -> ThresholdFront:
    """Keep the entries whose true rejects exceed those of every entry with fewer false rejects."""
    keep = []
    best = None
    for k in np.argsort(front.n, kind="stable"):
        if best is None or front.t[k] > best:
            keep.append(k)
            best = front.t[k]
    keep = np.array(keep, dtype=int)
    return ThresholdFront(front.n[keep], front.t[keep], front.thresholds[keep], "pareto")


# ---------------------------------------------------------------------------
# cross-validation


def stratified_folds(labels, folds: int, rng: np.random.Generator) -> np.ndarray:
    """Fold id per point; each class is shuffled and dealt round-robin over the folds."""
    labels = np.asarray(labels)
    out = np.empty(len(labels), dtype=int)
    start = 0
    for k in np.unique(labels):
        idx = rng.permutation(np.flatnonzero(labels == k))
        out[idx] = (start + np.arange(len(idx))) % folds
        start = (start + len(idx)) % folds
    return out


def check_compatibility(model_kind: str, measure: str, reject_kinds, truth) -> None:
    if measure not in ("relsim", "conf", "bayes"):
        raise InvalidInputError(f"unknown measure {measure!r}")
    if measure != "bayes" and model_kind not in MODEL_KINDS:
        raise InvalidInputError(f"unknown model kind {model_kind!r}")
    if measure == "conf" and model_kind != "rslvq":
        raise InvalidInputError("the conf measure needs an rslvq model")
    if measure == "bayes":
        if truth is None:
            raise InvalidInputError("the bayes measure needs the generating mixture")
        if any(k != "global" for k in reject_kinds):
            raise InvalidInputError("the bayes measure is evaluated with a global threshold only")
    for k in reject_kinds:
        if k not in REJECT_KINDS:
            raise InvalidInputError(f"unknown reject strategy {k!r}")


def _run(job):
    data, train_idx, test_idx, model_kind, measure, reject_kinds, config, truth, on_training = job
    tr = data.subset(train_idx)
    te = tr if on_training else data.subset(test_idx)
    if measure == "bayes":
        model = None
        n_cells = data.n_classes
    else:
        model, _ = train(model_kind, tr, config)
        n_cells = model.n_prototypes
    s_tr, p_tr, c_tr = score(measure, tr.points, model, truth)
    s_te, p_te, c_te = score(measure, te.points, model, truth)
    ok_tr = p_tr == tr.labels
    ok_te = p_te == te.labels
    out = {}
    for kind in reject_kinds:
        front = optimise(kind, s_tr, ok_tr, c_tr, n_cells)
        prov = "bayes" if measure == "bayes" else kind
        out[prov] = arc_on_data(front, s_te, ok_te, c_te, prov)
    return out


def run_seed(seed: int, repeat: int, fold: int) -> int:
    return int(np.random.SeedSequence([seed, repeat, fold]).generate_state(1)[0])


def cross_validate(
    data: LabeledDataset,
    model_kind: str = "gmlvq",
    measure: str = "relsim",
    reject_kinds=("global",),
    folds: int = 10,
    repeats: int = 10,
    seed: int = 0,
    config: TrainConfig | None = None,
    truth: GenerativeMixture | None = None,
    n_jobs: int = 1,
    on_training: bool = False,
) -> dict[str, list[ARCCurve]]:
    """Repeated stratified k-fold evaluation of reject strategies.

    For every run the model and the thresholds are fitted on the training
    folds and the ARC is measured on the held-out fold (or on the training
    folds themselves with ``on_training``).  Returns ``folds * repeats``
    curves per provenance, in run order.  Each run trains with its own seed
    derived from ``(seed, repeat, fold)``.
    """
    if isinstance(reject_kinds, str):
        reject_kinds = (reject_kinds,)
    reject_kinds = tuple(reject_kinds)
    check_compatibility(model_kind, measure, reject_kinds, truth)
    if folds < 2:
        raise InvalidInputError("cross-validation needs at least 2 folds")
    if repeats < 1:
        raise InvalidInputError("repeats must be >= 1")
    counts = data.class_counts()
    if np.any((counts > 0) & (counts < folds)):
        raise InvalidInputError(f"every class needs at least {folds} points for stratified folds")
    config = config or TrainConfig()
    jobs = []
    for r in range(repeats):
        assign = stratified_folds(data.labels, folds, np.random.default_rng([seed, r]))
        for f in range(folds):
            cfg = replace(config, seed=run_seed(seed, r, f))
            jobs.append((data, np.flatnonzero(assign != f), np.flatnonzero(assign == f),
                         model_kind, measure, reject_kinds, cfg, truth, on_training))
    if n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(_run, jobs))
    else:
        results = [_run(j) for j in jobs]
    out: dict[str, list[ARCCurve]] = {}
    for res in results:
        for prov, curve in res.items():
            out.setdefault(prov, []).append(curve)
    return out


def _grid(step: float) -> np.ndarray:
    k = int(round(1.0 / step))
    return np.arange(k, -1, -1) * step


def average_arcs(curves: list[ARCCurve], step: float = 0.01, min_support: int = 80) -> AveragedARC:
    """Mean accuracy on a common ``t_c`` grid.

    A curve contributes at grid value ``g`` when it reaches ``t_c <= g``; its
    value there is the accuracy of its point with the largest ``t_c <= g``
    (a right-continuous staircase).  Grid values with fewer than
    ``min_support`` contributing curves are left out.
    """
    if not curves:
        raise InvalidInputError("need at least one curve")
    grid = _grid(step)
    total = np.zeros(len(grid))
    support = np.zeros(len(grid), dtype=int)
    for c in curves:
        asc_tc = c.t_c[::-1]
        asc_ta = c.t_a[::-1]
        pos = np.searchsorted(asc_tc, grid + _EPS, side="right") - 1
        ok = pos >= 0
        total[ok] += asc_ta[pos[ok]]
        support[ok] += 1
    keep = support >= max(min_support, 1)
    return AveragedARC(grid[keep], total[keep] / support[keep], support[keep], curves[0].provenance)
