"""Reject thresholds: per-cell profiles and (pseudo-)Pareto fronts.

A point is rejected when its certainty is strictly below the threshold of
its cell.  Within a cell only thresholds equal to the certainty of a
correctly classified point (plus ``inf`` when the most certain point is an
error) can lie on the front, so every cell is summarised by a
:class:`CellRejectProfile`: the candidate thresholds in ascending order and
the cumulative false / true rejects each of them causes.

Three optimisers combine the cells:

* :func:`dp_local_front` - exact dynamic program over cells,
* :func:`greedy_local_front` - linear-time greedy threshold increase,
* :func:`brute_force_front` - exhaustive enumeration, used as oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import inf, prod

import numpy as np

from .core import InvalidInputError

DEFAULT_ORACLE_CAP = 10**7
_NEG = -(1 << 60)


class OracleCapExceeded(InvalidInputError):
    """The brute-force enumeration would exceed its configured size cap."""


@dataclass(frozen=True)
class CellRejectProfile:
    """Candidate thresholds of one Voronoi cell.

    ``false_rejects[i]`` is the number of correct points below
    ``thresholds[i]``; it equals ``i`` unless correct points share a
    certainty value.  ``true_rejects[i]`` counts the errors below it.
    """

    cell: int
    thresholds: np.ndarray
    true_rejects: np.ndarray
    false_rejects: np.ndarray
    n_correct: int
    n_errors: int

    def __len__(self):
        return len(self.thresholds)


@dataclass(frozen=True)
class ThresholdFront:
    """Rows ``(n, t, thresholds)``: false rejects, true rejects, one threshold per cell."""

    n: np.ndarray
    t: np.ndarray
    thresholds: np.ndarray
    kind: str = "pseudo"

    def __len__(self):
        return len(self.n)

    def __iter__(self):
        for k in range(len(self.n)):
            yield int(self.n[k]), int(self.t[k]), self.thresholds[k]

    def pairs(self) -> list:
        return [(int(a), int(b)) for a, b in zip(self.n, self.t)]

    def t_at(self, n: int) -> int | None:
        hit = np.flatnonzero(self.n == n)
        return int(self.t[hit[0]]) if hit.size else None


def _empty_profile(cell):
    return CellRejectProfile(cell, np.array([0.0]), np.array([0]), np.array([0]), 0, 0)


def build_profiles(scores, correct, cells, n_cells: int) -> list[CellRejectProfile]:
    """One profile per cell ``0..n_cells-1``.

    Equal certainty values are ordered with correct points first, then by
    point index.  Empty cells get a single threshold 0 that rejects nothing.
    """
    scores = np.asarray(scores, dtype=float)
    correct = np.asarray(correct, dtype=bool)
    cells = np.asarray(cells, dtype=int)
    if not (scores.shape == correct.shape == cells.shape) or scores.ndim != 1:
        raise InvalidInputError("scores, correctness and cells must be 1-D and of equal length")
    if cells.size and (cells.min() < 0 or cells.max() >= n_cells):
        raise InvalidInputError(f"cell indices must lie in 0..{n_cells - 1}")
    if np.isnan(scores).any():
        raise InvalidInputError("certainty values must not be NaN")
    order = np.lexsort((np.arange(len(scores)), ~correct, scores))
    out = []
    for j in range(n_cells):
        sel = order[cells[order] == j]
        if sel.size == 0:
            out.append(_empty_profile(j))
            continue
        s, ok = scores[sel], correct[sel]
        err = ~ok
        errors_before = np.cumsum(err) - err
        thr = s[ok]
        tr = errors_before[ok]
        fr = np.searchsorted(thr, thr, side="left")
        n_l, n_e = int(ok.sum()), int(err.sum())
        if err[-1]:
            thr = np.append(thr, inf)
            tr = np.append(tr, n_e)
            fr = np.append(fr, n_l)
        out.append(CellRejectProfile(j, thr, tr.astype(np.int64), fr.astype(np.int64), n_l, n_e))
    return out


def global_profile(scores, correct) -> CellRejectProfile:
    scores = np.asarray(scores, dtype=float)
    return build_profiles(scores, correct, np.zeros(len(scores), dtype=int), 1)[0]


def global_front(profile: CellRejectProfile, n_cells: int = 1) -> ThresholdFront:
    """Pseudo-Pareto front of a single global threshold, repeated over ``n_cells`` cells."""
    fr, first = np.unique(profile.false_rejects, return_index=True)
    thr = profile.thresholds[first]
    return ThresholdFront(fr, profile.true_rejects[first], np.repeat(thr[:, None], n_cells, axis=1), "pseudo")


def _drop_dominated(n, t, theta, kind):
    """Remove rows whose ``t`` is below that of a row with fewer false rejects.

    Only needed when correct points share certainty values: some counts
    ``n`` can then only be hit with fewer true rejects than a smaller count.
    """
    keep = t >= np.maximum.accumulate(t)
    return ThresholdFront(n[keep], t[keep], theta[keep], kind)


def dp_local_front(profiles: list[CellRejectProfile]) -> ThresholdFront:
    """Exact pseudo-Pareto front of per-cell thresholds.

    ``opt[n]`` after processing cells ``0..j`` is the largest number of true
    rejects with exactly ``n`` false rejects when cells after ``j`` keep
    their first threshold.  ``choice[n, j]`` stores the threshold index of
    cell ``j`` realising it; where several indices tie, the largest wins,
    which is the order in which back-tracing tries them.
    """
    xi = len(profiles)
    n_max = int(sum(int(p.false_rejects[-1]) for p in profiles))
    opt = np.full(n_max + 1, _NEG, dtype=np.int64)
    opt[0] = sum(int(p.true_rejects[0]) for p in profiles)
    choice = np.zeros((n_max + 1, xi), dtype=np.int32)
    for j, p in enumerate(profiles):
        cur = opt.copy()
        col = choice[:, j]
        base = int(p.true_rejects[0])
        for i in range(1, len(p)):
            shift = int(p.false_rejects[i])
            src = opt[: n_max + 1 - shift]
            cand = src + (int(p.true_rejects[i]) - base)
            upd = (src > _NEG // 2) & (cand >= cur[shift:])
            cur[shift:][upd] = cand[upd]
            col[shift:][upd] = i
        opt = cur
    ns = np.flatnonzero(opt > _NEG // 2)
    theta = np.empty((len(ns), xi))
    rest = ns.copy()
    for j in range(xi - 1, -1, -1):
        idx = choice[rest, j]
        theta[:, j] = profiles[j].thresholds[idx]
        rest = rest - profiles[j].false_rejects[idx]
    assert not rest.any(), "back-tracing did not consume all false rejects"
    return _drop_dominated(ns, opt[ns], theta, "pseudo")


def greedy_local_front(profiles: list[CellRejectProfile]) -> ThresholdFront:
    """Greedy threshold increase, one row per round (the number of false rejects may skip).

    Each round compares the best single-cell step ("local gain") against
    putting all ``n + 1`` false rejects into one cell with the others reset
    ("global gain").  Ties between local steps are resolved by looking
    further ahead until one cell is strictly best, capped at the largest
    remaining index; a tie surviving the cap goes to the smallest cell.
    Infeasible indices have gain ``-inf``.  Equal local and global gains
    keep the local step.
    """
    xi = len(profiles)
    tr = [p.true_rejects.tolist() for p in profiles]
    fr = [p.false_rejects.tolist() for p in profiles]
    size = [len(p) for p in profiles]
    total_errors = sum(p.n_errors for p in profiles)
    idx = [0] * xi
    h = sum(t[0] for t in tr)
    rejected = h
    n = 0

    def step(j, o):
        k = idx[j] + o
        return tr[j][k] - tr[j][idx[j]] if k < size[j] else -inf

    rows = []

    def record():
        rows.append((sum(fr[j][idx[j]] for j in range(xi)), rejected, [profiles[j].thresholds[idx[j]] for j in range(xi)]))

    record()
    while rejected != total_errors:
        local = [step(j, 1) for j in range(xi)]
        gain = max(local)
        best = [j for j in range(xi) if local[j] == gain]
        whole = [tr[j][n + 1] - tr[j][0] if n + 1 < size[j] else -inf for j in range(xi)]
        GAIN = max(whole)
        if GAIN == -inf and gain == -inf:
            raise RuntimeError("greedy search stalled before rejecting all errors")
        if GAIN > gain + rejected - h:
            idx = [0] * xi
            idx[whole.index(GAIN)] = n + 1
            rejected = GAIN + h
            n += 1
        elif len(best) == 1:
            idx[best[0]] += 1
            rejected += gain
            n += 1
        else:
            o = 1
            reach = max(size[j] - 1 - idx[j] for j in range(xi))
            while len(best) > 1 and o < reach:
                o += 1
                ahead = [step(j, o) for j in range(xi)]
                gain = max(ahead)
                best = [j for j in range(xi) if ahead[j] == gain]
            idx[best[0]] += o
            rejected += gain
            n += o
        record()
    # with tied correct points two rounds can share a false-reject count; keep the later one
    keep = [k for k in range(len(rows)) if k + 1 == len(rows) or rows[k + 1][0] != rows[k][0]]
    rows = [rows[k] for k in keep]
    return ThresholdFront(
        np.array([r[0] for r in rows], dtype=np.int64),
        np.array([r[1] for r in rows], dtype=np.int64),
        np.array([r[2] for r in rows], dtype=float).reshape(len(rows), xi),
        "greedy",
    )


def brute_force_front(profiles: list[CellRejectProfile], cap: int = DEFAULT_ORACLE_CAP) -> ThresholdFront:
    """Enumerate every combination of per-cell thresholds; keep the best per false-reject count."""
    sizes = [len(p) for p in profiles]
    total = prod(sizes)
    if total > cap:
        raise OracleCapExceeded(f"{total} threshold combinations exceed the cap of {cap}")
    n = np.zeros(1, dtype=np.int64)
    t = np.zeros(1, dtype=np.int64)
    for p in profiles:
        n = (n[:, None] + p.false_rejects[None, :]).ravel()
        t = (t[:, None] + p.true_rejects[None, :]).ravel()
    order = np.lexsort((-t, n))
    ns, first = np.unique(n[order], return_index=True)
    flat = order[first]
    combo = np.unravel_index(flat, sizes)
    theta = np.column_stack([p.thresholds[c] for p, c in zip(profiles, combo)]).reshape(len(ns), len(profiles))
    return _drop_dominated(ns, t[flat], theta, "pseudo")


def weakly_dominates(a: ThresholdFront, b: ThresholdFront) -> bool:
    """True if every ``(n, t)`` of ``b`` is matched by some ``(n', t')`` of ``a`` with ``n' <= n`` and ``t' >= t``."""
    if len(b) == 0:
        return True
    if len(a) == 0:
        return False
    order = np.argsort(a.n, kind="stable")
    best = np.maximum.accumulate(a.t[order])
    pos = np.searchsorted(a.n[order], b.n, side="right") - 1
    ok = pos >= 0
    return bool(ok.all() and np.all(best[pos] >= b.t))


def reject_mask(scores, cells, thresholds) -> np.ndarray:
    scores = np.asarray(scores, dtype=float)
    cells = np.asarray(cells, dtype=int)
    thresholds = np.asarray(thresholds, dtype=float)
    if cells.size and cells.max() >= len(thresholds):
        raise InvalidInputError("need one threshold per cell")
    return scores < thresholds[cells]


def apply_thresholds(scores, cells, thresholds):
    """Indices of rejected and of accepted points."""
    mask = reject_mask(scores, cells, thresholds)
    return np.flatnonzero(mask), np.flatnonzero(~mask)


def count_rejects(scores, correct, cells, thresholds) -> tuple[int, int]:
    """``(false rejects, true rejects)`` caused by a threshold vector."""
    mask = reject_mask(scores, cells, thresholds)
    correct = np.asarray(correct, dtype=bool)
    return int(np.sum(mask & correct)), int(np.sum(mask & ~correct))


def optimise(kind: str, scores, correct, cells, n_cells: int) -> ThresholdFront:
    """Front of the requested reject strategy (``global``, ``local-dp`` or ``local-greedy``)."""
    if kind == "global":
        return global_front(global_profile(scores, correct), n_cells)
    profiles = build_profiles(scores, correct, cells, n_cells)
    if kind == "local-dp":
        return dp_local_front(profiles)
    if kind == "local-greedy":
        return greedy_local_front(profiles)
    raise InvalidInputError(f"unknown reject strategy {kind!r}")


REJECT_KINDS = ("global", "local-dp", "local-greedy")
