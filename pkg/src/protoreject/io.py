"""Plain-text file formats: datasets, models, mixtures, fronts, scores and ARCs.

Dataset CSV
    Header ``f1,...,fM,label``; an empty feature field is a missing value;
    labels are positive integers.
Model file
    ``key value...`` lines (``dim``, ``n_prototypes``, ``n_classes``,
    ``metric``, ``labels``, optional ``sigma`` and ``priors``), then one
    ``prototype`` line per prototype and, for matrix metrics, one ``omega``
    line per factor matrix (row-major, global: one line, local: one per
    prototype, preceded by ``omega_rows``).  Numbers use 17 significant
    digits so a round trip is exact.
Mixture sidecar
    Same ``key value...`` style: ``dim``, ``n_classes``, one ``component
    label prior mean... std...`` line per Gaussian and optional ``noise
    mass rule low... high...``.
"""

from __future__ import annotations

import csv
import os
from pathlib import Path

import numpy as np

from .certainty import GenerativeMixture
from .core import InvalidInputError, LabeledDataset, PrototypeModel
from .evaluation import ARCCurve, AveragedARC
from .reject import ThresholdFront


def _num(v: float) -> str:
    if np.isnan(v):
        return ""
    if np.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(float(v), ".17g")


def _nums(values) -> str:
    return " ".join(format(float(v), ".17g") for v in np.ravel(values))


def _write_text(path, text: str, force: bool = True):
    path = Path(path)
    if path.exists() and not force:
        raise FileExistsError(f"{path} exists (use --force to overwrite)")
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# datasets


def write_dataset(path, data: LabeledDataset, force: bool = True) -> None:
    lines = [",".join([f"f{m + 1}" for m in range(data.dim)] + ["label"])]
    for x, y in zip(data.points, data.labels):
        lines.append(",".join([_num(v) for v in x] + [str(int(y))]))
    _write_text(path, "\n".join(lines) + "\n", force)


def read_dataset(path) -> LabeledDataset:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise InvalidInputError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if not header or header[-1] != "label":
        raise InvalidInputError(f"{path}: last column must be 'label'")
    M = len(header) - 1
    X = np.empty((len(rows) - 1, M))
    y = np.empty(len(rows) - 1, dtype=int)
    for i, row in enumerate(rows[1:]):
        if len(row) != M + 1:
            raise InvalidInputError(f"{path}:{i + 2}: expected {M + 1} fields, got {len(row)}")
        try:
            X[i] = [float(v) if v.strip() else np.nan for v in row[:M]]
            y[i] = int(row[M])
        except ValueError as exc:
            raise InvalidInputError(f"{path}:{i + 2}: {exc}") from None
    return LabeledDataset(X, y)


def write_scores(path, data: LabeledDataset, scores, predicted, cells, force: bool = True) -> None:
    """Dataset columns followed by ``score,predicted,cell`` (cells 1-based)."""
    lines = [",".join([f"f{m + 1}" for m in range(data.dim)] + ["label", "score", "predicted", "cell"])]
    for x, y, s, p, c in zip(data.points, data.labels, scores, predicted, cells):
        lines.append(",".join([_num(v) for v in x] + [str(int(y)), _num(s), str(int(p)), str(int(c) + 1)]))
    _write_text(path, "\n".join(lines) + "\n", force)


# ---------------------------------------------------------------------------
# models


def write_model(path, model: PrototypeModel, force: bool = True) -> None:
    out = [
        f"dim {model.dim}",
        f"n_prototypes {model.n_prototypes}",
        f"n_classes {model.n_classes}",
        f"metric {model.metric}",
        "labels " + " ".join(str(int(c)) for c in model.proto_labels),
    ]
    if model.is_probabilistic:
        out.append("sigma " + _nums(model.sigma))
        out.append("priors " + _nums(model.priors))
    out += ["prototype " + _nums(w) for w in model.prototypes]
    if model.metric != "euclidean":
        factors = model.omega[None] if model.metric == "global" else model.omega
        out.append(f"omega_rows {factors.shape[1]}")
        out += ["omega " + _nums(o) for o in factors]
    _write_text(path, "\n".join(out) + "\n", force)


def _parse_kv(path):
    entries = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, *vals = line.split()
        entries.append((lineno, key, vals))
    return entries


def read_model(path) -> PrototypeModel:
    head, protos, omegas = {}, [], []
    try:
        for _, key, vals in _parse_kv(path):
            if key == "prototype":
                protos.append([float(v) for v in vals])
            elif key == "omega":
                omegas.append([float(v) for v in vals])
            else:
                head[key] = vals
        M = int(head["dim"][0])
        metric = head["metric"][0]
        labels = [int(v) for v in head["labels"]]
        W = np.array(protos).reshape(int(head["n_prototypes"][0]), M)
        omega = None
        if metric != "euclidean":
            R = int(head["omega_rows"][0])
            omega = np.array(omegas).reshape(len(omegas), R, M)
            if metric == "global":
                omega = omega[0]
        sigma = priors = None
        if "sigma" in head:
            sigma = [float(v) for v in head["sigma"]]
            priors = [float(v) for v in head["priors"]]
        return PrototypeModel(W, labels, metric, omega, sigma, priors, int(head["n_classes"][0]))
    except (KeyError, ValueError, IndexError) as exc:
        raise InvalidInputError(f"{path}: malformed model file ({exc})") from None


# ---------------------------------------------------------------------------
# mixtures


def mixture_path(dataset_path) -> Path:
    p = Path(dataset_path)
    return p.with_name(p.stem + ".mixture.txt")


def write_mixture(path, mix: GenerativeMixture, force: bool = True) -> None:
    out = [f"dim {mix.dim}", f"n_classes {mix.n_classes}"]
    for k in range(len(mix.priors)):
        out.append(f"component {int(mix.labels[k])} " + _nums([mix.priors[k], *mix.means[k], *mix.stds[k]]))
    if mix.noise_mass > 0:
        out.append(f"noise {_nums([mix.noise_mass])} {mix.noise_rule} " + _nums([*mix.noise_low, *mix.noise_high]))
    _write_text(path, "\n".join(out) + "\n", force)


def read_mixture(path) -> GenerativeMixture:
    try:
        head, comps, noise = {}, [], None
        for _, key, vals in _parse_kv(path):
            if key == "component":
                comps.append((int(vals[0]), [float(v) for v in vals[1:]]))
            elif key == "noise":
                noise = vals
            else:
                head[key] = vals
        M = int(head["dim"][0])
        labels = [c[0] for c in comps]
        nums = np.array([c[1] for c in comps]).reshape(len(comps), 1 + 2 * M)
        kwargs = {}
        if noise is not None:
            box = np.array([float(v) for v in noise[2:]])
            kwargs = dict(noise_mass=float(noise[0]), noise_rule=noise[1], noise_low=box[:M], noise_high=box[M:])
        return GenerativeMixture(nums[:, 1:1 + M], nums[:, 1 + M:], nums[:, 0], labels,
                                 int(head["n_classes"][0]), **kwargs)
    except (KeyError, ValueError, IndexError) as exc:
        raise InvalidInputError(f"{path}: malformed mixture file ({exc})") from None


# ---------------------------------------------------------------------------
# fronts and curves


def write_front(path, front: ThresholdFront, force: bool = True) -> None:
    xi = front.thresholds.shape[1]
    lines = [",".join(["n_false", "n_true"] + [f"theta_{j + 1}" for j in range(xi)])]
    for n, t, theta in front:
        lines.append(",".join([str(n), str(t)] + [_num(v) for v in theta]))
    _write_text(path, "\n".join(lines) + "\n", force)


def read_front(path, kind: str = "pseudo") -> ThresholdFront:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    body = rows[1:]
    n = np.array([int(r[0]) for r in body], dtype=np.int64)
    t = np.array([int(r[1]) for r in body], dtype=np.int64)
    theta = np.array([[float(v) for v in r[2:]] for r in body]).reshape(len(body), len(rows[0]) - 2)
    return ThresholdFront(n, t, theta, kind)


def write_arc(path, curves, force: bool = True) -> None:
    """One CSV for one or several curves; raw curves get an empty support column."""
    if isinstance(curves, (ARCCurve, AveragedARC)):
        curves = [curves]
    lines = ["t_c,t_a,support,provenance"]
    for c in curves:
        support = getattr(c, "support", None)
        for k in range(len(c.t_c)):
            s = "" if support is None else str(int(support[k]))
            lines.append(f"{_num(c.t_c[k])},{_num(c.t_a[k])},{s},{c.provenance}")
    _write_text(path, "\n".join(lines) + "\n", force)


def read_arc(path) -> list[AveragedARC]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    groups: dict[str, list] = {}
    for r in rows:
        groups.setdefault(r["provenance"], []).append(r)
    out = []
    for prov, rs in groups.items():
        out.append(AveragedARC(
            np.array([float(r["t_c"]) for r in rs]),
            np.array([float(r["t_a"]) for r in rs]),
            np.array([int(r["support"]) if r["support"] else 0 for r in rs]),
            prov,
        ))
    return out
