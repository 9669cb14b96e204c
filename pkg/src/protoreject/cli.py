"""Command line: ``protoreject {gen,train,score,front,arc,verify}``.

Exit codes: 0 success, 2 usage error, 3 invalid input, 4 runtime failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import io
from .certainty import score
from .classifiers import MODEL_KINDS, TrainConfig, train
from .core import InvalidInputError
from .datagen import KINDS, SyntheticSpec, generate
from .evaluation import average_arcs, check_compatibility, cross_validate
from .fixtures import TABLE_GREEDY_TRACE, random_instance, table_instance
from .plot import arc_svg
from .reject import (
    REJECT_KINDS,
    brute_force_front,
    build_profiles,
    count_rejects,
    dp_local_front,
    global_front,
    global_profile,
    greedy_local_front,
    optimise,
    weakly_dominates,
)

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_RUNTIME = 0, 2, 3, 4


def _reject_list(text: str) -> tuple[str, ...]:
    kinds = tuple(k.strip() for k in text.split(",") if k.strip())
    bad = [k for k in kinds if k not in REJECT_KINDS]
    if not kinds or bad:
        raise argparse.ArgumentTypeError(f"choose from {', '.join(REJECT_KINDS)} (comma separated)")
    return kinds


def _add_train_flags(p):
    p.add_argument("--model", choices=MODEL_KINDS, default="gmlvq")
    p.add_argument("--epochs", type=int, default=TrainConfig.epochs)
    p.add_argument("--lr", type=float, default=TrainConfig.lr_prototypes, help="prototype learning rate")
    p.add_argument("--lr-metric", type=float, default=TrainConfig.lr_metric)
    p.add_argument("--sigma", type=float, default=TrainConfig.sigma,
                   help="RSLVQ bandwidth, in units of the standardised data")
    p.add_argument("--prototypes", type=int, default=TrainConfig.prototypes_per_class,
                   help="prototypes per class")
    p.add_argument("--seed", type=int, default=0)


def _config(args) -> TrainConfig:
    return TrainConfig(
        prototypes_per_class=args.prototypes,
        epochs=args.epochs,
        lr_prototypes=args.lr,
        lr_metric=args.lr_metric,
        sigma=args.sigma,
        seed=args.seed,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="protoreject", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic dataset and its mixture sidecar")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--points", type=int, default=SyntheticSpec.points_per_cluster, help="points per cluster")
    p.add_argument("--noise", type=float, default=SyntheticSpec.noise_fraction)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--force", action="store_true")

    p = sub.add_parser("train", help="train a prototype model on a dataset CSV")
    p.add_argument("--data", type=Path, required=True)
    _add_train_flags(p)
    p.add_argument("--out", type=Path, default=Path("model.txt"))

    p = sub.add_parser("score", help="certainty values of a trained model")
    p.add_argument("--data", type=Path, required=True)
    p.add_argument("--model-file", type=Path, required=True)
    p.add_argument("--measure", choices=("relsim", "conf"), default="relsim")
    p.add_argument("--out", type=Path, default=Path("scores.csv"))

    p = sub.add_parser("front", help="threshold fronts of a trained model on a dataset")
    p.add_argument("--data", type=Path, required=True)
    p.add_argument("--model-file", type=Path, required=True)
    p.add_argument("--measure", choices=("relsim", "conf"), default="relsim")
    p.add_argument("--reject", type=_reject_list, default=("local-dp",))
    p.add_argument("--out", type=Path, default=Path("."))

    p = sub.add_parser("arc", help="cross-validated, averaged accuracy-reject curves")
    p.add_argument("--data", type=Path, required=True)
    _add_train_flags(p)
    p.add_argument("--measure", choices=("relsim", "conf", "bayes"), default="relsim")
    p.add_argument("--reject", type=_reject_list, default=("global",))
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--min-support", type=int, default=80)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", type=Path, default=Path("arc"))
    p.add_argument("--no-plot", action="store_true")

    p = sub.add_parser("verify", help="compare the DP against the exhaustive oracle")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--max-cells", type=int, default=4)
    p.add_argument("--max-points", type=int, default=40)
    p.add_argument("--seed", type=int, default=0)
    return parser


# ---------------------------------------------------------------------------


def cmd_gen(args) -> int:
    spec = SyntheticSpec(args.kind, args.points, args.noise, args.seed)
    out = args.out or Path(f"{args.kind}.csv")
    side = io.mixture_path(out)
    if not args.force:
        for f in (out, side):
            if f.exists():
                raise FileExistsError(f"{f} exists (use --force to overwrite)")
    data, truth = generate(spec)
    io.write_dataset(out, data)
    io.write_mixture(side, truth)
    print(f"wrote {len(data)} points to {out} and the mixture to {side}")
    return EXIT_OK


def cmd_train(args) -> int:
    config = _config(args)
    data = io.read_dataset(args.data)
    t0 = time.perf_counter()
    model, report = train(args.model, data, config)
    io.write_model(args.out, model)
    print(f"model={args.model} prototypes={model.n_prototypes} "
          f"train_accuracy={report.final_train_accuracy:.4f} seconds={time.perf_counter() - t0:.2f}")
    print(f"wrote {args.out}")
    return EXIT_OK


def _scored(args):
    data = io.read_dataset(args.data)
    model = io.read_model(args.model_file)
    if args.measure == "conf" and not model.is_probabilistic:
        raise InvalidInputError("the conf measure needs an rslvq model")
    s, pred, cells = score(args.measure, data.points, model)
    return data, model, s, pred, cells


def cmd_score(args) -> int:
    data, _, s, pred, cells = _scored(args)
    io.write_scores(args.out, data, s, pred, cells)
    print(f"accuracy={np.mean(pred == data.labels):.4f}; wrote {args.out}")
    return EXIT_OK


def cmd_front(args) -> int:
    data, model, s, pred, cells = _scored(args)
    args.out.mkdir(parents=True, exist_ok=True)
    for kind in args.reject:
        front = optimise(kind, s, pred == data.labels, cells, model.n_prototypes)
        path = args.out / f"front-{kind}.csv"
        io.write_front(path, front)
        print(f"{kind}: {len(front)} entries; wrote {path}")
    return EXIT_OK


def cmd_arc(args) -> int:
    truth = None
    if args.measure == "bayes":
        side = io.mixture_path(args.data)
        if not side.exists():
            raise InvalidInputError(f"the bayes measure needs the mixture sidecar {side}")
        truth = io.read_mixture(side)
    check_compatibility(args.model, args.measure, args.reject, truth)
    config = _config(args)
    data = io.read_dataset(args.data)
    curves = cross_validate(data, args.model, args.measure, args.reject, args.folds, args.repeats,
                            args.seed, config, truth, n_jobs=args.jobs)
    args.out.mkdir(parents=True, exist_ok=True)
    averaged = []
    for prov, runs in curves.items():
        avg = average_arcs(runs, args.step, args.min_support)
        averaged.append(avg)
        path = args.out / f"arc-{prov}.csv"
        io.write_arc(path, avg)
        print(f"{prov}: {len(runs)} runs, {len(avg.t_c)} grid points; wrote {path}")
    if not args.no_plot:
        path = args.out / "arc.svg"
        path.write_text(arc_svg(averaged, f"{args.data.stem}: {args.model} + {args.measure}"), encoding="utf-8")
        print(f"wrote {path}")
    return EXIT_OK


def verify_report(trials=200, max_cells=4, max_points=40, seed=0) -> list[tuple[str, bool, str]]:
    """Run the oracle-equivalence checks; returns ``(check, passed, detail)`` rows."""
    rows = []
    scores, correct, cells = table_instance()
    prof = build_profiles(scores, correct, cells, 3)
    greedy = greedy_local_front(prof).pairs()
    rows.append(("example: greedy trace", greedy == TABLE_GREEDY_TRACE, str(greedy)))
    dp = dp_local_front(prof)
    rows.append(("example: DP t at n=3 is 25", dp.t_at(3) == 25, str(dp.t_at(3))))
    rows.append(("example: DP t at n=6 is 31 > greedy 30", dp.t_at(6) == 31, str(dp.t_at(6))))

    rng = np.random.default_rng(seed)
    failures = []
    for trial in range(trials):
        xi = int(rng.integers(1, max_cells + 1))
        n_pts = int(rng.integers(1, max_points + 1))
        s, ok, c = random_instance(rng, n_pts, xi)
        prof = build_profiles(s, ok, c, xi)
        dp = dp_local_front(prof)
        oracle = brute_force_front(prof)
        gl = global_front(global_profile(s, ok), xi)
        gr = greedy_local_front(prof)
        problems = []
        if dp.pairs() != oracle.pairs():
            problems.append("dp != oracle")
        if not weakly_dominates(dp, gr):
            problems.append("greedy above dp")
        if not weakly_dominates(dp, gl):
            problems.append("global not dominated by dp")
        if np.any(np.diff(dp.t) < 0):
            problems.append("dp not monotone")
        for front in (dp, gr, gl):
            for n, t, theta in front:
                if count_rejects(s, ok, c, theta) != (n, t):
                    problems.append(f"{front.kind} threshold vector does not reproduce ({n}, {t})")
                    break
        if problems:
            failures.append(f"trial {trial}: {', '.join(problems)}")
    rows.append((f"{trials} random instances", not failures, "; ".join(failures[:5]) or "all agree"))
    return rows


def cmd_verify(args) -> int:
    rows = verify_report(args.trials, args.max_cells, args.max_points, args.seed)
    for name, ok, detail in rows:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return EXIT_OK if all(ok for _, ok, _ in rows) else EXIT_RUNTIME


COMMANDS = {"gen": cmd_gen, "train": cmd_train, "score": cmd_score, "front": cmd_front,
            "arc": cmd_arc, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (InvalidInputError, FileExistsError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001 - report, do not dump a traceback
        print(f"runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
