"""Prototype classifiers with optimal global and per-cell reject thresholds."""

from .certainty import GenerativeMixture, bayes_certainty, conf, relsim, score
from .classifiers import TrainConfig, TrainReport, train, train_glvq, train_gmlvq, train_lgmlvq, train_rslvq
from .core import InvalidInputError, LabeledDataset, PrototypeModel, classify, distance, voronoi_partition
from .datagen import SyntheticSpec, generate, gen_gaussian_clusters, gen_pearl_necklace
from .evaluation import ARCCurve, AveragedARC, arc_from_front, arc_on_data, average_arcs, cross_validate, pareto_extract
from .reject import (
    CellRejectProfile,
    OracleCapExceeded,
    ThresholdFront,
    apply_thresholds,
    brute_force_front,
    build_profiles,
    dp_local_front,
    global_front,
    global_profile,
    greedy_local_front,
    optimise,
)

__version__ = "0.1.0"
