import numpy as np
import pytest

from protoreject.classifiers import TrainConfig
from protoreject.core import InvalidInputError, LabeledDataset
from protoreject.datagen import SyntheticSpec, generate
from protoreject.evaluation import (
    ARCCurve,
    arc_from_front,
    arc_on_data,
    average_arcs,
    cross_validate,
    pareto_extract,
    stratified_folds,
)
from protoreject.fixtures import random_instance, table_instance
from protoreject.reject import ThresholdFront, build_profiles, dp_local_front, global_front, global_profile


def front(pairs):
    n, t = np.array(pairs).T
    return ThresholdFront(n, t, np.zeros((len(n), 1)))


class TestArc:
    def test_substitution(self):
        c = arc_from_front(front([(0, 6)]), 90, 10, 100)
        assert c.t_c.tolist() == [1.0, 0.94]
        assert c.t_a[1] == pytest.approx(90 / 94)
        assert c.t_a[0] == pytest.approx(0.9)

    def test_total_reject_dropped(self):
        c = arc_from_front(front([(0, 0), (90, 10)]), 90, 10)
        assert c.t_c.tolist() == [1.0]

    def test_inconsistent_counts(self):
        with pytest.raises(InvalidInputError):
            arc_from_front(front([(0, 0)]), 90, 10, 99)

    def test_consistent_with_direct_counting(self, rng):
        s, ok, c = random_instance(rng, 40, 3, 0.3)
        dp = dp_local_front(build_profiles(s, ok, c, 3))
        a = arc_from_front(dp, int(ok.sum()), int((~ok).sum()))
        b = arc_on_data(dp, s, ok, c)
        assert np.allclose(a.t_c, b.t_c) and np.allclose(a.t_a, b.t_a)
        assert np.all(np.diff(a.t_c) < 0)

    def test_local_dominates_global_on_training_data(self, rng):
        for _ in range(20):
            s, ok, c = random_instance(rng, 40, 4)
            dp = arc_from_front(dp_local_front(build_profiles(s, ok, c, 4)), int(ok.sum()), int((~ok).sum()))
            gl = arc_from_front(global_front(global_profile(s, ok), 4), int(ok.sum()), int((~ok).sum()))
            for tc, ta in zip(gl.t_c, gl.t_a):
                hit = np.isclose(dp.t_c, tc)
                if hit.any():
                    assert dp.t_a[hit][0] >= ta - 1e-12


class TestPareto:
    def test_increasing_kept(self):
        assert pareto_extract(front([(0, 6), (1, 7), (2, 15)])).pairs() == [(0, 6), (1, 7), (2, 15)]

    def test_dominated_removed(self):
        assert pareto_extract(front([(2, 15), (3, 15)])).pairs() == [(2, 15)]

    def test_table_front_unchanged(self):
        s, ok, c = table_instance()
        dp = dp_local_front(build_profiles(s, ok, c, 3))
        p = pareto_extract(dp)
        assert p.pairs() == dp.pairs() and p.kind == "pareto"


class TestAverage:
    def test_identical_curves(self):
        c = ARCCurve(np.array([1.0, 0.9, 0.5]), np.array([0.8, 0.85, 0.95]))
        avg = average_arcs([c] * 100)
        assert avg.at(1.0) == pytest.approx(0.8)
        assert avg.at(0.95) == pytest.approx(0.85)
        assert avg.at(0.9) == pytest.approx(0.85)
        assert avg.at(0.89) == pytest.approx(0.95)
        assert avg.at(0.5) == pytest.approx(0.95)
        assert avg.at(0.49) is None

    def test_support_rule(self):
        long = ARCCurve(np.array([1.0, 0.1]), np.array([0.8, 0.9]))
        short = ARCCurve(np.array([1.0, 0.5]), np.array([0.8, 0.9]))
        avg = average_arcs([long] * 79 + [short] * 21)
        assert avg.at(0.5) is not None and avg.support[np.isclose(avg.t_c, 0.5)][0] == 100
        assert avg.at(0.1) is None
        avg = average_arcs([long] * 80 + [short] * 20)
        assert avg.at(0.1) is not None

    def test_mean(self):
        a = ARCCurve(np.array([1.0]), np.array([0.9]))
        b = ARCCurve(np.array([1.0]), np.array([0.7]))
        assert average_arcs([a, b], min_support=1).at(1.0) == pytest.approx(0.8)

    def test_within_envelope(self, rng):
        curves = []
        for _ in range(30):
            tc = np.concatenate([[1.0], np.sort(rng.uniform(0.2, 0.99, 8))[::-1]])
            curves.append(ARCCurve(tc, rng.uniform(0.5, 1.0, 9)))
        avg = average_arcs(curves, min_support=25)
        lo = min(c.t_a.min() for c in curves)
        hi = max(c.t_a.max() for c in curves)
        assert np.all((avg.t_a >= lo) & (avg.t_a <= hi))
        assert np.all(avg.support >= 25)

    def test_empty(self):
        with pytest.raises(InvalidInputError):
            average_arcs([])


@pytest.fixture(scope="module")
def small():
    return generate(SyntheticSpec("pearl-necklace", points_per_cluster=40, seed=1))


class TestCrossValidation:
    def test_folds_are_stratified_and_deterministic(self):
        labels = np.repeat([1, 2, 3], [30, 20, 11])
        a = stratified_folds(labels, 10, np.random.default_rng([0, 0]))
        b = stratified_folds(labels, 10, np.random.default_rng([0, 0]))
        assert np.array_equal(a, b)
        for k in (1, 2, 3):
            counts = np.bincount(a[labels == k], minlength=10)
            assert counts.max() - counts.min() <= 1

    def test_run_count_and_provenance(self, small):
        data, _ = small
        out = cross_validate(data, "glvq", "relsim", ("global", "local-greedy"), folds=5, repeats=2,
                             config=TrainConfig(epochs=3))
        assert set(out) == {"global", "local-greedy"}
        assert all(len(v) == 10 for v in out.values())
        for curve in out["global"]:
            assert curve.t_c[0] == 1.0 and np.all(np.diff(curve.t_c) < 0)

    def test_deterministic(self, small):
        data, _ = small
        kw = dict(folds=3, repeats=1, seed=5, config=TrainConfig(epochs=2))
        a = cross_validate(data, "gmlvq", "relsim", "local-dp", **kw)["local-dp"]
        b = cross_validate(data, "gmlvq", "relsim", "local-dp", **kw)["local-dp"]
        assert all(np.array_equal(x.t_a, y.t_a) for x, y in zip(a, b))

    def test_bayes_measure(self, small):
        data, truth = small
        out = cross_validate(data, "gmlvq", "bayes", "global", folds=3, repeats=1, truth=truth)
        assert list(out) == ["bayes"] and len(out["bayes"]) == 3

    def test_errors(self, small):
        data, truth = small
        with pytest.raises(InvalidInputError):
            cross_validate(data, folds=1)
        with pytest.raises(InvalidInputError):
            cross_validate(data, folds=41)
        with pytest.raises(InvalidInputError):
            cross_validate(data, "gmlvq", "conf")
        with pytest.raises(InvalidInputError):
            cross_validate(data, "gmlvq", "bayes")
        with pytest.raises(InvalidInputError):
            cross_validate(data, "gmlvq", "bayes", "local-dp", truth=truth)
        with pytest.raises(InvalidInputError):
            cross_validate(data, "gmlvq", "relsim", "local-bf")

    def test_parallel_matches_serial(self, small):
        data, _ = small
        kw = dict(folds=2, repeats=1, config=TrainConfig(epochs=2))
        a = cross_validate(data, "rslvq", "conf", "global", **kw)["global"]
        b = cross_validate(data, "rslvq", "conf", "global", n_jobs=2, **kw)["global"]
        assert all(np.array_equal(x.t_a, y.t_a) for x, y in zip(a, b))

    def test_small_class_rejected(self):
        data = LabeledDataset(np.arange(12.0)[:, None], [1] * 9 + [2] * 3)
        with pytest.raises(InvalidInputError):
            cross_validate(data, "glvq", folds=4)
