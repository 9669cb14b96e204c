import numpy as np
import pytest

from protoreject.classifiers import (
    TrainConfig,
    glvq_cost,
    glvq_gradient,
    posterior,
    relative_differences,
    rslvq_gradient,
    rslvq_loglik,
    train,
    train_gmlvq,
    train_lgmlvq,
    train_rslvq,
)
from protoreject.core import InvalidInputError, LabeledDataset, PrototypeModel, predict
from protoreject.datagen import SyntheticSpec, generate

H = 1e-6


def rel_err(a, b):
    a, b = np.ravel(a), np.ravel(b)
    return np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-8)


def random_setup(seed, metric, missing=False):
    rng = np.random.default_rng(seed)
    M, Z, ppc, N = 3, 3, 2, 12
    X = rng.normal(size=(N, M))
    if missing:
        X[rng.random(X.shape) < 0.15] = np.nan
        X[:, 0] = np.where(np.all(np.isnan(X), axis=1), 0.5, X[:, 0])
    y = rng.integers(1, Z + 1, size=N)
    W = rng.normal(size=(Z * ppc, M))
    c = np.repeat(np.arange(1, Z + 1), ppc)
    omega = {"euclidean": None, "global": rng.normal(size=(M, M)),
             "local": rng.normal(size=(Z * ppc, M, M))}[metric]
    return LabeledDataset(X, y, Z), W, c, omega


def numeric_grad(f, arr):
    g = np.zeros_like(arr)
    for idx in np.ndindex(arr.shape):
        up, dn = arr.copy(), arr.copy()
        up[idx] += H
        dn[idx] -= H
        g[idx] = (f(up) - f(dn)) / (2 * H)
    return g


@pytest.mark.parametrize("seed", range(24))
def test_glvq_gradient_matches_finite_differences(seed):
    metric = ["euclidean", "global", "local"][seed % 3]
    phi = "logistic" if seed % 2 else "identity"
    data, W, c, omega = random_setup(seed, metric, missing=seed % 4 == 0)
    model = PrototypeModel(W, c, metric, omega, n_classes=3)
    cost, gW, gO = glvq_gradient(model, data, phi)
    assert cost == pytest.approx(glvq_cost(model, data, phi), rel=1e-12, abs=1e-12)
    fW = numeric_grad(lambda w: glvq_cost(PrototypeModel(w, c, metric, omega, n_classes=3), data, phi), W)
    assert rel_err(gW, fW) < 1e-5
    if omega is not None:
        fO = numeric_grad(lambda o: glvq_cost(PrototypeModel(W, c, metric, o, n_classes=3), data, phi), omega)
        assert rel_err(gO, fO) < 1e-5


@pytest.mark.parametrize("seed", range(20))
def test_rslvq_gradient_matches_finite_differences(seed):
    data, W, c, _ = random_setup(100 + seed, "euclidean", missing=seed % 4 == 0)
    rng = np.random.default_rng(seed)
    sigma = rng.uniform(0.5, 2.0, size=len(W))
    priors = rng.dirichlet(np.ones(len(W)))
    model = PrototypeModel(W, c, sigma=sigma, priors=priors, n_classes=3)
    total, gW = rslvq_gradient(model, data)
    assert total == pytest.approx(rslvq_loglik(model, data), rel=1e-10)
    fW = numeric_grad(lambda w: rslvq_loglik(PrototypeModel(w, c, sigma=sigma, priors=priors, n_classes=3), data), W)
    assert rel_err(gW, fW) < 1e-5


class TestCost:
    def test_equal_distances_give_zero(self):
        m = PrototypeModel([[-1.0], [1.0]], [1, 2])
        assert glvq_cost(m, LabeledDataset([[0.0]], [1])) == 0.0

    def test_example_value(self):
        m = PrototypeModel([[1.0], [-np.sqrt(3.0)]], [1, 2])
        assert glvq_cost(m, LabeledDataset([[0.0]], [1])) == pytest.approx(-0.5)

    @pytest.mark.parametrize("seed", range(10))
    def test_sign_matches_correctness(self, seed):
        data, W, c, omega = random_setup(seed, ["euclidean", "global", "local"][seed % 3])
        model = PrototypeModel(W, c, ["euclidean", "global", "local"][seed % 3], omega, n_classes=3)
        mu = relative_differences(model, data)
        correct = predict(model, data.points) == data.labels
        assert np.array_equal(mu < 0, correct)
        assert np.all((mu[correct] > -1) & (mu[correct] <= 0))

    def test_needs_other_class(self):
        m = PrototypeModel([[0.0]], [1])
        with pytest.raises(InvalidInputError):
            glvq_cost(m, LabeledDataset([[0.0]], [1]))


class TestPosterior:
    def test_equidistant_is_uniform(self):
        m = PrototypeModel([[-1.0], [1.0]], [1, 2], sigma=1.0, priors=[0.5, 0.5])
        assert np.allclose(posterior(m, [0.0]), [0.5, 0.5])

    def test_dominant_component(self):
        m = PrototypeModel([[0.0], [5.0]], [1, 2], sigma=0.05, priors=[0.5, 0.5])
        assert posterior(m, [0.0])[0] == pytest.approx(1.0)

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_naive_density_ratio(self, seed):
        rng = np.random.default_rng(seed)
        W = rng.normal(size=(5, 2))
        c = np.array([1, 1, 2, 3, 3])
        sigma = rng.uniform(0.5, 2.0, 5)
        priors = rng.dirichlet(np.ones(5))
        m = PrototypeModel(W, c, sigma=sigma, priors=priors)
        X = rng.normal(size=(8, 2))
        dens = np.array([[priors[j] * (2 * np.pi * sigma[j] ** 2) ** -1 * np.exp(-np.sum((x - W[j]) ** 2) / (2 * sigma[j] ** 2))
                          for j in range(5)] for x in X])
        naive = np.stack([dens[:, c == k].sum(1) for k in (1, 2, 3)], axis=1) / dens.sum(1, keepdims=True)
        assert np.allclose(posterior(m, X), naive, rtol=1e-10, atol=1e-12)

    def test_sums_to_one_far_away(self, rng):
        m = PrototypeModel(rng.normal(size=(4, 3)), [1, 2, 3, 1], sigma=0.01, priors=[0.25] * 4)
        P = posterior(m, rng.normal(scale=1e4, size=(50, 3)))
        assert np.all(np.abs(P.sum(1) - 1) < 1e-9)
        assert np.all(np.isfinite(P))

    def test_requires_rslvq(self):
        with pytest.raises(InvalidInputError):
            posterior(PrototypeModel([[0.0], [1.0]], [1, 2]), [0.0])


def two_clusters(seed=0, n=50):
    rng = np.random.default_rng(seed)
    X = np.concatenate([rng.normal(-5, 0.5, n), rng.normal(5, 0.5, n)])[:, None]
    return LabeledDataset(X, np.repeat([1, 2], n))


class TestTraining:
    @pytest.mark.parametrize("kind", ["glvq", "gmlvq", "lgmlvq", "rslvq"])
    def test_separable_clusters(self, kind):
        model, report = train(kind, two_clusters(), TrainConfig(epochs=10))
        assert report.final_train_accuracy == 1.0
        assert len(report.cost_trace) == 10
        assert np.all(np.isfinite(model.prototypes))

    def test_single_epoch_trace(self):
        _, report = train("gmlvq", two_clusters(), TrainConfig(epochs=1))
        assert len(report.cost_trace) == 1

    @pytest.mark.parametrize("kind", ["glvq", "gmlvq", "lgmlvq", "rslvq"])
    def test_degenerate_identical_points(self, kind):
        data = LabeledDataset(np.ones((10, 2)), np.repeat([1, 2], 5))
        model, report = train(kind, data, TrainConfig(epochs=3))
        assert np.all(np.isfinite(model.prototypes))
        assert np.all(np.isfinite(report.cost_trace))

    @pytest.mark.parametrize("kind", ["gmlvq", "lgmlvq", "rslvq"])
    def test_missing_values(self, kind):
        rng = np.random.default_rng(3)
        X = np.concatenate([rng.normal(-3, 1, (40, 3)), rng.normal(3, 1, (40, 3))])
        X[rng.random(X.shape) < 0.2] = np.nan
        X[:, 0] = np.where(np.isnan(X).all(1), 0.0, X[:, 0])
        model, report = train(kind, LabeledDataset(X, np.repeat([1, 2], 40)), TrainConfig(epochs=10))
        assert report.final_train_accuracy > 0.9
        assert np.all(np.isfinite(model.prototypes))

    def test_deterministic(self):
        data = two_clusters(1)
        a, _ = train_lgmlvq(data, TrainConfig(seed=4, epochs=5))
        b, _ = train_lgmlvq(data, TrainConfig(seed=4, epochs=5))
        assert np.array_equal(a.prototypes, b.prototypes) and np.array_equal(a.omega, b.omega)

    def test_metric_normalised(self):
        data, _ = generate(SyntheticSpec("pearl-necklace", points_per_cluster=100))
        g, _ = train_gmlvq(data, TrainConfig(epochs=3))
        assert np.trace(g.lambdas()[0]) == pytest.approx(1.0)
        loc, _ = train_lgmlvq(data, TrainConfig(epochs=3))
        assert np.mean(np.trace(loc.lambdas(), axis1=1, axis2=2)) == pytest.approx(1.0)
        each, _ = train_lgmlvq(data, TrainConfig(epochs=3, local_normalization="each"))
        assert np.allclose(np.trace(each.lambdas(), axis1=1, axis2=2), 1.0)

    def test_rslvq_separable_loglik_near_zero(self):
        data = two_clusters()
        model, report = train_rslvq(data, TrainConfig(sigma=0.2, epochs=5))
        assert -1e-6 < report.cost_trace[-1] <= 0.0
        assert np.allclose(model.sigma, model.sigma[0])
        assert np.allclose(model.priors, 0.5)

    def test_rslvq_single_class_loglik_is_zero(self):
        data = LabeledDataset(np.random.default_rng(0).normal(size=(20, 2)), np.ones(20, int))
        model, report = train_rslvq(data, TrainConfig(epochs=2))
        assert report.cost_trace == [0.0, 0.0]
        assert rslvq_loglik(model, data) == 0.0

    @pytest.mark.parametrize("bad", [dict(epochs=0), dict(sigma=0.0), dict(lr_prototypes=-1.0),
                                     dict(prototypes_per_class=0), dict(phi="tanh")])
    def test_invalid_config(self, bad):
        with pytest.raises(InvalidInputError):
            TrainConfig(**bad)

    def test_unknown_kind(self):
        with pytest.raises(InvalidInputError):
            train("svm", two_clusters())

    def test_local_metrics_beat_global_on_pearl_necklace(self):
        g, loc = [], []
        for seed in range(10):
            data, _ = generate(SyntheticSpec("pearl-necklace", seed=seed))
            g.append(train_gmlvq(data, TrainConfig(seed=seed))[1].final_train_accuracy)
            loc.append(train_lgmlvq(data, TrainConfig(seed=seed))[1].final_train_accuracy)
        assert np.mean(g) < np.mean(loc)

    def test_rslvq_close_to_gmlvq_on_gaussian_clusters(self):
        r, g = [], []
        for seed in range(10):
            data, _ = generate(SyntheticSpec("gaussian-clusters", seed=seed))
            r.append(train_rslvq(data, TrainConfig(seed=seed))[1].final_train_accuracy)
            g.append(train_gmlvq(data, TrainConfig(seed=seed))[1].final_train_accuracy)
        assert abs(np.mean(r) - np.mean(g)) < 0.05
