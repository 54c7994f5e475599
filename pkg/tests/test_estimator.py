import numpy as np
import pytest
from conftest import random_complex, rel_err
from sklearn.base import clone

from convdistill import ConvolutionDistiller, circular_convolve_direct


def make_dataset(rng, n=4, shape=(8, 8)):
    k_true = random_complex(rng, shape)
    xs = np.stack([random_complex(rng, shape) for _ in range(n)])
    ys = np.stack([circular_convolve_direct(x, k_true) for x in xs])
    return xs, ys, k_true


class TestSklearnApi:
    def test_get_set_params(self):
        est = ConvolutionDistiller(reg_lambda=0.5, cores=2)
        params = est.get_params()
        assert params == {"reg_lambda": 0.5, "cores": 2}
        est.set_params(cores=3)
        assert est.cores == 3

    def test_clone(self):
        est = ConvolutionDistiller(reg_lambda="auto", cores=2)
        cloned = clone(est)
        assert cloned.get_params() == est.get_params()

    def test_fit_returns_self(self, rng):
        xs, ys, _ = make_dataset(rng)
        est = ConvolutionDistiller(reg_lambda=0.0)
        assert est.fit(xs, ys) is est

    def test_predict_before_fit_raises(self, rng):
        with pytest.raises(RuntimeError):
            ConvolutionDistiller().predict(random_complex(rng, (4, 4)))


class TestFitPredict:
    def test_recovers_kernel(self, rng):
        xs, ys, k_true = make_dataset(rng)
        est = ConvolutionDistiller(reg_lambda=0.0).fit(xs, ys)
        assert rel_err(est.kernel_, k_true) <= 1e-8
        assert est.fit_error_ <= 1e-8

    def test_predict_shapes_and_values(self, rng):
        xs, ys, _ = make_dataset(rng, n=3)
        est = ConvolutionDistiller(reg_lambda=0.0).fit(xs, ys)
        preds = est.predict(xs)
        assert preds.shape == xs.shape
        assert rel_err(preds, ys) <= 1e-8

    def test_single_matrix_inputs(self, rng):
        x = random_complex(rng, (6, 6))
        k = random_complex(rng, (6, 6))
        y = circular_convolve_direct(x, k)
        est = ConvolutionDistiller(reg_lambda=1e-9).fit(x, y)
        assert est.kernel_.shape == (6, 6)

    def test_score_near_one_on_consistent_data(self, rng):
        xs, ys, _ = make_dataset(rng)
        est = ConvolutionDistiller(reg_lambda=0.0).fit(xs, ys)
        assert est.score(xs, ys) >= 1.0 - 1e-8

    def test_mismatched_counts(self, rng):
        xs, ys, _ = make_dataset(rng, n=3)
        with pytest.raises(ValueError):
            ConvolutionDistiller().fit(xs, ys[:2])

    def test_auto_lambda_records_value(self, rng):
        xs, ys, _ = make_dataset(rng)
        est = ConvolutionDistiller(reg_lambda="auto").fit(xs, ys)
        assert est.lambda_ > 0


class TestExplain:
    def test_explain_columns(self, rng):
        xs, ys, _ = make_dataset(rng, n=2, shape=(6, 6))
        est = ConvolutionDistiller(reg_lambda=0.0).fit(xs, ys)
        cm = est.explain(xs[0], ys[0], segmentation="columns")
        assert cm.segmentation.n_features == 6
        total = np.sum(cm.contributions, axis=0)
        assert rel_err(total, ys[0]) <= 1e-8

    def test_explain_defaults_to_own_prediction(self, rng):
        xs, ys, _ = make_dataset(rng, n=2, shape=(4, 4))
        est = ConvolutionDistiller(reg_lambda=0.0).fit(xs, ys)
        cm = est.explain(xs[0], segmentation="block", block_shape=(2, 2))
        assert cm.segmentation.n_features == 4

    def test_unknown_segmentation(self, rng):
        xs, ys, _ = make_dataset(rng, n=2, shape=(4, 4))
        est = ConvolutionDistiller(reg_lambda=0.0).fit(xs, ys)
        with pytest.raises(ValueError):
            est.explain(xs[0], segmentation="voronoi")
