import numpy as np
import pytest
from sklearn.base import clone

from jcpot import ConfigError, JcpotAdapter, OtdaAdapter, gen_gaussian_binary


def _toy_problem(seed=0):
    Xs1, ys1 = gen_gaussian_binary(40, (0.5, 0.5), seed=seed)
    Xs2, ys2 = gen_gaussian_binary(40, (0.3, 0.7), seed=seed + 1)
    Xt, yt = gen_gaussian_binary(30, (0.2, 0.8), seed=seed + 2)
    return [Xs1, Xs2], [ys1, ys2], Xt, yt


class TestJcpotAdapter:
    def test_params_round_trip(self):
        est = JcpotAdapter(epsilon=0.05, tol=1e-7, max_iter=123, weights=[0.4, 0.6])
        params = est.get_params()
        assert params == {
            "epsilon": 0.05, "tol": 1e-7, "max_iter": 123, "weights": [0.4, 0.6]
        }
        est.set_params(epsilon=0.2)
        assert est.epsilon == 0.2

    def test_clone(self):
        est = JcpotAdapter(epsilon=0.05)
        cloned = clone(est)
        assert cloned.get_params() == est.get_params()

    def test_fit_attributes(self):
        Xs, ys, Xt, _ = _toy_problem()
        est = JcpotAdapter().fit(Xs, ys, Xt)
        assert est.proportions_.shape == (2,)
        assert abs(est.proportions_.sum() - 1.0) < 1e-12
        assert len(est.couplings_) == 2
        assert est.couplings_[0].shape == (40, 30)
        assert est.converged_ in (True, False)
        assert est.trace_.shape == (est.iterations_,)

    def test_predict_shapes_and_methods(self):
        Xs, ys, Xt, _ = _toy_problem()
        est = JcpotAdapter().fit(Xs, ys, Xt)
        for method in ("lp", "pt"):
            labels = est.predict(method)
            assert labels.shape == (30,)
            assert set(np.unique(labels)) <= {0, 1}
        proba = est.predict_proba("lp")
        assert proba.shape == (30, 2)
        np.testing.assert_allclose(proba.sum(axis=1), 1.0, atol=1e-9)

    def test_transform_returns_mapped_sources(self):
        Xs, ys, Xt, _ = _toy_problem()
        est = JcpotAdapter().fit(Xs, ys, Xt)
        pairs = est.transform()
        assert len(pairs) == 2
        for (mapped, labels), X in zip(pairs, Xs):
            assert mapped.shape == (X.shape[0], 2)
            assert labels.shape == (X.shape[0],)

    def test_unknown_method(self):
        Xs, ys, Xt, _ = _toy_problem()
        est = JcpotAdapter().fit(Xs, ys, Xt)
        with pytest.raises(ConfigError):
            est.predict("svm")

    def test_predict_before_fit(self):
        with pytest.raises(ConfigError, match="not fitted"):
            JcpotAdapter().predict()


class TestOtdaAdapter:
    def test_params_round_trip(self):
        est = OtdaAdapter(epsilon=0.3)
        assert est.get_params() == {"epsilon": 0.3, "tol": 1e-6, "max_iter": 1000}
        assert clone(est).get_params() == est.get_params()

    def test_fit_predict(self):
        Xs, ys, Xt, _ = _toy_problem()
        est = OtdaAdapter().fit(Xs, ys, Xt)
        assert est.coupling_.shape == (80, 30)
        for method in ("lp", "pt"):
            assert est.predict(method).shape == (30,)
        proba = est.predict_proba()
        assert proba.shape == (30, 2)

    def test_predict_before_fit(self):
        with pytest.raises(ConfigError, match="not fitted"):
            OtdaAdapter().predict()

    def test_unknown_method(self):
        Xs, ys, Xt, _ = _toy_problem()
        est = OtdaAdapter().fit(Xs, ys, Xt)
        with pytest.raises(ConfigError):
            est.predict("rf")
