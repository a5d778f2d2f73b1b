"""Estimator facade: fit/get_params round trips over the functional core."""

import numpy as np
import pytest
from sklearn.base import clone

from illposed import (
    DsmEstimator,
    LandweberEstimator,
    QuasiSolutionEstimator,
    TikhonovEstimator,
    add_noise,
    apriori_alpha,
    morozov_alpha,
    tikhonov_solve,
)


@pytest.fixture(scope="module")
def noisy32(request):
    problem = request.getfixturevalue("fredholm32_hat")
    return problem, add_noise(problem, 1e-2, seed=0)


class TestSklearnProtocol:
    @pytest.mark.parametrize(
        "estimator",
        [
            TikhonovEstimator(),
            QuasiSolutionEstimator(),
            LandweberEstimator(),
            DsmEstimator(),
        ],
        ids=lambda e: type(e).__name__,
    )
    def test_clone_and_params_roundtrip(self, estimator):
        params = estimator.get_params()
        twin = clone(estimator)
        assert twin.get_params() == params
        estimator.set_params(**params)
        assert estimator.get_params() == params

    def test_fit_returns_self(self, noisy32):
        problem, noisy = noisy32
        est = TikhonovEstimator(rule="fixed", alpha=1e-3)
        assert est.fit(problem.op, noisy.f_delta) is est


class TestTikhonovEstimator:
    def test_apriori_rule_sets_alpha(self, noisy32):
        problem, noisy = noisy32
        est = TikhonovEstimator(rule="apriori", exponent=2.0 / 3.0)
        est.fit(problem.op, noisy.f_delta, delta=1e-2)
        assert est.alpha_ == pytest.approx(apriori_alpha(1e-2), rel=1e-12)
        expected = tikhonov_solve(problem.op, noisy.f_delta, est.alpha_)
        np.testing.assert_allclose(est.solution_, expected, rtol=1e-12)

    def test_morozov_rule_matches_function(self, noisy32):
        problem, noisy = noisy32
        est = TikhonovEstimator(rule="morozov", C=1.5)
        est.fit(problem.op, noisy.f_delta, delta=1e-2)
        alpha, residual = morozov_alpha(problem.op, noisy.f_delta, 1e-2, 1.5)
        assert est.alpha_ == pytest.approx(alpha, rel=1e-12)
        assert est.residual_ == pytest.approx(residual, rel=1e-10)

    def test_fixed_rule_uses_given_alpha(self, noisy32):
        problem, noisy = noisy32
        est = TikhonovEstimator(rule="fixed", alpha=3e-4).fit(
            problem.op, noisy.f_delta
        )
        assert est.alpha_ == 3e-4
        assert est.param_name_ == "alpha"
        assert est.param_value_ == 3e-4

    def test_apriori_without_delta_rejected(self, noisy32):
        problem, noisy = noisy32
        with pytest.raises(ValueError):
            TikhonovEstimator(rule="apriori").fit(problem.op, noisy.f_delta)

    def test_unknown_rule_rejected(self, noisy32):
        problem, noisy = noisy32
        with pytest.raises(ValueError):
            TikhonovEstimator(rule="lcurve").fit(problem.op, noisy.f_delta, delta=1e-2)


class TestQuasiSolutionEstimator:
    def test_active_constraint_fit(self, noisy32):
        problem, noisy = noisy32
        radius = 0.5 * problem.op.norm_h(problem.truth)
        est = QuasiSolutionEstimator(radius=radius).fit(problem.op, noisy.f_delta)
        assert est.multiplier_ > 0.0
        assert problem.op.norm_h(est.solution_) == pytest.approx(radius, rel=1e-9)
        assert est.param_name_ == "lambda"


class TestLandweberEstimator:
    def test_discrepancy_fit_records_trace(self, noisy32):
        problem, noisy = noisy32
        est = LandweberEstimator(stop="discrepancy", C=1.5).fit(
            problem.op, noisy.f_delta, delta=1e-2
        )
        assert est.n_iter_ == est.trace_.stop_index
        assert not est.exhausted_
        assert est.residual_ <= 1.5 * 1e-2

    def test_fixed_stop_honors_n(self, noisy32):
        problem, noisy = noisy32
        est = LandweberEstimator(stop="fixed", n_fixed=9).fit(
            problem.op, noisy.f_delta
        )
        assert est.n_iter_ == 9

    def test_oracle_stop_needs_truth(self, noisy32):
        problem, noisy = noisy32
        with pytest.raises(ValueError):
            LandweberEstimator(stop="oracle").fit(problem.op, noisy.f_delta)
        est = LandweberEstimator(stop="oracle").fit(
            problem.op, noisy.f_delta, truth=problem.truth
        )
        assert est.trace_.stopped_by == "oracle"


class TestDsmEstimator:
    def test_root_stop_fit(self, noisy32):
        problem, noisy = noisy32
        est = DsmEstimator(stop="root", b=0.5).fit(
            problem.op, noisy.f_delta, delta=1e-2
        )
        assert est.stop_time_ > 0.0
        np.testing.assert_array_equal(est.solution_, est.trajectory_.final)
        assert est.param_name_ == "t"

    def test_time_stop_uses_horizon(self, noisy32):
        problem, noisy = noisy32
        est = DsmEstimator(stop="time", t_end=25.0).fit(problem.op, noisy.f_delta)
        assert est.stop_time_ == pytest.approx(25.0)
        assert est.trajectory_.times[-1] == pytest.approx(25.0)

    def test_unknown_stop_rejected(self, noisy32):
        problem, noisy = noisy32
        with pytest.raises(ValueError):
            DsmEstimator(stop="never").fit(problem.op, noisy.f_delta, delta=1e-2)
