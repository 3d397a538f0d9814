import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import FunctionTransformer

from cwdoppler.config import DomainError, RadarConfig
from cwdoppler.dsp import velocity_map
from cwdoppler.estimator import DopplerVelocityEstimator
from cwdoppler.kinematics import ConstantRadialParams, constant_radial_trajectory
from cwdoppler.synth import quantize, synthesize_if


@pytest.fixture
def frames(config):
    traj = constant_radial_trajectory(ConstantRadialParams(-2.0, 6.0, 1.0))
    return quantize(synthesize_if(traj, config, noise_seed=4), config)


def test_params_round_trip():
    est = DopplerVelocityEstimator(window="rectangular", threshold_factor=5.0)
    params = est.get_params()
    assert params == {"config": None, "window": "rectangular", "threshold_factor": 5.0,
                      "interpolation": "parabolic"}
    est.set_params(threshold_factor=3.0)
    assert est.threshold_factor == 3.0
    assert clone(est).get_params() == est.get_params()


def test_not_fitted(frames):
    with pytest.raises(NotFittedError):
        DopplerVelocityEstimator().predict(frames)


def test_fit_takes_config_from_frames(frames):
    est = DopplerVelocityEstimator().fit(frames)
    assert est.config_ == frames.config
    assert est.n_features_in_ == 128
    assert est.v_max_ == pytest.approx(9.3685, abs=1e-4)
    assert len(est.velocities_) == 128


def test_matches_functional_pipeline(frames):
    est = DopplerVelocityEstimator().fit(frames)
    vmap = velocity_map(frames)
    np.testing.assert_array_equal(est.transform(frames), vmap.magnitudes)
    np.testing.assert_array_equal(est.predict(frames), vmap.track())


def test_accepts_codes_and_complex(frames):
    est = DopplerVelocityEstimator().fit(frames)
    a = est.predict(frames)
    np.testing.assert_array_equal(est.predict(frames.codes), a)
    np.testing.assert_array_equal(est.predict(frames.dequantize()), a)
    assert est.predict(frames.dequantize()[0]).shape == (1,)


def test_score(frames):
    est = DopplerVelocityEstimator().fit(frames)
    assert est.score(frames, np.full(frames.n_frames, -2.0)) == 1.0
    assert est.score(frames, np.full(frames.n_frames, 2.0)) == 0.0


@pytest.mark.parametrize("bad", [np.ones((2, 64)), np.ones((2, 128, 3), int), np.full((1, 128), np.nan),
                                 np.array([["a"] * 128])])
def test_input_validation(frames, bad):
    est = DopplerVelocityEstimator().fit(frames)
    with pytest.raises(DomainError):
        est.transform(bad)


@pytest.mark.parametrize("params", [{"window": "kaiser"}, {"threshold_factor": 0},
                                    {"interpolation": "cubic"}, {"config": RadarConfig(frame_len=100)}])
def test_bad_params(params):
    with pytest.raises(DomainError):
        DopplerVelocityEstimator(**params).fit()


def test_in_pipeline(frames):
    # scale the frames first; detection is amplitude invariant
    pipe = make_pipeline(FunctionTransformer(lambda x: 3.0 * x), DopplerVelocityEstimator(frames.config))
    pipe.fit(frames.dequantize())
    np.testing.assert_allclose(pipe.predict(frames.dequantize()),
                               DopplerVelocityEstimator().fit(frames).predict(frames), rtol=1e-12)
