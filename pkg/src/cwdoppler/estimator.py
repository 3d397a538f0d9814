from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .config import RadarConfig, validate_config
from .dsp import (DEFAULT_THRESHOLD, INTERPOLATION_KINDS, WINDOW_KINDS, VelocitySpectrum,
                  detect_peak, max_detectable_velocity, process_frames, velocity_axis)
from .synth import QuantizedFrames
from .validation import check_choice, check_frames, check_positive


class DopplerVelocityEstimator(TransformerMixin, BaseEstimator):
    """Frame-wise CW Doppler processing behind the scikit-learn estimator API.

    ``transform`` maps IF frames to velocity-ordered spectral magnitudes
    (one column per velocity bin in ``velocities_``); ``predict`` returns the
    detected radial velocity per frame, NaN when no peak clears the threshold.

    Parameters
    ----------
    config : RadarConfig, optional
        Front-end parameters. When omitted, ``fit`` takes the config of a
        :class:`QuantizedFrames` input, or the defaults.
    window : {"hann", "rectangular"}
    threshold_factor : float
        A peak must reach this multiple of the median bin magnitude.
    interpolation : {"parabolic", "none"}
        Sub-bin refinement of the reported velocity.
    """

    def __init__(self, config=None, window="hann", threshold_factor=DEFAULT_THRESHOLD,
                 interpolation="parabolic"):
        self.config = config
        self.window = window
        self.threshold_factor = threshold_factor
        self.interpolation = interpolation

    def fit(self, X=None, y=None):
        check_choice(self.window, WINDOW_KINDS, "window")
        check_choice(self.interpolation, INTERPOLATION_KINDS, "interpolation")
        check_positive(self.threshold_factor, "threshold_factor")
        config = self.config
        if config is None:
            config = X.config if isinstance(X, QuantizedFrames) else RadarConfig()
        self.config_ = validate_config(config)
        if X is not None:
            check_frames(X, self.config_)
        self.velocities_ = velocity_axis(self.config_)
        self.velocity_resolution_ = float(self.velocities_[1] - self.velocities_[0])
        self.v_max_ = max_detectable_velocity(self.config_)
        self.n_features_in_ = self.config_.frame_len
        return self

    def _check_fitted(self):
        if not hasattr(self, "config_"):
            raise NotFittedError(f"{type(self).__name__} is not fitted yet; call fit first")

    def transform(self, X):
        self._check_fitted()
        return process_frames(check_frames(X, self.config_), self.config_, self.window)

    def predict(self, X):
        mags = self.transform(X)
        out = np.full(len(mags), np.nan)
        for k, row in enumerate(mags):
            peak = detect_peak(VelocitySpectrum(self.velocities_, row, k),
                               self.threshold_factor, self.interpolation)
            if peak is not None:
                out[k] = peak.velocity_mps
        return out

    def score(self, X, y):
        """Fraction of frames detected within half a velocity bin of ``y``."""
        pred = self.predict(X)
        err = np.abs(pred - np.asarray(y, dtype=float))
        return float(np.mean(np.nan_to_num(err, nan=np.inf) <= 0.5 * self.velocity_resolution_))
