"""Input checks shared by the estimator front end."""

from __future__ import annotations

import numbers

import numpy as np

from .config import DomainError, RadarConfig
from .synth import QuantizedFrames


def check_frames(X, config: RadarConfig) -> np.ndarray:
    """Coerce ``X`` to complex volts of shape ``(n_frames, frame_len)``.

    Accepted inputs: :class:`QuantizedFrames`; a complex (or real) array of
    shape ``(n_frames, frame_len)`` or ``(frame_len,)``; an integer array of
    ADC codes shaped ``(n_frames, frame_len, 2)``, scaled by the config's LSB.
    """
    if isinstance(X, QuantizedFrames):
        if X.config.frame_len != config.frame_len:
            raise DomainError("frames were recorded with a different frame_len")
        return X.dequantize()
    arr = np.asarray(X)
    if arr.dtype == object or not np.issubdtype(arr.dtype, np.number):
        raise DomainError(f"expected numeric frames, got dtype {arr.dtype}")
    if arr.ndim == 3:
        if arr.shape[2] != 2 or not np.issubdtype(arr.dtype, np.integer):
            raise DomainError("3-D input must be integer (i, q) codes with a last axis of 2")
        arr = (arr[..., 0] + 1j * arr[..., 1]) * config.lsb
    elif arr.ndim == 1:
        arr = arr[None, :]
    elif arr.ndim != 2:
        raise DomainError(f"expected 1-D, 2-D or 3-D input, got {arr.ndim}-D")
    if arr.shape[0] < 1:
        raise DomainError("no frames")
    if arr.shape[1] != config.frame_len:
        raise DomainError(f"frames have {arr.shape[1]} samples, expected {config.frame_len}")
    arr = arr.astype(complex)
    if not np.all(np.isfinite(arr)):
        raise DomainError("frames contain NaN or infinite values")
    return arr


def check_positive(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, numbers.Real) or not value > 0:
        raise DomainError(f"{name} must be a positive number, got {value!r}")
    return float(value)


def check_choice(value, choices, name: str) -> str:
    if value not in choices:
        raise DomainError(f"{name} must be one of {tuple(choices)}, got {value!r}")
    return value
