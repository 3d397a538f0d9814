"""Frame-by-frame Doppler processing: DC removal, window, FFT, velocity axis, peak pick."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .config import DomainError, RadarConfig, validate_config
from .synth import QuantizedFrames

WINDOW_KINDS = ("rectangular", "hann")
INTERPOLATION_KINDS = ("none", "parabolic")
DEFAULT_THRESHOLD = 8.0


@dataclass(frozen=True)
class VelocitySpectrum:
    """Magnitude per velocity bin, bins ascending over ``[-v_max, +v_max)``."""

    velocities: np.ndarray
    magnitudes: np.ndarray
    frame_index: int = 0

    def __post_init__(self):
        if len(self.velocities) != len(self.magnitudes):
            raise DomainError("velocities and magnitudes differ in length")

    @property
    def step(self) -> float:
        return float(self.velocities[1] - self.velocities[0])


@dataclass(frozen=True)
class Peak:
    velocity_mps: float
    magnitude: float
    bin_index: int


@dataclass(frozen=True)
class VelocityMap:
    rows: List[VelocitySpectrum]
    peaks: List[Optional[Peak]] = field(default_factory=list)

    def __post_init__(self):
        if self.rows:
            axis = self.rows[0].velocities
            for prev, row in zip(self.rows, self.rows[1:]):
                if row.frame_index <= prev.frame_index:
                    raise DomainError("frame_index must be strictly increasing")
            if any(not np.array_equal(r.velocities, axis) for r in self.rows):
                raise DomainError("all rows must share one velocity axis")

    @property
    def velocities(self) -> np.ndarray:
        return self.rows[0].velocities

    @property
    def magnitudes(self) -> np.ndarray:
        """Shape ``(n_frames, n_bins)``."""
        return np.vstack([r.magnitudes for r in self.rows])

    def track(self) -> np.ndarray:
        """Detected velocity per frame, NaN where nothing was detected."""
        return np.array([np.nan if p is None else p.velocity_mps for p in self.peaks])


def max_detectable_velocity(config: RadarConfig) -> float:
    """Unambiguous velocity limit ``f_ADC * lambda / 4``."""
    validate_config(config)
    return 0.25 * config.adc_rate_sps * config.wavelength


def velocity_axis(config: RadarConfig) -> np.ndarray:
    n = config.frame_len
    step = config.wavelength * config.adc_rate_sps / (2.0 * n)
    return (np.arange(n) - n // 2) * step


def remove_dc(frame) -> np.ndarray:
    x = np.asarray(frame, dtype=complex)
    if x.size == 0:
        raise DomainError("empty frame")
    return x - x.mean(axis=-1, keepdims=True)


def window(frame, kind: str = "hann") -> np.ndarray:
    """Multiply by a window along the last axis. ``hann`` is the periodic form."""
    x = np.asarray(frame, dtype=complex)
    if x.size == 0:
        raise DomainError("empty frame")
    if kind == "rectangular":
        return x.copy()
    if kind == "hann":
        n = x.shape[-1]
        w = 0.5 * (1.0 - np.cos(2.0 * np.pi * np.arange(n) / n))
        return x * w
    raise DomainError(f"unknown window kind {kind!r}; expected one of {WINDOW_KINDS}")


def spectrum(frame, frame_len: Optional[int] = None) -> np.ndarray:
    """DFT of the last axis, shifted so index 0 is -f_ADC/2."""
    x = np.asarray(frame, dtype=complex)
    n = x.shape[-1]
    if frame_len is not None and n != frame_len:
        raise DomainError(f"frame has {n} samples, expected {frame_len}")
    if n < 2 or n & (n - 1):
        raise DomainError(f"frame length must be a power of two, got {n}")
    return np.fft.fftshift(np.fft.fft(x, axis=-1), axes=-1)


def _velocity_order(n: int) -> np.ndarray:
    # v = -f * lambda / 2 reverses the frequency axis; the Nyquist bin is ambiguous
    # and is labelled -v_max so the axis covers [-v_max, +v_max)
    return np.concatenate([[0], np.arange(n - 1, 0, -1)])


def velocity_spectrum(spec, config: RadarConfig, frame_index: int = 0) -> VelocitySpectrum:
    spec = np.asarray(spec)
    if spec.shape[-1] != config.frame_len:
        raise DomainError(f"spectrum has {spec.shape[-1]} bins, expected {config.frame_len}")
    mags = np.abs(spec)[..., _velocity_order(config.frame_len)]
    return VelocitySpectrum(velocity_axis(config), mags, frame_index)


def _parabolic_offset(left: float, centre: float, right: float) -> float:
    # vertex of a parabola through the log magnitudes (Gaussian peak fit)
    if left <= 0 or right <= 0:
        return 0.0
    a, b, c = np.log(left), np.log(centre), np.log(right)
    denom = a - 2.0 * b + c
    if denom >= 0:
        return 0.0
    return float(np.clip(0.5 * (a - c) / denom, -0.5, 0.5))


def detect_peak(vs: VelocitySpectrum, threshold_factor: float = DEFAULT_THRESHOLD,
                interpolation: str = "none") -> Optional[Peak]:
    """Strongest bin, if it stands ``threshold_factor`` times above the median.

    Ties go to the bin with the smaller ``|v|`` (then the negative one). An
    all-zero spectrum never yields a peak. ``interpolation="parabolic"``
    refines the reported velocity between bins with a log-parabola fit.
    """
    if not threshold_factor > 0:
        raise DomainError(f"threshold_factor must be > 0, got {threshold_factor!r}")
    if interpolation not in INTERPOLATION_KINDS:
        raise DomainError(f"unknown interpolation {interpolation!r}")
    mags = np.asarray(vs.magnitudes, dtype=float)
    vel = np.asarray(vs.velocities, dtype=float)
    top = mags.max()
    if top <= 0 or top < threshold_factor * np.median(mags):
        return None
    candidates = np.flatnonzero(mags == top)
    idx = int(min(candidates, key=lambda i: (abs(vel[i]), vel[i])))
    velocity = float(vel[idx])
    if interpolation == "parabolic":
        n = len(mags)
        offset = _parabolic_offset(mags[(idx - 1) % n], top, mags[(idx + 1) % n])
        step = vs.step
        v_max = -vel[0]
        velocity = (velocity + offset * step + v_max) % (2 * v_max) - v_max
    return Peak(velocity, float(top), idx)


def process_frames(frames: np.ndarray, config: RadarConfig, window_kind: str = "hann") -> np.ndarray:
    """Complex frames ``(n_frames, frame_len)`` -> velocity-ordered magnitudes."""
    spec = spectrum(window(remove_dc(frames), window_kind), config.frame_len)
    return np.abs(spec)[..., _velocity_order(config.frame_len)]


def velocity_map(frames: QuantizedFrames, config: Optional[RadarConfig] = None,
                 window_kind: str = "hann", threshold_factor: float = DEFAULT_THRESHOLD,
                 interpolation: str = "parabolic") -> VelocityMap:
    """Run every frame through dequantize, DC removal, window, FFT and peak detection."""
    config = validate_config(config or frames.config)
    if frames.n_frames < 1:
        raise DomainError("no frames to process")
    mags = process_frames(frames.dequantize(), config, window_kind)
    axis = velocity_axis(config)
    rows = [VelocitySpectrum(axis, m, i) for i, m in enumerate(mags)]
    peaks = [detect_peak(r, threshold_factor, interpolation) for r in rows]
    return VelocityMap(rows, peaks)


def sign_groups(track: Sequence[float], min_speed: float = 0.0) -> List[int]:
    """Collapse a detected-velocity track into runs of equal sign.

    NaN entries (no detection) and ``|v| <= min_speed`` are skipped, so a gap
    between two same-sign runs does not split them.
    """
    groups: List[int] = []
    for v in track:
        if v is None or np.isnan(v) or abs(v) <= min_speed:
            continue
        s = 1 if v > 0 else -1
        if not groups or groups[-1] != s:
            groups.append(s)
    return groups


def count_transitions(groups: Sequence[int], start: int = -1, end: int = 1) -> int:
    return sum(1 for a, b in zip(groups, groups[1:]) if a == start and b == end)


def detection_gaps(track: Sequence[float]) -> List[tuple]:
    """``(first, last)`` frame indices of each run of missing detections."""
    gaps, start = [], None
    for i, v in enumerate(track):
        missing = v is None or np.isnan(v)
        if missing and start is None:
            start = i
        elif not missing and start is not None:
            gaps.append((start, i - 1))
            start = None
    if start is not None:
        gaps.append((start, len(track) - 1))
    return gaps
