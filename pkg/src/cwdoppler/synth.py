"""Forward model: complex IF samples of a moving point target, plus the ADC.

Voltage convention: a tone of power ``P`` watts has complex amplitude
``sqrt(2 * P * 50 ohm) * gain``; noise uses the same scaling, so the
per-sample SNR of the stream equals the link-budget SNR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .config import REFERENCE_IMPEDANCE_OHM, DomainError, RadarConfig, validate_config
from .kinematics import Trajectory, range_at
from .link_budget import LinkBudgetParams, noise_floor, received_power

# Automatic IF gain puts this reference target at AUTO_GAIN_FRACTION of full scale.
AUTO_GAIN_RCS_DBSM = 0.0
AUTO_GAIN_RANGE_M = 4.0
AUTO_GAIN_FRACTION = 0.25

DEFAULT_RCS_DBSM = 0.0


@dataclass(frozen=True)
class IQStream:
    samples: np.ndarray
    sample_rate_sps: float
    t0_s: float = 0.0

    def __post_init__(self):
        if np.asarray(self.samples).size < 1:
            raise DomainError("IQStream needs at least one sample")

    def __len__(self):
        return len(self.samples)

    @property
    def times(self) -> np.ndarray:
        return self.t0_s + np.arange(len(self.samples)) / self.sample_rate_sps


@dataclass(frozen=True)
class QuantizedFrames:
    """ADC output: ``codes`` has shape ``(n_frames, frame_len, 2)`` holding (i, q)."""

    codes: np.ndarray
    config: RadarConfig
    clip_count: int = 0

    def __post_init__(self):
        codes = np.asarray(self.codes)
        if codes.ndim != 3 or codes.shape[2] != 2 or codes.shape[1] != self.config.frame_len:
            raise DomainError(
                f"codes must have shape (n_frames, {self.config.frame_len}, 2), got {codes.shape}")
        lo, hi = code_range(self.config.adc_bits)
        if codes.size and (codes.min() < lo or codes.max() > hi):
            raise DomainError(f"ADC codes outside [{lo}, {hi}]")

    def __len__(self):
        return self.codes.shape[0]

    def __eq__(self, other):
        if not isinstance(other, QuantizedFrames):
            return NotImplemented
        return (self.config == other.config and self.clip_count == other.clip_count
                and np.array_equal(self.codes, other.codes))

    @property
    def n_frames(self) -> int:
        return self.codes.shape[0]

    def dequantize(self) -> np.ndarray:
        """Complex volts, shape ``(n_frames, frame_len)``."""
        lsb = self.config.lsb
        return (self.codes[..., 0] + 1j * self.codes[..., 1]) * lsb


def code_range(bits: int) -> Tuple[int, int]:
    return -(2 ** (bits - 1)), 2 ** (bits - 1) - 1


def dbm_to_amplitude(power_dbm, gain: float = 1.0):
    """Complex-envelope amplitude (volts) of a tone carrying ``power_dbm`` into 50 ohm."""
    watts = 10.0 ** ((np.asarray(power_dbm, dtype=float) - 30.0) / 10.0)
    return np.sqrt(2.0 * watts * REFERENCE_IMPEDANCE_OHM) * gain


def stream_power_w(samples, gain: float) -> float:
    """Invert the amplitude convention: mean |x|^2 expressed as watts at the IF input."""
    samples = np.asarray(samples)
    return float(np.mean(np.abs(samples) ** 2)) / (2.0 * REFERENCE_IMPEDANCE_OHM * gain**2)


def resolve_baseband_gain(config: RadarConfig) -> float:
    if config.baseband_gain is not None:
        return float(config.baseband_gain)
    p_ref = received_power(LinkBudgetParams.from_config(config, AUTO_GAIN_RCS_DBSM, AUTO_GAIN_RANGE_M))
    return AUTO_GAIN_FRACTION * config.adc_full_scale / float(dbm_to_amplitude(p_ref))


def noise_block(seed: int, block: int, n: int, sigma: float) -> np.ndarray:
    """Complex white Gaussian noise for one block of samples.

    Each block draws from its own Philox stream (counter jumped by ``block``)
    so any block can be regenerated on its own, in any order.
    """
    bitgen = np.random.Philox(seed).jumped(block)
    rng = np.random.Generator(bitgen)
    draws = rng.standard_normal((n, 2))
    return sigma * (draws[:, 0] + 1j * draws[:, 1])


def synthesize_if(traj: Trajectory, config: RadarConfig, noise_seed: int = 0,
                  include_noise: bool = True, rcs_dbsm: float = DEFAULT_RCS_DBSM,
                  n_samples: Optional[int] = None) -> IQStream:
    """Sample the IF signal of ``traj`` at ``config.adc_rate_sps``.

    Sample ``n`` at ``t_n = n / f_ADC`` is ``A(t_n) exp(-j 4 pi R(t_n) / lambda) + w_n``
    where ``A`` follows the radar equation at the instantaneous range.
    By default the whole trajectory is sampled; ``n_samples`` truncates it.
    """
    validate_config(config)
    fs = config.adc_rate_sps
    available = int(math.floor(traj.duration_s * fs * (1 + 1e-12)))
    if n_samples is None:
        n_samples = available
    if n_samples > available:
        raise DomainError(f"trajectory provides {available} samples, {n_samples} requested")
    if n_samples < config.frame_len:
        raise DomainError(
            f"trajectory shorter than one frame ({n_samples} < {config.frame_len} samples)")
    if int(noise_seed) != noise_seed or noise_seed < 0:
        raise DomainError(f"noise_seed must be a non-negative integer, got {noise_seed!r}")

    t = np.arange(n_samples) / fs
    rng_m, _ = range_at(traj, t)
    gain = resolve_baseband_gain(config)
    base = LinkBudgetParams.from_config(config, rcs_dbsm, 1.0)
    # R^-4 in power -> R^-2 in amplitude, relative to the 1 m value
    amplitude = dbm_to_amplitude(received_power(base), gain) / rng_m**2
    samples = amplitude * np.exp(-1j * 4.0 * np.pi * rng_m / config.wavelength)

    if include_noise:
        p_n_w = 10.0 ** ((noise_floor(config.noise_figure_db, config.rx_bandwidth_hz) - 30.0) / 10.0)
        sigma = math.sqrt(p_n_w * REFERENCE_IMPEDANCE_OHM) * gain
        block = config.frame_len
        noise = np.concatenate([
            noise_block(int(noise_seed), b, min(block, n_samples - start), sigma)
            for b, start in enumerate(range(0, n_samples, block))
        ])
        samples = samples + noise
    return IQStream(samples, fs)


def quantize(stream: IQStream, config: RadarConfig) -> QuantizedFrames:
    """Mid-tread uniform quantization of I and Q, grouped into whole frames.

    Out-of-range inputs saturate; the number of clipped I/Q values is
    stored in ``clip_count``. A trailing partial frame is dropped.
    """
    validate_config(config)
    if stream.sample_rate_sps != config.adc_rate_sps:
        raise DomainError(
            f"stream sample rate {stream.sample_rate_sps} != adc_rate_sps {config.adc_rate_sps}")
    n_frames = len(stream) // config.frame_len
    x = np.asarray(stream.samples)[: n_frames * config.frame_len]
    lo, hi = code_range(config.adc_bits)
    raw = np.round(np.stack([x.real, x.imag], axis=-1) / config.lsb)
    clip_count = int(np.count_nonzero((raw < lo) | (raw > hi)))
    codes = np.clip(raw, lo, hi).astype(np.int32)
    return QuantizedFrames(codes.reshape(n_frames, config.frame_len, 2), config, clip_count)
