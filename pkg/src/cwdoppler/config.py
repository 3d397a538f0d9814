"""Shared radar configuration, physical constants and config validation."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import List, Optional

SPEED_OF_LIGHT = 299_792_458.0  # m/s, exact SI value
THERMAL_NOISE_DENSITY_DBM_HZ = -174.0
REFERENCE_IMPEDANCE_OHM = 50.0


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class ConfigError(DomainError):
    """One or more RadarConfig invariants are violated.

    The individual messages are kept in ``errors``.
    """

    def __init__(self, errors: List[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class RadarConfig:
    """Parameters of the CW Doppler front end and its ADC.

    ``baseband_gain`` is the voltage gain of the IF amplifier chain. ``None``
    selects the automatic value, which places a 0 dBsm target at 4 m at 25%
    of ADC full scale (see :func:`cwdoppler.synth.resolve_baseband_gain`).
    """

    carrier_freq: float = 24.0e9
    tx_power_dbm: float = 6.0
    tx_gain_dbi: float = 9.355
    rx_gain_dbi: float = 9.355
    noise_figure_db: float = 10.0
    rx_bandwidth_hz: float = 1500.0
    adc_rate_sps: float = 3000.0
    frame_len: int = 128
    adc_bits: int = 12
    adc_full_scale: float = 1.0
    baseband_gain: Optional[float] = None

    @property
    def wavelength(self) -> float:
        return wavelength(self.carrier_freq)

    @property
    def lsb(self) -> float:
        """ADC step size in volts."""
        return 2.0 * self.adc_full_scale / 2**self.adc_bits

    def replace(self, **changes) -> "RadarConfig":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        unknown = set(changes) - set(values)
        if unknown:
            raise TypeError(f"unknown RadarConfig field(s): {sorted(unknown)}")
        values.update(changes)
        return RadarConfig(**values)


def wavelength(carrier_freq: float) -> float:
    """Free-space wavelength in meters for a carrier frequency in Hz."""
    if not math.isfinite(carrier_freq) or carrier_freq <= 0:
        raise DomainError(f"carrier_freq must be positive and finite, got {carrier_freq!r}")
    return SPEED_OF_LIGHT / carrier_freq


def _is_power_of_two(n) -> bool:
    return isinstance(n, int) and n > 0 and (n & (n - 1)) == 0


def _positive_finite(value) -> bool:
    try:
        return math.isfinite(value) and value > 0
    except TypeError:
        return False


def config_errors(config: RadarConfig) -> List[str]:
    """Return one message per violated invariant (empty when valid)."""
    errors = []
    if not _positive_finite(config.carrier_freq):
        errors.append(f"carrier_freq must be > 0, got {config.carrier_freq!r}")
    if not _positive_finite(config.adc_rate_sps):
        errors.append(f"adc_rate_sps must be > 0, got {config.adc_rate_sps!r}")
    if not _positive_finite(config.rx_bandwidth_hz):
        errors.append(f"rx_bandwidth_hz must be > 0, got {config.rx_bandwidth_hz!r}")
    if not _positive_finite(config.adc_full_scale):
        errors.append(f"adc_full_scale must be > 0, got {config.adc_full_scale!r}")
    frame_len = config.frame_len
    if isinstance(frame_len, bool) or not _is_power_of_two(frame_len):
        errors.append(f"frame_len not a power of two: {frame_len!r}")
    elif frame_len < 8:
        errors.append(f"frame_len must be >= 8, got {frame_len}")
    bits = config.adc_bits
    if isinstance(bits, bool) or not isinstance(bits, int) or not 4 <= bits <= 24:
        errors.append(f"adc_bits must be an integer in [4, 24], got {bits!r}")
    for name in ("tx_power_dbm", "tx_gain_dbi", "rx_gain_dbi", "noise_figure_db"):
        value = getattr(config, name)
        if not isinstance(value, (int, float)) or not math.isfinite(value):
            errors.append(f"{name} must be finite, got {value!r}")
    if config.baseband_gain is not None and not _positive_finite(config.baseband_gain):
        errors.append(f"baseband_gain must be > 0 when set, got {config.baseband_gain!r}")
    return errors


def validate_config(config: RadarConfig) -> RadarConfig:
    """Return ``config`` unchanged, or raise :class:`ConfigError` listing every violation."""
    errors = config_errors(config)
    if errors:
        raise ConfigError(errors)
    return config
