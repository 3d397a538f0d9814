"""Radar equation, receiver noise floor and SNR, all evaluated in dB."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .config import THERMAL_NOISE_DENSITY_DBM_HZ, DomainError, RadarConfig, validate_config

_FOUR_PI_CUBED_DB = 30.0 * math.log10(4.0 * math.pi)


@dataclass(frozen=True)
class LinkBudgetParams:
    tx_power_dbm: float
    tx_gain_dbi: float
    rx_gain_dbi: float
    wavelength_m: float
    rcs_dbsm: float
    range_m: Optional[float] = None

    @classmethod
    def from_config(cls, config: RadarConfig, rcs_dbsm: float,
                    range_m: Optional[float] = None) -> "LinkBudgetParams":
        return cls(config.tx_power_dbm, config.tx_gain_dbi, config.rx_gain_dbi,
                   config.wavelength, rcs_dbsm, range_m)


@dataclass(frozen=True)
class LinkBudgetReport:
    received_power_dbm: float
    noise_floor_dbm: float
    snr_db: float


def _check_finite(params: LinkBudgetParams, with_range: bool):
    values = [params.tx_power_dbm, params.tx_gain_dbi, params.rx_gain_dbi,
              params.wavelength_m, params.rcs_dbsm]
    if with_range:
        if params.range_m is None:
            raise DomainError("range_m is required")
        values.append(params.range_m)
    if not all(math.isfinite(v) for v in values):
        raise DomainError(f"link budget parameters must be finite: {params}")
    if params.wavelength_m <= 0:
        raise DomainError(f"wavelength_m must be > 0, got {params.wavelength_m}")
    if with_range and params.range_m <= 0:
        raise DomainError(f"range_m must be > 0, got {params.range_m}")


def _range_independent_dbm(params: LinkBudgetParams) -> float:
    return (params.tx_power_dbm + params.tx_gain_dbi + params.rx_gain_dbi
            + 20.0 * math.log10(params.wavelength_m) + params.rcs_dbsm - _FOUR_PI_CUBED_DB)


def received_power(params: LinkBudgetParams) -> float:
    """Received echo power in dBm for a point target at ``params.range_m``."""
    _check_finite(params, with_range=True)
    return _range_independent_dbm(params) - 40.0 * math.log10(params.range_m)


def received_power_linear_w(params: LinkBudgetParams) -> float:
    """Same quantity as :func:`received_power`, evaluated in watts from the linear equation.

    Only used to cross-check the dB form; it under/overflows long before the dB form does.
    """
    _check_finite(params, with_range=True)
    p_t = 10.0 ** ((params.tx_power_dbm - 30.0) / 10.0)
    g_t = 10.0 ** (params.tx_gain_dbi / 10.0)
    g_r = 10.0 ** (params.rx_gain_dbi / 10.0)
    sigma = 10.0 ** (params.rcs_dbsm / 10.0)
    return (p_t * g_t * g_r * params.wavelength_m**2 * sigma
            / ((4.0 * math.pi) ** 3 * params.range_m**4))


def noise_floor(noise_figure_db: float, bandwidth_hz: float) -> float:
    """Thermal noise floor in dBm: -174 dBm/Hz + NF + 10 log10(B)."""
    if not math.isfinite(bandwidth_hz) or bandwidth_hz <= 0:
        raise DomainError(f"bandwidth_hz must be > 0, got {bandwidth_hz!r}")
    return THERMAL_NOISE_DENSITY_DBM_HZ + noise_figure_db + 10.0 * math.log10(bandwidth_hz)


def snr(received_power_dbm: float, noise_floor_dbm: float) -> float:
    return received_power_dbm - noise_floor_dbm


def max_range(params: LinkBudgetParams, min_snr_db: float, noise_floor_dbm: float) -> float:
    """Range at which the SNR falls to ``min_snr_db``. ``params.range_m`` is ignored."""
    _check_finite(params, with_range=False)
    if not math.isfinite(min_snr_db):
        if min_snr_db > 0:
            return 0.0
        raise DomainError(f"min_snr_db must be finite, got {min_snr_db!r}")
    excess_db = _range_independent_dbm(params) - noise_floor_dbm - min_snr_db
    return 10.0 ** (excess_db / 40.0)


def link_budget(config: RadarConfig, rcs_dbsm: float, range_m: float) -> LinkBudgetReport:
    validate_config(config)
    p_r = received_power(LinkBudgetParams.from_config(config, rcs_dbsm, range_m))
    p_n = noise_floor(config.noise_figure_db, config.rx_bandwidth_hz)
    return LinkBudgetReport(p_r, p_n, snr(p_r, p_n))
