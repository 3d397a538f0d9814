"""Simulation and signal processing model of a 24 GHz CW Doppler radar."""

from .antenna import (ArrayGeometry, PatternCut, array_directivity, array_field, array_pattern,
                      bend_gain_drop, directivity, element_placement)
from .config import (SPEED_OF_LIGHT, ConfigError, DomainError, RadarConfig, config_errors,
                     validate_config, wavelength)
from .dsp import (Peak, VelocityMap, VelocitySpectrum, detect_peak, max_detectable_velocity,
                  remove_dc, spectrum, velocity_map, velocity_spectrum, window)
from .estimator import DopplerVelocityEstimator
from .kinematics import (ConstantRadialParams, CrossingParams, PiecewiseParams, ShuttleParams,
                         Trajectory, constant_radial_trajectory, crossing_trajectory,
                         piecewise_trajectory, radial_shuttle_trajectory, range_at)
from .link_budget import (LinkBudgetParams, LinkBudgetReport, link_budget, max_range, noise_floor,
                          received_power, snr)
from .synth import IQStream, QuantizedFrames, quantize, synthesize_if

__version__ = "0.1.0"
