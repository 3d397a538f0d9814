"""Target motion profiles: radial shuttles, lateral crossings, piecewise paths.

Range-rate sign convention: positive means the target is moving away from
the radar. At a switching instant the right-hand limit is returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .config import DomainError

TRAJECTORY_KINDS = ("radial_shuttle", "crossing", "constant_radial", "piecewise")


@dataclass(frozen=True)
class ShuttleParams:
    near_range_m: float = 0.5
    far_range_m: float = 4.0
    speed_mps: float = 1.0
    dwell_s: float = 1.0
    cycles: int = 1

    def validate(self):
        if not 0 < self.near_range_m < self.far_range_m:
            raise DomainError("shuttle requires 0 < near_range_m < far_range_m")
        if not self.speed_mps > 0:
            raise DomainError("shuttle speed_mps must be > 0")
        if not self.dwell_s >= 0:
            raise DomainError("shuttle dwell_s must be >= 0")
        if int(self.cycles) != self.cycles or self.cycles < 1:
            raise DomainError("shuttle cycles must be an integer >= 1")


@dataclass(frozen=True)
class CrossingParams:
    """Straight-line pass in front of the radar.

    ``passes`` counts one-way traversals: 2 means left to right, then back.
    """

    closest_approach_m: float = 0.5
    speed_mps: float = 1.0
    half_span_m: float = 4.0
    passes: int = 2

    def validate(self):
        if not self.closest_approach_m > 0:
            raise DomainError("crossing closest_approach_m must be > 0")
        if not self.speed_mps > 0:
            raise DomainError("crossing speed_mps must be > 0")
        if not self.half_span_m > 0:
            raise DomainError("crossing half_span_m must be > 0")
        if int(self.passes) != self.passes or self.passes < 1:
            raise DomainError("crossing passes must be an integer >= 1")


@dataclass(frozen=True)
class ConstantRadialParams:
    speed_mps: float = -1.0
    initial_range_m: float = 5.0
    duration_s: float = 1.0

    def validate(self):
        if not self.initial_range_m > 0:
            raise DomainError("initial_range_m must be > 0")
        if not self.duration_s > 0:
            raise DomainError("duration_s must be > 0")
        if not math.isfinite(self.speed_mps):
            raise DomainError("speed_mps must be finite")
        if self.initial_range_m + self.speed_mps * self.duration_s <= 0:
            raise DomainError("constant_radial target would reach the radar within duration_s")


@dataclass(frozen=True)
class PiecewiseParams:
    """Radial path made of constant range-rate segments ``(duration_s, range_rate_mps)``."""

    initial_range_m: float = 5.0
    segments: Tuple[Tuple[float, float], ...] = ((1.0, 0.0),)

    def validate(self):
        if not self.initial_range_m > 0:
            raise DomainError("initial_range_m must be > 0")
        if not self.segments:
            raise DomainError("piecewise trajectory needs at least one segment")
        r = self.initial_range_m
        for duration, rate in self.segments:
            if not duration > 0 or not math.isfinite(rate):
                raise DomainError(f"bad segment ({duration}, {rate})")
            r += duration * rate
            if r <= 0:
                raise DomainError("piecewise target would reach the radar")


Params = Union[ShuttleParams, CrossingParams, ConstantRadialParams, PiecewiseParams]


@dataclass(frozen=True)
class Trajectory:
    kind: str
    params: Params
    duration_s: float
    # radial kinds only: segment start times, start ranges and range-rates
    _starts: Tuple[float, ...] = ()
    _ranges: Tuple[float, ...] = ()
    _rates: Tuple[float, ...] = ()

    @property
    def speed_bound(self) -> float:
        if self.kind == "crossing":
            return self.params.speed_mps
        return max(abs(r) for r in self._rates)

    def range_at(self, t):
        return range_at(self, t)


def _radial(kind, params, initial_range, segments) -> Trajectory:
    starts, ranges, rates = [], [], []
    t, r = 0.0, float(initial_range)
    for duration, rate in segments:
        starts.append(t)
        ranges.append(r)
        rates.append(float(rate))
        t += duration
        r += duration * rate
    return Trajectory(kind, params, t, tuple(starts), tuple(ranges), tuple(rates))


def piecewise_trajectory(p: PiecewiseParams) -> Trajectory:
    p.validate()
    return _radial("piecewise", p, p.initial_range_m, p.segments)


def constant_radial_trajectory(p: ConstantRadialParams) -> Trajectory:
    p.validate()
    return _radial("constant_radial", p, p.initial_range_m, [(p.duration_s, p.speed_mps)])


def radial_shuttle_trajectory(p: ShuttleParams) -> Trajectory:
    """Start at the far point, approach, dwell, depart, dwell; repeat ``cycles`` times."""
    p.validate()
    leg = (p.far_range_m - p.near_range_m) / p.speed_mps
    cycle = [(leg, -p.speed_mps), (p.dwell_s, 0.0), (leg, p.speed_mps), (p.dwell_s, 0.0)]
    segments = [seg for seg in cycle * int(p.cycles) if seg[0] > 0]
    return _radial("radial_shuttle", p, p.far_range_m, segments)


def crossing_trajectory(p: CrossingParams) -> Trajectory:
    p.validate()
    duration = int(p.passes) * 2.0 * p.half_span_m / p.speed_mps
    return Trajectory("crossing", p, duration)


def shuttle_period(p: ShuttleParams) -> float:
    return 2.0 * (p.far_range_m - p.near_range_m) / p.speed_mps + 2.0 * p.dwell_s


def _crossing_state(p: CrossingParams, t):
    pass_time = 2.0 * p.half_span_m / p.speed_mps
    k = np.minimum(np.floor(t / pass_time), p.passes - 1)
    tau = t - k * pass_time
    direction = np.where(k % 2 == 0, 1.0, -1.0)
    x = direction * (-p.half_span_m + p.speed_mps * tau)
    return x, direction * p.speed_mps


def lateral_position(traj: Trajectory, t):
    """Signed lateral offset from boresight and its rate (crossing trajectories only)."""
    if traj.kind != "crossing":
        raise DomainError("lateral_position is only defined for crossing trajectories")
    return _crossing_state(traj.params, np.asarray(t, dtype=float))


def range_at(traj: Trajectory, t):
    """Exact range and range-rate at time ``t`` (scalar or array).

    Returns a ``(range_m, range_rate_mps)`` pair of floats for scalar ``t``
    and of arrays otherwise.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(t_arr)) or np.any(t_arr < 0) or np.any(t_arr > traj.duration_s * (1 + 1e-12)):
        raise DomainError(f"t must lie in [0, {traj.duration_s}]")
    if traj.kind == "crossing":
        d = traj.params.closest_approach_m
        x, xdot = _crossing_state(traj.params, t_arr)
        rng = np.hypot(d, x)
        rate = x * xdot / rng
    else:
        starts = np.asarray(traj._starts)
        idx = np.searchsorted(starts, t_arr, side="right") - 1
        rates = np.asarray(traj._rates)[idx]
        rng = np.asarray(traj._ranges)[idx] + rates * (t_arr - starts[idx])
        rate = rates
    if t_arr.ndim == 0:
        return float(rng), float(rate)
    return rng, rate


def make_trajectory(kind: str, params: Params) -> Trajectory:
    builders = {
        "radial_shuttle": (ShuttleParams, radial_shuttle_trajectory),
        "crossing": (CrossingParams, crossing_trajectory),
        "constant_radial": (ConstantRadialParams, constant_radial_trajectory),
        "piecewise": (PiecewiseParams, piecewise_trajectory),
    }
    if kind not in builders:
        raise DomainError(f"unknown trajectory kind {kind!r}; expected one of {TRAJECTORY_KINDS}")
    cls, build = builders[kind]
    if not isinstance(params, cls):
        raise DomainError(f"{kind} expects {cls.__name__}, got {type(params).__name__}")
    return build(params)
