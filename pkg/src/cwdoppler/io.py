"""Scenario files, IF recordings and velocity-map outputs.

Scenario format::

    # comment
    [radar]
    carrier_freq = 24.0e9
    [trajectory]
    kind = radial_shuttle
    speed = 2.5
    [run]
    noise_seed = 7

Trajectory keys are the parameter names without their unit suffix
(``near_range``, ``speed``, ``dwell`` ...). Piecewise segments are written
``segments = 3.5:-1.0, 1.0:0.0`` (duration:range_rate pairs).
"""

from __future__ import annotations

import dataclasses
import io
import re
from dataclasses import dataclass, field
from typing import IO, Dict, Optional

import numpy as np

from .config import ConfigError, DomainError, RadarConfig, validate_config
from .dsp import DEFAULT_THRESHOLD, INTERPOLATION_KINDS, WINDOW_KINDS, VelocityMap, VelocitySpectrum
from .kinematics import (ConstantRadialParams, CrossingParams, PiecewiseParams, ShuttleParams,
                         Trajectory, make_trajectory)
from .synth import QuantizedFrames, code_range

HEATMAP_DYNAMIC_RANGE_DB = 120.0

_PARAM_CLASSES = {
    "radial_shuttle": ShuttleParams,
    "crossing": CrossingParams,
    "constant_radial": ConstantRadialParams,
    "piecewise": PiecewiseParams,
}
_UNIT_SUFFIX = re.compile(r"_(m|mps|s)$")


class ScenarioError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class RecordingError(ValueError):
    def __init__(self, message: str, row: Optional[int] = None):
        self.row = row
        super().__init__(f"row {row}: {message}" if row is not None else message)


@dataclass(frozen=True)
class RunSettings:
    n_frames: Optional[int] = None  # None: every whole frame of the trajectory
    noise_seed: int = 0
    include_noise: bool = True
    window: str = "hann"
    threshold_factor: float = DEFAULT_THRESHOLD
    interpolation: str = "parabolic"
    rcs_dbsm: float = 0.0


@dataclass(frozen=True)
class Scenario:
    radar: RadarConfig
    trajectory: Trajectory
    run: RunSettings = field(default_factory=RunSettings)


def _parse_bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_int(text: str) -> int:
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"not an integer: {text!r}")
    return int(value)


def _parse_optional_float(text: str):
    return None if text.lower() == "none" else float(text)


def _parse_segments(text: str):
    segments = []
    for part in text.split(","):
        duration, _, rate = part.strip().partition(":")
        segments.append((float(duration), float(rate)))
    return tuple(segments)


_RADAR_PARSERS = {f.name: float for f in dataclasses.fields(RadarConfig)}
_RADAR_PARSERS.update(frame_len=_parse_int, adc_bits=_parse_int, baseband_gain=_parse_optional_float)
_RUN_PARSERS = {
    "n_frames": _parse_int, "noise_seed": _parse_int, "include_noise": _parse_bool,
    "window": str, "threshold_factor": float, "interpolation": str, "rcs_dbsm": float,
}


def _trajectory_keys(cls) -> Dict[str, tuple]:
    keys = {}
    for f in dataclasses.fields(cls):
        if f.name == "segments":
            parser = _parse_segments
        elif f.name in ("cycles", "passes"):
            parser = _parse_int
        else:
            parser = float
        keys[_UNIT_SUFFIX.sub("", f.name)] = (f.name, parser)
    return keys


def parse_scenario(text: str) -> Scenario:
    """Parse scenario text; unknown or duplicate keys are errors."""
    sections: Dict[str, Dict[str, tuple]] = {"radar": {}, "trajectory": {}, "run": {}}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ScenarioError(f"malformed section header {raw.strip()!r}", lineno)
            current = line[1:-1].strip()
            if current not in sections:
                raise ScenarioError(f"unknown section [{current}]", lineno)
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ScenarioError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        if current is None:
            raise ScenarioError("key outside of any section", lineno)
        if key in sections[current]:
            raise ScenarioError(f"duplicate key {key!r} in [{current}]", lineno)
        sections[current][key] = (value, lineno)

    radar = _build(sections["radar"], _RADAR_PARSERS, "radar")
    try:
        config = validate_config(RadarConfig(**radar))
    except ConfigError as exc:
        raise ScenarioError(f"invalid [radar] settings: {exc}") from exc

    traj_items = dict(sections["trajectory"])
    if "kind" not in traj_items:
        raise ScenarioError("[trajectory] needs a 'kind'")
    kind, kind_line = traj_items.pop("kind")
    if kind not in _PARAM_CLASSES:
        raise ScenarioError(f"unknown trajectory kind {kind!r}", kind_line)
    cls = _PARAM_CLASSES[kind]
    keys = _trajectory_keys(cls)
    values = {}
    for key, (value, lineno) in traj_items.items():
        if key not in keys:
            raise ScenarioError(f"unknown key {key!r} for trajectory kind {kind}", lineno)
        name, parser = keys[key]
        values[name] = _convert(parser, value, key, lineno)
    try:
        trajectory = make_trajectory(kind, cls(**values))
    except DomainError as exc:
        raise ScenarioError(f"invalid [trajectory]: {exc}") from exc

    run = RunSettings(**_build(sections["run"], _RUN_PARSERS, "run"))
    if run.n_frames is not None and run.n_frames < 1:
        raise ScenarioError("n_frames must be >= 1")
    if run.window not in WINDOW_KINDS:
        raise ScenarioError(f"window must be one of {WINDOW_KINDS}")
    if run.interpolation not in INTERPOLATION_KINDS:
        raise ScenarioError(f"interpolation must be one of {INTERPOLATION_KINDS}")
    if not run.threshold_factor > 0:
        raise ScenarioError("threshold_factor must be > 0")
    if run.noise_seed < 0:
        raise ScenarioError("noise_seed must be >= 0")
    return Scenario(config, trajectory, run)


def _convert(parser, value, key, lineno):
    try:
        return parser(value)
    except ValueError as exc:
        raise ScenarioError(f"bad value for {key!r}: {exc}", lineno) from exc


def _build(items, parsers, section):
    out = {}
    for key, (value, lineno) in items.items():
        if key not in parsers:
            raise ScenarioError(f"unknown key {key!r} in [{section}]", lineno)
        out[key] = _convert(parsers[key], value, key, lineno)
    return out


def read_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())


# -- IF recordings ---------------------------------------------------------

def _format_value(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_if_recording(frames: QuantizedFrames, sink: IO[str]):
    """CSV of ADC codes with a ``# key=value`` header describing the RadarConfig."""
    for f in dataclasses.fields(RadarConfig):
        sink.write(f"# {f.name}={_format_value(getattr(frames.config, f.name))}\n")
    sink.write(f"# clip_count={frames.clip_count}\n")
    sink.write("frame,sample,i,q\n")
    codes = np.asarray(frames.codes)
    lines = []
    for k in range(codes.shape[0]):
        for n in range(codes.shape[1]):
            lines.append(f"{k},{n},{int(codes[k, n, 0])},{int(codes[k, n, 1])}\n")
    sink.write("".join(lines))


def read_if_recording(source: IO[str]) -> QuantizedFrames:
    header: Dict[str, str] = {}
    rows = []
    seen_columns = False
    for rowno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if seen_columns:
                raise RecordingError("comment after the column header", rowno)
            key, sep, value = line[1:].strip().partition("=")
            if not sep:
                raise RecordingError(f"malformed header line {line!r}", rowno)
            header[key.strip()] = value.strip()
            continue
        if not seen_columns:
            if line.replace(" ", "") != "frame,sample,i,q":
                raise RecordingError("expected column header 'frame,sample,i,q'", rowno)
            seen_columns = True
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise RecordingError(f"expected 4 fields, got {len(parts)}", rowno)
        try:
            rows.append((rowno,) + tuple(int(p) for p in parts))
        except ValueError:
            raise RecordingError(f"non-integer field in {line!r}", rowno) from None
    if not seen_columns:
        raise RecordingError("missing column header 'frame,sample,i,q'")
    if not rows:
        raise RecordingError("no frames")

    config = _config_from_header(header)
    clip_count = int(header.get("clip_count", "0"))
    n = config.frame_len
    if len(rows) % n:
        raise RecordingError(f"{len(rows)} samples is not a whole number of {n}-sample frames")
    lo, hi = code_range(config.adc_bits)
    codes = np.empty((len(rows) // n, n, 2), dtype=np.int32)
    for idx, (rowno, frame, sample, i, q) in enumerate(rows):
        if frame != idx // n or sample != idx % n:
            raise RecordingError(
                f"non-contiguous index (frame {frame}, sample {sample}); "
                f"expected ({idx // n}, {idx % n})", rowno)
        if not (lo <= i <= hi and lo <= q <= hi):
            raise RecordingError(f"code out of range [{lo}, {hi}] for {config.adc_bits} bits", rowno)
        codes[frame, sample] = (i, q)
    return QuantizedFrames(codes, config, clip_count)


def _config_from_header(header: Dict[str, str]) -> RadarConfig:
    values = {}
    for key, text in header.items():
        if key == "clip_count":
            continue
        if key not in _RADAR_PARSERS:
            raise RecordingError(f"unknown header key {key!r}")
        try:
            values[key] = _RADAR_PARSERS[key](text)
        except ValueError as exc:
            raise RecordingError(f"bad header value for {key!r}: {exc}") from exc
    try:
        return validate_config(RadarConfig(**values))
    except ConfigError as exc:
        raise RecordingError(f"invalid radar config in header: {exc}") from exc


# -- velocity maps ---------------------------------------------------------

def write_velocity_map(vmap: VelocityMap, csv_sink: IO[str], heatmap_sink: Optional[IO[bytes]] = None):
    """First CSV row is the velocity axis, then one row of magnitudes per frame."""
    if not vmap.rows:
        raise DomainError("empty velocity map")
    csv_sink.write(",".join(repr(float(v)) for v in vmap.velocities) + "\n")
    for row in vmap.rows:
        csv_sink.write(",".join(repr(float(m)) for m in row.magnitudes) + "\n")
    if heatmap_sink is not None:
        heatmap_sink.write(heatmap_pgm(vmap.magnitudes))


def read_velocity_map(source: IO[str]) -> VelocityMap:
    lines = [ln.strip() for ln in source if ln.strip()]
    if len(lines) < 2:
        raise RecordingError("velocity map needs an axis row and at least one frame")
    axis = np.array([float(v) for v in lines[0].split(",")])
    rows = []
    for k, line in enumerate(lines[1:]):
        mags = np.array([float(v) for v in line.split(",")])
        if len(mags) != len(axis):
            raise RecordingError(f"expected {len(axis)} values", k + 2)
        rows.append(VelocitySpectrum(axis, mags, k))
    return VelocityMap(rows)


def heatmap_pgm(magnitudes) -> bytes:
    """8-bit binary PGM: log-compressed, min-max normalized, one row per frame."""
    mags = np.asarray(magnitudes, dtype=float)
    height, width = mags.shape
    top = mags.max()
    if top > 0:
        floor = top * 10.0 ** (-HEATMAP_DYNAMIC_RANGE_DB / 20.0)
        level = 20.0 * np.log10(np.maximum(mags, floor))
    else:
        level = np.zeros_like(mags)
    span = level.max() - level.min()
    if span > 0:
        pixels = np.round(255.0 * (level - level.min()) / span)
    else:
        pixels = np.zeros_like(level)
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    return header + pixels.astype(np.uint8).tobytes()


def read_pgm(data: bytes) -> np.ndarray:
    """Read the PGM layout written by :func:`heatmap_pgm` (no header comments)."""
    fields, pos = [], 0
    while len(fields) < 4:
        while data[pos:pos + 1].isspace():
            pos += 1
        end = pos
        while end < len(data) and not data[end:end + 1].isspace():
            end += 1
        fields.append(data[pos:end])
        pos = end
    pos += 1  # exactly one whitespace byte precedes the raster
    if fields[0] != b"P5":
        raise RecordingError("not a binary PGM")
    width, height, maxval = (int(f) for f in fields[1:])
    if maxval != 255:
        raise RecordingError("only 8-bit PGM is supported")
    pixels = np.frombuffer(data[pos:pos + width * height], dtype=np.uint8)
    return pixels.reshape(height, width)


def dumps_if_recording(frames: QuantizedFrames) -> str:
    buf = io.StringIO()
    write_if_recording(frames, buf)
    return buf.getvalue()


def run_scenario(scenario: Scenario, seed: Optional[int] = None):
    """Synthesize, quantize and process a scenario; returns ``(frames, velocity_map)``."""
    from .dsp import velocity_map
    from .synth import quantize, synthesize_if

    config, run = scenario.radar, scenario.run
    n_samples = None if run.n_frames is None else run.n_frames * config.frame_len
    stream = synthesize_if(scenario.trajectory, config,
                           noise_seed=run.noise_seed if seed is None else seed,
                           include_noise=run.include_noise, rcs_dbsm=run.rcs_dbsm,
                           n_samples=n_samples)
    frames = quantize(stream, config)
    vmap = velocity_map(frames, config, run.window, run.threshold_factor, run.interpolation)
    return frames, vmap
