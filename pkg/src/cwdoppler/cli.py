"""Command-line entry point: ``cwdoppler <subcommand> ...``."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .antenna import ArrayGeometry, array_directivity
from .config import RadarConfig
from .dsp import count_transitions, detection_gaps, max_detectable_velocity, sign_groups, velocity_map
from .io import heatmap_pgm, read_if_recording, read_scenario, run_scenario, write_if_recording, write_velocity_map
from .link_budget import LinkBudgetParams, noise_floor, received_power, snr

WINDOW_ALIASES = {"rect": "rectangular", "hann": "hann"}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cwdoppler", description="CW Doppler radar model")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="synthesize and process a scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out-if")
    p.add_argument("--out-map")
    p.add_argument("--heatmap")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("process", help="process a recorded IF file")
    p.add_argument("--if", dest="if_path", required=True)
    p.add_argument("--out-map")
    p.add_argument("--heatmap")
    p.add_argument("--window", choices=sorted(WINDOW_ALIASES), default="hann")
    p.add_argument("--threshold", type=float, default=8.0)

    p = sub.add_parser("linkbudget", help="received power, noise floor and SNR")
    p.add_argument("--pt", type=float, required=True, help="TX power, dBm")
    p.add_argument("--gt", type=float, required=True, help="TX gain, dBi")
    p.add_argument("--gr", type=float, required=True, help="RX gain, dBi")
    p.add_argument("--fc", type=float, required=True, help="carrier, Hz")
    p.add_argument("--rcs", type=float, required=True, help="RCS, dBsm")
    p.add_argument("--range", type=float, required=True, help="target range, m")
    p.add_argument("--nf", type=float, default=10.0, help="noise figure, dB")
    p.add_argument("--bw", type=float, default=1500.0, help="receiver bandwidth, Hz")

    p = sub.add_parser("vmax", help="maximum unambiguous velocity")
    p.add_argument("--fs", type=float, required=True)
    p.add_argument("--fc", type=float, required=True)

    p = sub.add_parser("antenna", help="directivity cut of the patch array")
    p.add_argument("--elements", type=int, required=True)
    p.add_argument("--pitch", type=float, required=True)
    p.add_argument("--bend-radius", type=float)
    p.add_argument("--fc", type=float, required=True)
    p.add_argument("--out", required=True)
    return parser


def _write_outputs(vmap, out_map, heatmap):
    if out_map is None and heatmap is None:
        return
    csv_fh = open(out_map, "w", newline="") if out_map else None
    pgm_fh = open(heatmap, "wb") if heatmap else None
    try:
        if csv_fh is None:
            pgm_fh.write(heatmap_pgm(vmap.magnitudes))
        else:
            write_velocity_map(vmap, csv_fh, pgm_fh)
    finally:
        for fh in (csv_fh, pgm_fh):
            if fh is not None:
                fh.close()


def _summarize(vmap, clip_count):
    track = vmap.track()
    groups = sign_groups(track)
    print(f"frames={len(vmap.rows)}")
    print(f"detections={int(np.count_nonzero(~np.isnan(track)))}")
    print(f"gaps={len(detection_gaps(track))}")
    print(f"sign_groups={len(groups)}")
    print(f"approach_to_depart={count_transitions(groups)}")
    print(f"clipped_values={clip_count}")


def _cmd_simulate(args):
    scenario = read_scenario(args.scenario)
    frames, vmap = run_scenario(scenario, seed=args.seed)
    if args.out_if:
        with open(args.out_if, "w", newline="") as fh:
            write_if_recording(frames, fh)
    _write_outputs(vmap, args.out_map, args.heatmap)
    _summarize(vmap, frames.clip_count)


def _cmd_process(args):
    with open(args.if_path, newline="") as fh:
        frames = read_if_recording(fh)
    vmap = velocity_map(frames, frames.config, WINDOW_ALIASES[args.window], args.threshold)
    _write_outputs(vmap, args.out_map, args.heatmap)
    _summarize(vmap, frames.clip_count)


def _cmd_linkbudget(args):
    config = RadarConfig(carrier_freq=args.fc)
    params = LinkBudgetParams(args.pt, args.gt, args.gr, config.wavelength, args.rcs, args.range)
    p_r = received_power(params)
    p_n = noise_floor(args.nf, args.bw)
    print(f"received_power_dbm={p_r:.4f}")
    print(f"noise_floor_dbm={p_n:.4f}")
    print(f"snr_db={snr(p_r, p_n):.4f}")


def _cmd_vmax(args):
    config = RadarConfig(carrier_freq=args.fc, adc_rate_sps=args.fs)
    print(f"v_max={max_detectable_velocity(config):.6f}")


def _cmd_antenna(args):
    geom = ArrayGeometry(n_elements=args.elements, pitch_m=args.pitch, bend_radius_m=args.bend_radius)
    result = array_directivity(geom, frequency_hz=args.fc)
    with open(args.out, "w", newline="") as fh:
        fh.write("angle_deg,dbi\n")
        for angle, dbi in zip(np.rad2deg(result.cut.angles_rad), result.cut.values):
            fh.write(f"{angle:.2f},{dbi:.6f}\n")
    print(f"peak_dbi={result.peak_dbi:.4f}")
    print(f"peak_angle_deg={np.rad2deg(result.peak_angle_rad):.2f}")


COMMANDS = {
    "simulate": _cmd_simulate,
    "process": _cmd_process,
    "linkbudget": _cmd_linkbudget,
    "vmax": _cmd_vmax,
    "antenna": _cmd_antenna,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)  # exits with status 2 on usage errors
    try:
        COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
