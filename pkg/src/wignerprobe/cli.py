"""Command-line front end: run preset or custom scenarios, emit artifacts."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .detector import write_matrix_csv, build_convolution_matrix, loss_matrix
from .mismatch import write_amplitude_csv
from .montecarlo import scan, write_points_json, write_scan_csv
from .scenarios import PRESET_NAMES, load_scenario_file, preset, scenario_to_dict


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wignerprobe",
        description="Phase-space probing of Fock states with a "
                    "time-multiplexed click detector.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scan scenario and write artifacts")
    run.add_argument("--scenario", type=Path, help="flat-key JSON scenario file")
    run.add_argument("--preset", choices=[n for n in PRESET_NAMES if n != "custom"],
                     help="named scenario preset")
    run.add_argument("--fock", type=int, choices=(1, 2),
                     help="override the input Fock state")
    run.add_argument("--seed", type=int, help="override the RNG seed")
    run.add_argument("--events", type=int, help="events per run")
    run.add_argument("--runs", type=int, help="runs per grid point")
    run.add_argument("--alpha-max", type=float, help="grid upper end")
    run.add_argument("--alpha-step", type=float, help="grid step")
    run.add_argument("--out", type=Path, default=Path("."),
                     help="output directory (created if absent)")
    run.add_argument("--dump-matrices", action="store_true",
                     help="also write the C and L matrices as CSV")
    run.set_defaults(func=cmd_run)

    diag = sub.add_parser("diagnose-overlap",
                          help="tabulate oscillation amplitudes vs overlap")
    diag.add_argument("--transmittance", type=float, default=0.95,
                      help="displacing beamsplitter transmittance")
    diag.add_argument("--m-min", type=float, default=0.0)
    diag.add_argument("--m-max", type=float, default=1.0)
    diag.add_argument("--m-step", type=float, default=0.05)
    diag.add_argument("--out", type=Path, required=True, help="output CSV path")
    diag.set_defaults(func=cmd_diagnose)

    return parser


def cmd_run(args) -> int:
    if args.scenario is not None and args.preset is not None:
        print("choose either --scenario or --preset, not both", file=sys.stderr)
        return 2
    if args.scenario is not None:
        scn = load_scenario_file(args.scenario)
        name = "custom"
    elif args.preset is not None:
        scn = preset(args.preset)
        name = args.preset
    else:
        print("one of --scenario or --preset is required", file=sys.stderr)
        return 2

    overrides = {}
    if args.fock is not None:
        overrides["input_fock_m"] = args.fock
    if args.seed is not None:
        overrides["rng_seed"] = args.seed
    if args.events is not None:
        overrides["events_per_run"] = args.events
    if args.runs is not None:
        overrides["runs"] = args.runs
    if args.alpha_max is not None or args.alpha_step is not None:
        amax = args.alpha_max if args.alpha_max is not None else max(scn.alpha_grid)
        step = args.alpha_step if args.alpha_step is not None else 0.1
        overrides["alpha_grid"] = tuple(np.round(np.arange(0.0, amax + step / 2, step), 10))
    if overrides:
        scn = replace(scn, **overrides)

    out = args.out
    out.mkdir(parents=True, exist_ok=True)

    result = scan(scn)
    write_scan_csv(out / "scan.csv", result.samples)
    write_points_json(out / "points.json", result.samples)

    origin = result.samples[0]
    summary = {
        "preset": name,
        "boundary_alpha": result.boundary,
        "wigner_at_origin_mean": origin.W_reconstructed_mean,
        "wigner_at_origin_std": origin.W_reconstructed_std,
        "reliable_points": sum(1 for s in result.samples
                               if s.reliability.reliable),
    }
    with open(out / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")

    if args.dump_matrices:
        B = scn.tmd_reconstruction.bins
        C = build_convolution_matrix(scn.tmd_generation, B)
        write_matrix_csv(C.entries, out / "convolution_generation.csv")
        C_rec = build_convolution_matrix(scn.tmd_reconstruction, B)
        write_matrix_csv(C_rec.entries, out / "convolution_reconstruction.csv")
        L = loss_matrix(scn.eta_total, B + 1)
        write_matrix_csv(L.entries, out / "loss.csv",
                         row_label="detected", col_label="incident")

    print(json.dumps(summary))
    return 0


def cmd_diagnose(args) -> int:
    grid = np.round(np.arange(args.m_min, args.m_max + args.m_step / 2,
                              args.m_step), 10)
    grid = [m for m in grid if 0.0 <= m <= 1.0]
    if not grid:
        print("overlap grid is empty", file=sys.stderr)
        return 2
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_amplitude_csv(args.out, args.transmittance, grid)
    print(f"wrote {args.out}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
