"""Command-line front end.

    tfsdc capacity --preset ppln
    tfsdc sweep --preset ppktp --n-grid 10:10000:25 --out results/
    tfsdc simulate --preset ppln --trials 1000000 --c 16 --d 8
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import capacity as cap
from . import io
from .combs import physical_spectrum, physical_temporal_correlation
from .presets import PresetNotFoundError, list_presets, load_preset
from .protocol import EncodingParams, marginal_counts, monte_carlo_channel

COMMANDS = ("spectra", "correlation", "sweep", "capacity", "simulate", "compare", "selftest")


class UsageError(Exception):
    pass


class OutputPathError(Exception):
    pass


# exit statuses: argparse uses 2 for bad flags, validation failures share it
EXIT_INVALID, EXIT_PRESET, EXIT_OUTPUT = 2, 3, 4


def parse_n_grid(text: str) -> list[int]:
    """``min:max:points`` (log-spaced) or a comma list of sizes."""
    try:
        if ":" in text:
            lo, hi, pts = text.split(":")
            lo, hi, pts = int(float(lo)), int(float(hi)), int(pts)
            if lo < 1 or hi < lo or pts < 1:
                raise ValueError
            return cap.default_n_grid(lo, hi, pts)
        grid = sorted({int(float(x)) for x in text.split(",")})
        if not grid or grid[0] < 1:
            raise ValueError
        return grid
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid N grid {text!r}; expected min:max:points") from None


def parse_override(text: str) -> tuple[str, str]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"override {text!r} must look like key=value")
    key, value = text.split("=", 1)
    return key.strip(), value.strip()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--preset", default="ppln",
                        help=f"preset name ({', '.join(list_presets())}) or path to an .ini file")
    common.add_argument("--set", dest="overrides", action="append", type=parse_override, default=[],
                        metavar="KEY=VALUE", help="override one preset field (repeatable)")
    common.add_argument("--out", type=Path, default=Path("."), help="output directory")
    common.add_argument("--format", choices=("csv", "svg", "both"), default="both")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="tfsdc", description=__doc__.splitlines()[0] if __doc__ else None)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("spectra", parents=[common], help="joint spectral intensity (CSV + figure)")
    p = sub.add_parser("correlation", parents=[common], help="relative-delay coincidence density")
    p.add_argument("--jitter", type=float, default=None, help="detector jitter FWHM in s")
    p = sub.add_parser("sweep", parents=[common], help="capacity versus number of bins")
    p.add_argument("--n-grid", type=parse_n_grid, default=None, metavar="MIN:MAX:POINTS")
    sub.add_parser("capacity", parents=[common], help="saturated frequency + time capacity")
    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo the full protocol")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--c", type=int, default=16, help="frequency symbols")
    p.add_argument("--d", type=int, default=8, help="time symbols per comb period")
    p.add_argument("--n", type=int, default=1, help="frequency bin = FSR / n")
    p.add_argument("--truncation", type=int, default=32)
    sub.add_parser("compare", parents=[common], help="capacity comparison table")
    sub.add_parser("selftest", parents=[common], help="run the invariant suite")
    return parser


def _preset(args):
    preset = load_preset(args.preset)
    if args.overrides:
        preset = preset.with_overrides(**dict(args.overrides))
    return preset


def _prepare_out(path: Path) -> Path:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputPathError(f"cannot create output directory {path}: {exc.strerror}") from None
    if not os.access(path, os.W_OK):
        raise OutputPathError(f"output directory {path} is not writable")
    return path


def _want(args, kind):
    return args.format in (kind, "both")


def cmd_spectra(args, preset, out):
    from . import plotting

    dens = physical_spectrum(preset.envelope()).normalized()
    stem = out / f"spectrum_{preset.name}"
    if _want(args, "csv"):
        io.write_density(stem.with_suffix(".csv"), dens)
    if _want(args, "svg"):
        plotting.plot_spectrum(dens, stem.with_suffix(".svg"),
                               f"{preset.name}: B_PM {preset.b_pm_hz / 1e9:g} GHz, FSR {preset.fsr_hz / 1e9:g} GHz")
    print(f"spectrum: {dens.coordinates.size} points, step {dens.step / 1e9:.3f} GHz -> {stem}.*")


def cmd_correlation(args, preset, out):
    from . import plotting

    jitter = preset.jitter_fwhm_s if args.jitter is None else args.jitter
    dens = physical_temporal_correlation(preset.envelope(), jitter).normalized()
    stem = out / f"correlation_{preset.name}"
    if _want(args, "csv"):
        io.write_density(stem.with_suffix(".csv"), dens)
    if _want(args, "svg"):
        plotting.plot_correlation(dens, stem.with_suffix(".svg"),
                                  f"{preset.name}: FSR {preset.fsr_hz / 1e9:g} GHz, jitter {jitter * 1e12:g} ps")
    print(f"correlation: {dens.coordinates.size} points, step {dens.step * 1e12:.3f} ps -> {stem}.*")


def cmd_sweep(args, preset, out):
    from . import plotting

    grid = args.n_grid or cap.default_n_grid()
    curves = {}
    for domain in ("frequency", "time"):
        sweep = cap.capacity_sweep(preset, domain, grid)
        curves[domain] = sweep
        if _want(args, "csv"):
            io.write_sweep(out / f"sweep_{preset.name}_{domain}.csv", sweep)
        print(f"{domain:9s} N={sweep[-1][0]:>6d}: {sweep[-1][1]:.3f} bits")
    if _want(args, "svg"):
        plotting.plot_sweep(curves, out / f"sweep_{preset.name}.svg", f"{preset.name} channel capacity")


def cmd_capacity(args, preset, out):
    tot = cap.total_capacity(preset)
    print(tot.summary())
    print(f"  (N=1e3: freq {tot.freq_bits_coarse:.4f}, time {tot.time_bits_coarse:.4f}; "
          f"N=1e4 unrounded total {tot.total_bits:.4f} bits)")
    print(f"  sigma_f,total {preset.sigma_f_total / 1e9:.3f} GHz, sigma_t,total {preset.sigma_t_total * 1e12:.2f} ps")
    if _want(args, "csv"):
        io.write_rows(out / f"capacity_{preset.name}.csv",
                      ["channel [label]", "capacity [bits/photon]"],
                      [("frequency", tot.freq_bits), ("time", tot.time_bits), ("total", tot.total_bits),
                       ("messages", tot.message_count)])


def cmd_simulate(args, preset, out):
    from . import plotting

    if args.trials < 1:
        raise UsageError(f"--trials must be >= 1, got {args.trials}")
    params = EncodingParams(d=args.d, n=args.n, c=args.c)
    comb = preset.comb_spec(args.truncation)
    counts = monte_carlo_channel(params, preset.noise_model(args.seed), comb, args.trials)
    mi = cap.mutual_information(counts)
    f_cap = cap.symmetric_capacity(cap.transition_matrix(
        cap.ChannelSpec(params.c, preset.fsr_hz / params.n, preset.sigma_f_total))).capacity_bits
    t_cap = cap.symmetric_capacity(cap.transition_matrix(
        cap.ChannelSpec(params.d, preset.period_s / params.d, preset.sigma_t_total, domain="time"))).capacity_bits
    err = 1 - np.trace(counts) / counts.sum()
    stem = out / f"simulate_{preset.name}"
    if _want(args, "csv"):
        io.write_counts(stem.with_suffix(".csv"), counts)
    if _want(args, "svg"):
        plotting.plot_transition_counts(marginal_counts(counts, params, "frequency"),
                                        out / f"simulate_{preset.name}_frequency.svg", "frequency marginal")
        plotting.plot_transition_counts(marginal_counts(counts, params, "time"),
                                        out / f"simulate_{preset.name}_time.svg", "time marginal")
    print(f"{args.trials} trials, {params.message_count} messages, symbol error rate {err:.4f}")
    print(f"plug-in mutual information {mi:.4f} bits; analytic capacity {f_cap + t_cap:.4f} bits")


def cmd_compare(args, preset, out):
    from . import plotting

    rows = cap.comparison_table(preset)
    print(cap.render_table(rows))
    for k, v in cap.comparison_ratios(rows).items():
        print(f"{k}: {v:.2f}")
    if _want(args, "csv"):
        io.write_table(out / "comparison.csv", rows)
    if _want(args, "svg"):
        plotting.plot_comparison(rows, out / "comparison.svg")


def cmd_selftest(args, preset, out):
    from .selfcheck import run_all

    if not run_all():
        raise UsageError("selftest failed")


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        preset = _preset(args)
        out = _prepare_out(args.out) if args.command != "selftest" else args.out
        HANDLERS[args.command](args, preset, out)
    except PresetNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRESET
    except OutputPathError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OUTPUT
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"error: invalid parameter: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return 0


if __name__ == "__main__":
    sys.exit(main())
