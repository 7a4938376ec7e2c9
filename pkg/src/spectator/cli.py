"""Command-line front end.

    spectator amp-sweep   [--config F] [--seed N] [--out DIR] [--points a:b:n] [--workers N]
    spectator freq-sweep  [--config F] [--seed N] [--out DIR] [--points a:b:n] [--workers N]
    spectator phase-map   [--config F] [--out DIR] [--points a:b:n]
    spectator gain        [--config F] [--seed N] [--shots N]
    spectator fit         --model NAME --input CSV [--out DIR]
    spectator histogram   --input CSV [--out DIR]

Sweep amplitudes are in mG and frequencies in Hz.  On any failure a
single ``error:`` line goes to stderr, no output file is left behind and
the exit code is 1.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import load_config, parse_points
from .csvio import CsvTable, read_columns
from .errors import ConfigError, DomainError, FitError, IntegrationError
from .fitting import MODELS, discrimination_fidelity, fit_poisson_mixture
from .montecarlo import amplitude_sweep, frequency_sweep, gain_statistics
from .noise import phase_correlation_spectrum
from .physics import MILLIGAUSS

SWEEP_COLUMNS = ("x", "sigma_x_on", "sigma_x_off", "stderr_on", "stderr_off")
PHASE_MAP_COLUMNS = ("freq", "mean_abs_phi_s", "mean_abs_phi_d", "mean_ratio")


def _settings(args):
    cfg, sweep = load_config(args.config)
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, seed=args.seed)
    return cfg, sweep


def _out_path(args, name):
    out = Path(args.out)
    if not out.is_dir():
        raise FileNotFoundError(f"output directory does not exist: {out}")
    return out / name


def _sweep_table(result):
    return CsvTable(SWEEP_COLUMNS, result.rows())


def cmd_amp_sweep(args):
    cfg, sweep = _settings(args)
    rms_mg = parse_points(args.points or sweep.amplitudes)
    if np.any(rms_mg < 0):
        raise DomainError("amplitudes must be non-negative")
    result = amplitude_sweep(cfg, rms_mg * MILLIGAUSS, freq=sweep.freq, workers=args.workers)
    path = _out_path(args, "amp_sweep.csv")
    _sweep_table(result).write(path)


def cmd_freq_sweep(args):
    cfg, sweep = _settings(args)
    freqs = parse_points(args.points or sweep.frequencies)
    result = frequency_sweep(cfg, freqs, rms=sweep.rms, rescale=sweep.freq_rescale,
                             workers=args.workers)
    path = _out_path(args, "freq_sweep.csv")
    _sweep_table(result).write(path)


def cmd_phase_map(args):
    cfg, sweep = _settings(args)
    freqs = parse_points(args.points or sweep.phase_map_frequencies)
    spectrum = phase_correlation_spectrum(
        freqs, cfg.data_setup(), cfg.spectator_setup(), sweep.rms, cfg.grid_resolution)
    excluded = sum(p.n_excluded for p in spectrum)
    if excluded:
        print(f"note: {excluded} grid points with zero spectator phase excluded from the ratio",
              file=sys.stderr)
    rows = [(p.freq, p.mean_abs_phi_s, p.mean_abs_phi_d, p.mean_ratio) for p in spectrum]
    path = _out_path(args, "phase_map.csv")
    CsvTable(PHASE_MAP_COLUMNS, rows).write(path)


def cmd_gain(args):
    cfg, sweep = _settings(args)
    shots = args.shots if args.shots is not None else sweep.gain_shots
    if shots < 2:
        raise DomainError("--shots must be at least 2")
    mean, err = gain_statistics(cfg, shots)
    print(f"f_on = {mean:.6f} ± {err:.6f}")


def cmd_fit(args):
    fitter = MODELS[args.model][2]
    xs, ys = read_columns(args.input, 2)
    fit = fitter(np.array(xs), np.array(ys))
    if not fit.converged:
        raise FitError(f"{args.model} fit did not converge: {fit.message}")
    rows = [(k, v) for k, v in fit.params.items()]
    rows += [("residual_norm", fit.residual_norm), ("converged", fit.converged),
             ("iterations", fit.iterations)]
    path = _out_path(args, "fit.csv")
    CsvTable(("name", "value"), rows).write(path)


def cmd_histogram(args):
    counts, freqs = read_columns(args.input, 2)
    hist = {}
    for k, f in zip(counts, freqs):
        if k != int(k) or f != int(f):
            raise DomainError("histogram columns must be integer count, integer frequency")
        hist[int(k)] = hist.get(int(k), 0) + int(f)
    mix = fit_poisson_mixture(hist)
    rows = [("lambda0", mix.lambda0), ("lambda1", mix.lambda1), ("weight", mix.weight),
            ("threshold", mix.threshold), ("eta", discrimination_fidelity(mix)),
            ("converged", mix.converged), ("bimodal", mix.bimodal)]
    path = _out_path(args, "histogram.csv")
    CsvTable(("name", "value"), rows).write(path)
    if not mix.bimodal:
        print("warning: histogram is not bimodal", file=sys.stderr)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spectator", description="Spectator-qubit feed-forward simulations, sweeps and fits.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True, points=True, workers=False):
        p.add_argument("--config", help="sectioned key=value config file")
        p.add_argument("--out", default=".", help="output directory (default: .)")
        if seed:
            p.add_argument("--seed", type=int, help="override analysis.seed")
        if points:
            p.add_argument("--points", help="sweep axis override, start:stop:count")
        if workers:
            p.add_argument("--workers", type=int, default=1, help="parallel worker processes")

    common(sub.add_parser("amp-sweep", help="<sigma_x> against RMS amplitude at f_AC"),
           workers=True)
    common(sub.add_parser("freq-sweep", help="<sigma_x> against noise frequency"), workers=True)
    common(sub.add_parser("phase-map", help="grid-averaged phase correlation spectrum"),
           seed=False)
    gain = sub.add_parser("gain", help="noise-free feed-forward gain f_on")
    common(gain, points=False)
    gain.add_argument("--shots", type=int, help="number of simulated shots")
    fit = sub.add_parser("fit", help="fit a model to a two-column CSV")
    common(fit, seed=False, points=False)
    fit.add_argument("--model", required=True, choices=sorted(MODELS))
    fit.add_argument("--input", required=True)
    hist = sub.add_parser("histogram", help="fit a bimodal Poisson histogram")
    common(hist, seed=False, points=False)
    hist.add_argument("--input", required=True)
    return parser


COMMANDS = {
    "amp-sweep": cmd_amp_sweep,
    "freq-sweep": cmd_freq_sweep,
    "phase-map": cmd_phase_map,
    "gain": cmd_gain,
    "fit": cmd_fit,
    "histogram": cmd_histogram,
}


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except (ConfigError, DomainError, FitError, IntegrationError, OSError,
            ValueError, ArithmeticError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"error: {msg}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
