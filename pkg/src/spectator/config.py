"""Sectioned ``key = value`` run configuration.

Keys mirror :class:`~spectator.montecarlo.ExperimentConfig` field names.
Field amplitudes are given in mG, frequencies in Hz, times in ms; they
are converted to SI here.  Unknown sections or keys are errors.

Example::

    [sequence]
    tau = 6.906          ; ms
    spectator_blocks = 6
    data_blocks = 8

    [bias]
    bx = 314             ; mG
    by = 183
    bz = 357

    [readout]
    n_spectators = 61
    a = 0.62
    c = 0.46

    [feedforward]
    beta = 1.35
    time_ratio = 1.3333333333333333

    [analysis]
    d_contrast = 0.60
    analysis_phases = 10  ; count, uniform over [0, 2 pi)
    reps_per_phase = 80
    mc_instances = 100
    rescale = 1.0
    seed = 0
    grid_resolution = 0.1 ; degrees

    [sweep]
    rms = 10.7           ; mG, fixed amplitude of freq-sweep and phase-map
    freq = 36.2          ; Hz, fixed frequency of amp-sweep (default f_AC)
    amplitudes = 0:20:41 ; mG, start:stop:count
    frequencies = 10:75:131
    phase_map_frequencies = 1:120:239
    freq_rescale = 0.93
    gain_shots = 100000
"""
from __future__ import annotations

import configparser
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, DomainError
from .estimation import FeedforwardLaw, ReadoutModel
from .montecarlo import FREQ_SWEEP_RESCALE, ExperimentConfig, uniform_phases
from .physics import BiasField, mG


def parse_points(text: str) -> np.ndarray:
    """``"start:stop:count"`` -> ``count`` evenly spaced values, endpoints included."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"points {text!r}: expected start:stop:count")
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"points {text!r}: {exc}") from None
    if count < 1:
        raise ConfigError(f"points {text!r}: count must be at least 1")
    return np.linspace(start, stop, count)


@dataclass(frozen=True)
class SweepSettings:
    rms: float = mG(10.7)  # Tesla
    freq: float | None = None  # Hz; None means f_AC
    amplitudes: str = "0:20:41"  # mG
    frequencies: str = "10:75:131"  # Hz
    phase_map_frequencies: str = "1:120:239"  # Hz
    freq_rescale: float = FREQ_SWEEP_RESCALE
    gain_shots: int = 100_000


def _int(v):
    f = float(v)
    if f != int(f):
        raise ValueError(f"{v!r} is not an integer")
    return int(f)


# section -> key -> converter into SI units
_SCHEMA = {
    "sequence": {
        "tau": lambda v: float(v) * 1e-3,
        "spectator_blocks": _int,
        "data_blocks": _int,
    },
    "bias": {"bx": lambda v: mG(float(v)), "by": lambda v: mG(float(v)), "bz": lambda v: mG(float(v))},
    "readout": {"n_spectators": _int, "a": float, "c": float},
    "feedforward": {"beta": float, "time_ratio": float},
    "analysis": {
        "d_contrast": float,
        "analysis_phases": _int,
        "reps_per_phase": _int,
        "mc_instances": _int,
        "rescale": float,
        "seed": _int,
        "grid_resolution": float,
    },
    "sweep": {
        "rms": lambda v: mG(float(v)),
        "freq": float,
        "amplitudes": str,
        "frequencies": str,
        "phase_map_frequencies": str,
        "freq_rescale": float,
        "gain_shots": _int,
    },
}


def _read(path):
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(path.read_text(), source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}".splitlines()[0]) from None
    values = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        values[section] = {}
        for key, raw in parser.items(section):
            conv = _SCHEMA[section].get(key)
            if conv is None:
                raise ConfigError(f"unknown key {section}.{key}")
            try:
                values[section][key] = conv(raw)
            except ValueError as exc:
                raise ConfigError(f"{section}.{key} = {raw!r}: {exc}") from None
    return values


def _build(section, cls, kwargs):
    try:
        return cls(**kwargs)
    except DomainError as exc:
        raise ConfigError(f"[{section}] {exc}") from None


def load_config(path=None):
    """Read a config file into ``(ExperimentConfig, SweepSettings)``; None gives defaults."""
    values = _read(path) if path is not None else {}
    seq = values.get("sequence", {})
    analysis = dict(values.get("analysis", {}))
    if "analysis_phases" in analysis:
        count = analysis["analysis_phases"]
        if count < 4:
            raise ConfigError("analysis.analysis_phases must be at least 4")
        analysis["analysis_phases"] = uniform_phases(count)
    exp = dict(seq)
    exp.update(analysis)
    bias = _build("bias", BiasField, values.get("bias", {}))
    readout = _build("readout", ReadoutModel, values.get("readout", {}))
    law = _build("feedforward", FeedforwardLaw, values.get("feedforward", {}))
    cfg = _build("sequence/analysis", ExperimentConfig, dict(exp, bias=bias, readout=readout, law=law))
    sweep = SweepSettings(**values.get("sweep", {}))
    if not (sweep.rms >= 0 and math.isfinite(sweep.rms)):
        raise ConfigError("sweep.rms must be a non-negative number")
    if sweep.gain_shots < 2:
        raise ConfigError("sweep.gain_shots must be at least 2")
    for key in ("amplitudes", "frequencies", "phase_map_frequencies"):
        parse_points(getattr(sweep, key))
    return cfg, sweep


def parse_config(path) -> ExperimentConfig:
    return load_config(path)[0]
