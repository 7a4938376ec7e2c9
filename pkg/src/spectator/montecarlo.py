"""Shot-level simulation of the feed-forward loop and the sweeps built on it.

One *shot* draws a tone phase from the precomputed grid, takes the true
spectator and data phases at that grid point, samples a binomial
spectator readout, inverts it, and forms the modulation factors

    f_off = cos(Phi_D)            f_on = cos(Phi_D - Phi'_D)

A *sweep point* mimics the experiment's analysis: for each analysis
phase ``phi_k`` the factors of ``reps_per_phase`` shots are averaged and
applied to the noise-free fringe ``rescale * D * cos(phi_k - readout_phase)``,
a cosine is fitted and evaluated at ``readout_phase`` (3 pi / 2), giving a
signed <sigma_x>.  This is repeated for ``mc_instances`` independent
instances and averaged.

Randomness is drawn only from generators seeded by
``SeedSequence(seed, spawn_key=(point_index,))`` so results do not depend
on how sweep points are scheduled.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError, FitError
from .estimation import (
    FeedforwardLaw,
    ReadoutModel,
    estimate_spectator_phase,
    feedforward_phase,
    sample_bright_counts,
    sigma_y_from_counts,
)
from .fitting import evaluate_cosine, fit_cosine
from .noise import NoiseTone, accrued_phase_closed_form, breakdown_rms, phase_grid
from .physics import CS133, MILLIGAUSS, RB87, BiasField, Species
from .sequence import make_block_sequence, resonant_frequency

FREQ_SWEEP_RESCALE = 0.93
RESONANT_RMS = 10.7 * MILLIGAUSS


def uniform_phases(count: int) -> tuple[float, ...]:
    return tuple(2.0 * math.pi * k / count for k in range(count))


@dataclass(frozen=True)
class ExperimentConfig:
    tau: float = 6.906e-3
    spectator_blocks: int = 6
    data_blocks: int = 8
    bias: BiasField = field(default_factory=BiasField)
    data_species: Species = RB87
    spectator_species: Species = CS133
    readout: ReadoutModel = field(default_factory=ReadoutModel)
    law: FeedforwardLaw = field(default_factory=FeedforwardLaw)
    d_contrast: float = 0.60
    analysis_phases: tuple[float, ...] = uniform_phases(10)
    reps_per_phase: int = 80
    mc_instances: int = 100
    rescale: float = 1.0
    seed: int = 0
    grid_resolution: float = 0.1  # degrees
    readout_phase: float = 1.5 * math.pi

    def __post_init__(self):
        object.__setattr__(self, "analysis_phases", tuple(map(float, self.analysis_phases)))
        for name in ("spectator_blocks", "data_blocks", "reps_per_phase", "mc_instances"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise DomainError(f"{name} must be a positive integer, got {value}")
        if len(self.analysis_phases) < 4:
            raise DomainError("need at least 4 analysis phases for the cosine fit")
        if not 0.0 < self.d_contrast <= 1.0:
            raise DomainError(f"d_contrast must lie in (0, 1], got {self.d_contrast}")
        if not self.tau > 0:
            raise DomainError(f"tau must be positive, got {self.tau}")
        if not self.rescale > 0:
            raise DomainError(f"rescale must be positive, got {self.rescale}")

    @property
    def f_ac(self) -> float:
        return resonant_frequency(self.tau)

    def spectator_setup(self):
        """``(sequence, species, bz)`` for the spectator qubits."""
        return make_block_sequence(self.spectator_blocks, self.tau), self.spectator_species, self.bias.bz

    def data_setup(self):
        return make_block_sequence(self.data_blocks, self.tau), self.data_species, self.bias.bz


@dataclass(frozen=True)
class PhaseSample:
    phi_j: float
    phi_s: float
    phi_d: float
    phi_s_est: float
    phi_d_est: float
    f_on: float
    f_off: float


class PointEstimate(NamedTuple):
    sigma_x_on: float
    sigma_x_off: float
    stderr_on: float
    stderr_off: float


@dataclass(frozen=True)
class SweepPoint:
    x: float
    sigma_x_on: float
    sigma_x_off: float
    stderr_on: float
    stderr_off: float


@dataclass
class SweepResult:
    axis: str
    points: list[SweepPoint]

    COLUMNS = ("x", "sigma_x_on", "sigma_x_off", "stderr_on", "stderr_off")

    def column(self, name) -> np.ndarray:
        return np.array([getattr(p, name) for p in self.points])

    def rows(self):
        return [tuple(getattr(p, c) for c in self.COLUMNS) for p in self.points]


def point_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for sweep point `index`, independent of evaluation order."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


# -- single shots ----------------------------------------------------------

def true_phases(cfg: ExperimentConfig, tone: NoiseTone):
    """(Phi_S, Phi_D) for `tone`; ``tone.phase`` may be an array."""
    return (accrued_phase_closed_form(*cfg.spectator_setup(), tone),
            accrued_phase_closed_form(*cfg.data_setup(), tone))


def _estimate(cfg, counts):
    s_y = sigma_y_from_counts(counts, cfg.readout.n_spectators, cfg.readout.a)
    phi_s_est = estimate_spectator_phase(s_y, cfg.readout.c)
    return phi_s_est, feedforward_phase(phi_s_est, cfg.law)


def simulate_shot(rng, cfg: ExperimentConfig, tone: NoiseTone, phi_j: float,
                  exact_readout=False) -> PhaseSample:
    """One feed-forward shot at tone phase `phi_j`.

    With `exact_readout` the bright count is replaced by its expectation
    ``N p`` (no shot noise) and `rng` is not used.
    """
    phi_s, phi_d = true_phases(cfg, replace(tone, phase=phi_j))
    if exact_readout:
        counts = cfg.readout.n_spectators * cfg.readout.bright_probability(phi_s)
    else:
        counts = sample_bright_counts(rng, cfg.readout, phi_s)
    phi_s_est, phi_d_est = _estimate(cfg, counts)
    return PhaseSample(
        float(phi_j), float(phi_s), float(phi_d), float(phi_s_est), float(phi_d_est),
        math.cos(phi_d - phi_d_est), math.cos(phi_d),
    )


def sample_factors(rng, cfg, phi_s_grid, phi_d_grid, shape):
    """Vectorised shots with tone phases drawn uniformly from the grid.

    Returns ``(f_on, f_off)`` arrays of the requested shape.
    """
    idx = rng.integers(0, len(phi_s_grid), size=shape)
    phi_s = phi_s_grid[idx]
    phi_d = phi_d_grid[idx]
    counts = sample_bright_counts(rng, cfg.readout, phi_s)
    _, phi_d_est = _estimate(cfg, counts)
    return np.cos(phi_d - phi_d_est), np.cos(phi_d)


def gain_statistics(cfg: ExperimentConfig, n_shots: int = 100_000, rng=None):
    """Mean and standard error of f_on with no injected noise."""
    rng = point_rng(cfg.seed, 0) if rng is None else rng
    zeros = np.zeros(1)
    f_on, _ = sample_factors(rng, cfg, zeros, zeros, n_shots)
    return float(f_on.mean()), float(f_on.std(ddof=1) / math.sqrt(n_shots))


def noise_free_gain(cfg: ExperimentConfig, n_shots: int = 100_000, rng=None) -> float:
    return gain_statistics(cfg, n_shots, rng)[0]


# -- sweeps ----------------------------------------------------------------

def _grids(cfg, tone):
    s = phase_grid(*cfg.spectator_setup(), tone, cfg.grid_resolution).values
    d = phase_grid(*cfg.data_setup(), tone, cfg.grid_resolution).values
    return s, d


def _fringe_value(cfg, phis, values, branch, instance):
    fit = fit_cosine(phis, values)
    if not fit.converged:
        raise FitError(
            f"cosine fit failed ({branch} branch, instance {instance}): {fit.message}",
            point={"branch": branch, "instance": instance, "values": values.tolist()},
        )
    return float(evaluate_cosine(fit, cfg.readout_phase))


def simulate_sweep_point(cfg: ExperimentConfig, tone: NoiseTone, rng=None) -> PointEstimate:
    """Fitted <sigma_x> with feed-forward on and off, averaged over MC instances."""
    rng = point_rng(cfg.seed, 0) if rng is None else rng
    phi_s_grid, phi_d_grid = _grids(cfg, tone)
    phis = np.array(cfg.analysis_phases)
    shape = (cfg.mc_instances, len(phis), cfg.reps_per_phase)
    f_on, f_off = sample_factors(rng, cfg, phi_s_grid, phi_d_grid, shape)
    fringe = cfg.rescale * cfg.d_contrast * np.cos(phis - cfg.readout_phase)
    on_k = f_on.mean(axis=2) * fringe
    off_k = f_off.mean(axis=2) * fringe
    tone_info = {"rms": tone.rms, "freq": tone.freq}
    try:
        on = np.array([_fringe_value(cfg, phis, on_k[i], "on", i) for i in range(shape[0])])
        off = np.array([_fringe_value(cfg, phis, off_k[i], "off", i) for i in range(shape[0])])
    except FitError as exc:
        exc.point = {**tone_info, **(exc.point or {})}
        raise

    def stderr(v):
        return float(v.std(ddof=1) / math.sqrt(len(v))) if len(v) > 1 else math.nan

    return PointEstimate(float(on.mean()), float(off.mean()), stderr(on), stderr(off))


def _point_task(args):
    cfg, tone, index = args
    return simulate_sweep_point(cfg, tone, point_rng(cfg.seed, index))


def _run_points(cfg, tones, workers):
    tasks = [(cfg, tone, i) for i, tone in enumerate(tones)]
    if workers is None or workers <= 1 or len(tasks) <= 1:
        return [_point_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_point_task, tasks))


def amplitude_sweep(cfg: ExperimentConfig, rms_values: Sequence[float], freq=None,
                    workers=1) -> SweepResult:
    """<sigma_x> against RMS amplitude (Tesla) at fixed frequency (default f_AC).

    The x column of the result is in mG.
    """
    freq = cfg.f_ac if freq is None else freq
    tones = [NoiseTone(float(r), freq) for r in rms_values]
    est = _run_points(cfg, tones, workers)
    return SweepResult("rms_mG", [SweepPoint(t.rms / MILLIGAUSS, *e) for t, e in zip(tones, est)])


def frequency_sweep(cfg: ExperimentConfig, freqs: Sequence[float], rms=RESONANT_RMS,
                    rescale=FREQ_SWEEP_RESCALE, workers=1) -> SweepResult:
    """<sigma_x> against tone frequency (Hz) at fixed RMS amplitude.

    `rescale` overrides ``cfg.rescale``; pass None to keep the config value.
    """
    if rescale is not None:
        cfg = replace(cfg, rescale=rescale)
    tones = [NoiseTone(rms, float(f)) for f in freqs]
    est = _run_points(cfg, tones, workers)
    return SweepResult("freq_Hz", [SweepPoint(t.freq, *e) for t, e in zip(tones, est)])


def breakdown_amplitude(cfg: ExperimentConfig, freq=None) -> float:
    """Smallest RMS (Tesla) for which the worst grid spectator phase exceeds pi/2."""
    freq = cfg.f_ac if freq is None else freq
    return breakdown_rms(*cfg.spectator_setup(), freq, resolution=cfg.grid_resolution)
