import math
from dataclasses import replace

import numpy as np
import pytest

from oracles import exact_factor_expectations
from spectator.estimation import ReadoutModel
from spectator.montecarlo import (
    RESONANT_RMS,
    ExperimentConfig,
    PhaseSample,
    amplitude_sweep,
    breakdown_amplitude,
    frequency_sweep,
    gain_statistics,
    noise_free_gain,
    point_rng,
    sample_factors,
    simulate_shot,
    simulate_sweep_point,
    true_phases,
)
from spectator.noise import NoiseTone, grid_phases
from spectator.physics import MILLIGAUSS, mG

CFG = ExperimentConfig()


def _grid_oracle(cfg, tone):
    phases = grid_phases(cfg.grid_resolution)
    phi_s, phi_d = true_phases(cfg, replace(tone, phase=phases))
    r = cfg.readout
    return exact_factor_expectations(phi_s, phi_d, r.n_spectators, r.a, r.c, cfg.law.gain)


def test_config_defaults():
    assert CFG.f_ac == pytest.approx(36.2, abs=0.01)
    assert len(CFG.analysis_phases) == 10
    assert (CFG.reps_per_phase, CFG.mc_instances, CFG.d_contrast) == (80, 100, 0.60)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(mc_instances=0)
    with pytest.raises(ValueError):
        ExperimentConfig(d_contrast=0.0)


def test_shot_fields_consistent():
    s = simulate_shot(np.random.default_rng(0), CFG, NoiseTone(mG(8), CFG.f_ac), 1.0)
    assert isinstance(s, PhaseSample)
    assert s.f_off == math.cos(s.phi_d)
    assert s.f_on == math.cos(s.phi_d - s.phi_d_est)
    assert abs(s.phi_s_est) <= math.pi / 2
    assert s.phi_d_est == pytest.approx(1.8 * s.phi_s_est)


def test_ideal_noise_free_shot():
    cfg = replace(CFG, readout=ReadoutModel(a=0.5, c=1.0))
    s = simulate_shot(None, cfg, NoiseTone(0.0, 10.0), 0.0, exact_readout=True)
    assert (s.f_on, s.f_off) == (1.0, 1.0)


def test_exact_readout_inverts_true_phase():
    tone = NoiseTone(mG(5), CFG.f_ac)
    s = simulate_shot(None, CFG, tone, 2.0, exact_readout=True)
    assert s.phi_s_est == pytest.approx(s.phi_s, abs=1e-12)


def test_physics_independent_of_rng():
    tone = NoiseTone(mG(6), 40.0)
    a = simulate_shot(np.random.default_rng(1), CFG, tone, 0.7)
    b = simulate_shot(np.random.default_rng(99), CFG, tone, 0.7)
    assert (a.phi_s, a.phi_d) == (b.phi_s, b.phi_d)


def test_noise_free_gain_matches_enumeration():
    exact, _ = exact_factor_expectations(0.0, 0.0, 61, 0.62, 0.46, 1.8)
    mean, err = gain_statistics(CFG, 100_000)
    assert abs(mean - exact) < 4 * err
    assert noise_free_gain(CFG, 100_000) == mean


def test_resonant_f_off_mean_matches_grid_oracle():
    tone = NoiseTone(RESONANT_RMS, CFG.f_ac)
    phases = grid_phases(0.1)
    phi_s, phi_d = true_phases(CFG, replace(tone, phase=phases))
    f_on, f_off = sample_factors(np.random.default_rng(5), CFG, phi_s, phi_d, 100_000)
    exp_on, exp_off = _grid_oracle(CFG, tone)
    assert f_off.mean() == pytest.approx(exp_off, abs=0.01)
    assert f_on.mean() == pytest.approx(exp_on, abs=0.01)
    # full dephasing would give zero; the model overshoots the first zero of J0
    assert exp_off == pytest.approx(-0.1627, abs=1e-3)


def test_sweep_point_noise_free_off_branch_is_exact():
    est = simulate_sweep_point(CFG, NoiseTone(0.0, CFG.f_ac))
    assert est.sigma_x_off == pytest.approx(CFG.rescale * CFG.d_contrast, abs=1e-9)


def test_sweep_point_resonant():
    tone = NoiseTone(RESONANT_RMS, CFG.f_ac)
    est = simulate_sweep_point(CFG, tone)
    exp_on, exp_off = _grid_oracle(CFG, tone)
    # fitted amplitude is linear in the factors, so the MC mean targets D * E[f]
    assert est.sigma_x_on == pytest.approx(CFG.d_contrast * exp_on, abs=5 * est.stderr_on)
    assert est.sigma_x_off == pytest.approx(CFG.d_contrast * exp_off, abs=5 * est.stderr_off)
    assert est.sigma_x_on == pytest.approx(0.88 * CFG.d_contrast, abs=0.05)


def test_point_rng_is_order_independent():
    a = point_rng(11, 3).random(4)
    _ = point_rng(11, 2).random(4)
    assert np.array_equal(a, point_rng(11, 3).random(4))
    assert not np.array_equal(a, point_rng(11, 4).random(4))


def test_amplitude_sweep_plateau_and_off_oscillation():
    cfg = replace(CFG, mc_instances=20)
    rms = np.arange(0, 25.5, 1.0) * MILLIGAUSS
    res = amplitude_sweep(cfg, rms)
    on, off = res.column("sigma_x_on"), res.column("sigma_x_off")
    assert on[5] == pytest.approx(on[0], abs=0.05)
    first_zero = int(np.argmax(off < 0))
    assert first_zero > 0
    assert np.all(np.diff(off[: first_zero + 1]) < 0)
    assert np.count_nonzero(np.diff(np.sign(off))) >= 2


def test_breakdown_amplitude():
    assert 10.5 <= breakdown_amplitude(CFG) / MILLIGAUSS <= 11.5


def test_frequency_sweep_off_resonance_and_dips():
    cfg = replace(CFG, mc_instances=20)
    res = frequency_sweep(cfg, np.arange(20.0, 52.5, 0.5))
    x, on, off = res.column("x"), res.column("sigma_x_on"), res.column("sigma_x_off")
    level = 0.93 * cfg.d_contrast
    assert on[0] == pytest.approx(0.88 * level, abs=0.05)
    assert off[0] == pytest.approx(level, abs=0.05)
    i_ac = int(np.argmin(np.abs(x - cfg.f_ac)))
    assert abs(off[i_ac]) < 0.1
    minima = [i for i in range(1, len(on) - 1) if on[i] < on[i - 1] and on[i] < on[i + 1]]
    below = [x[i] for i in minima if x[i] < cfg.f_ac]
    above = [x[i] for i in minima if x[i] > cfg.f_ac]
    # the nearest dip on each side flanks the on-branch maximum at f_AC
    assert below and above
    assert on[i_ac] > on[minima[np.searchsorted(x[minima], cfg.f_ac) - 1]]


def test_sweep_serial_equals_parallel():
    cfg = replace(CFG, mc_instances=5)
    freqs = [30.0, 36.2, 44.0]
    assert frequency_sweep(cfg, freqs) == frequency_sweep(cfg, freqs, workers=2)
