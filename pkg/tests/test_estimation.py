import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spectator.errors import DomainError
from spectator.estimation import (
    FeedforwardLaw,
    ReadoutModel,
    estimate_spectator_phase,
    feedforward_phase,
    sample_bright_counts,
    sigma_y_from_counts,
)


def test_readout_defaults_and_invariants():
    m = ReadoutModel()
    assert (m.n_spectators, m.a, m.c) == (61, 0.62, 0.46)
    ReadoutModel(a=0.5, c=1.0)
    for kwargs in ({"a": 0.9}, {"a": 0.62, "c": 1.0}, {"c": -0.1}, {"n_spectators": 0},
                   {"a": 0.1, "c": 0.46}):
        with pytest.raises(DomainError):
            ReadoutModel(**kwargs)


def test_sigma_y_from_counts():
    assert sigma_y_from_counts(31, 62, 0.5) == 0.0
    assert sigma_y_from_counts(61, 61, 0.5) == 1.0
    assert sigma_y_from_counts(50, 61, 0.62) == pytest.approx(0.399344262295082, abs=1e-15)
    with pytest.raises(DomainError):
        sigma_y_from_counts(0, 0, 0.5)
    with pytest.raises(DomainError):
        sigma_y_from_counts(5, 4, 0.5)


def test_estimate_examples():
    c = 0.46
    assert estimate_spectator_phase(c, c) == math.pi / 2
    assert estimate_spectator_phase(-c, c) == -math.pi / 2
    assert estimate_spectator_phase(0.0, c) == 0.0
    assert estimate_spectator_phase(c / 2, c) == pytest.approx(math.pi / 6, abs=1e-15)
    assert estimate_spectator_phase(5.0, c) == math.pi / 2
    with pytest.raises(DomainError):
        estimate_spectator_phase(0.1, 0.0)


def test_estimate_vectorised():
    out = estimate_spectator_phase(np.array([-1.0, 0.0, 0.23, 1.0]), 0.46)
    assert out.shape == (4,)
    assert out[0] == -math.pi / 2 and out[-1] == math.pi / 2


@given(phi=st.floats(-math.pi / 2 + 1e-3, math.pi / 2 - 1e-3), c=st.floats(0.05, 1.0))
def test_noiseless_round_trip(phi, c):
    assert estimate_spectator_phase(c * math.sin(phi), c) == pytest.approx(phi, abs=1e-12)


@given(phi=st.floats(-math.pi / 2, math.pi / 2), c=st.floats(0.05, 1.0))
def test_noiseless_round_trip_near_saturation(phi, c):
    # arcsin is ill-conditioned at +/-pi/2; compare through sin
    est = estimate_spectator_phase(c * math.sin(phi), c)
    assert math.sin(est) == pytest.approx(math.sin(phi), abs=1e-15)


@given(s=st.floats(-3, 3), c=st.floats(0.01, 1.0))
def test_estimate_is_clipped(s, c):
    assert -math.pi / 2 <= estimate_spectator_phase(s, c) <= math.pi / 2


@given(s1=st.floats(-2, 2), s2=st.floats(-2, 2), c=st.floats(0.01, 1.0))
def test_estimate_is_monotone(s1, s2, c):
    lo, hi = sorted((s1, s2))
    assert estimate_spectator_phase(lo, c) <= estimate_spectator_phase(hi, c)


def test_feedforward_law():
    law = FeedforwardLaw()
    assert law.gain == pytest.approx(1.8)
    assert feedforward_phase(math.pi / 2, law) == pytest.approx(0.9 * math.pi)
    assert feedforward_phase(0.0, law) == 0.0
    assert feedforward_phase(-math.pi / 2, law) == pytest.approx(-0.9 * math.pi)
    with pytest.raises(DomainError):
        FeedforwardLaw(beta=0.0)


def _binomial_band(n, p, draws):
    return 3 * math.sqrt(n * p * (1 - p) / draws)


def test_contrast_free_counts_have_offset_mean():
    model = ReadoutModel(a=0.55, c=0.0)
    counts = sample_bright_counts(np.random.default_rng(1), model, 1.1, size=100_000)
    assert abs(counts.mean() - 61 * 0.55) < _binomial_band(61, 0.55, 100_000)


def test_default_counts_at_zero_phase():
    counts = sample_bright_counts(np.random.default_rng(2), ReadoutModel(), 0.0, size=100_000)
    assert abs(counts.mean() - 37.82) < _binomial_band(61, 0.62, 100_000)


def test_counts_deterministic_for_fixed_seed():
    draw = lambda: sample_bright_counts(np.random.default_rng(7), ReadoutModel(), 0.3)
    assert draw() == draw()
