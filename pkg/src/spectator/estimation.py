"""Spectator readout model, phase inversion and the feed-forward law."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class ReadoutModel:
    """Binomial readout of a spectator ensemble.

    A spectator is bright with probability ``a + c sin(Phi_S) / 2``; the
    offset and contrast bounds keep that a probability for every phase.
    """

    n_spectators: int = 61
    a: float = 0.62
    c: float = 0.46

    def __post_init__(self):
        if int(self.n_spectators) != self.n_spectators or self.n_spectators < 1:
            raise DomainError(f"n_spectators must be a positive integer, got {self.n_spectators}")
        if not 0.0 <= self.c <= 1.0:
            raise DomainError(f"contrast c must lie in [0, 1], got {self.c}")
        if not 0.0 <= self.a <= 1.0:
            raise DomainError(f"offset a must lie in [0, 1], got {self.a}")
        if self.a - self.c / 2 < 0.0 or self.a + self.c / 2 > 1.0:
            raise DomainError(
                f"a={self.a}, c={self.c}: bright probability a +/- c/2 leaves [0, 1]"
            )

    def bright_probability(self, phi_s):
        return self.a + 0.5 * self.c * np.sin(phi_s)


@dataclass(frozen=True)
class FeedforwardLaw:
    beta: float = 1.35  # second-order Zeeman ratio, data / spectator
    time_ratio: float = 4.0 / 3.0  # data / spectator sensing time

    def __post_init__(self):
        if not (self.beta > 0 and self.time_ratio > 0):
            raise DomainError("beta and time_ratio must be positive")

    @property
    def gain(self) -> float:
        return self.time_ratio * self.beta


def sigma_y_from_counts(n_bright, n_initial, a):
    """Collective <sigma_y> from the bright fraction of an ensemble."""
    n_initial = np.asarray(n_initial)
    if np.any(n_initial < 1):
        raise DomainError("n_initial must be at least 1")
    if np.any(np.asarray(n_bright) < 0) or np.any(np.asarray(n_bright) > n_initial):
        raise DomainError("n_bright must lie in [0, n_initial]")
    return 2.0 * (n_bright / n_initial) - 2.0 * a


def estimate_spectator_phase(sigma_y, c):
    """Invert <sigma_y> = c sin(Phi_S), saturating at +/- pi/2.

    Ties ``sigma_y == +/-c`` map to ``+/-pi/2``.  Works elementwise on arrays.
    """
    if not c > 0:
        raise DomainError(f"contrast must be positive, got {c}")
    s = np.asarray(sigma_y, dtype=float)
    est = np.arcsin(np.clip(s / c, -1.0, 1.0))
    est = np.where(s >= c, HALF_PI, np.where(s <= -c, -HALF_PI, est))
    return est if est.ndim else float(est)


def feedforward_phase(phi_s_est, law: FeedforwardLaw = FeedforwardLaw()):
    """Estimated data-qubit phase to be removed by the final analysis pulse."""
    return law.gain * phi_s_est


def sample_bright_counts(rng: np.random.Generator, model: ReadoutModel, phi_s_true, size=None):
    """Draw bright-spectator counts for true spectator phase(s) `phi_s_true`."""
    p = model.bright_probability(np.asarray(phi_s_true, dtype=float))
    if np.any(p < -1e-12) or np.any(p > 1.0 + 1e-12):
        raise DomainError("bright probability outside [0, 1]")
    return rng.binomial(model.n_spectators, np.clip(p, 0.0, 1.0), size=size)
