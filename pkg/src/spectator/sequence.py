"""Dynamical-decoupling timing and the toggling sign it induces.

Pulse axes are irrelevant to a pure-dephasing model, so XY4, XY8 and
CPMG of equal length share one representation.  Pulses are instantaneous.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class DecouplingSequence:
    pulse_times: tuple[float, ...]
    total_time: float
    tau: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "pulse_times", tuple(float(t) for t in self.pulse_times))
        if not self.total_time > 0:
            raise DomainError("total_time must be positive")
        pts = self.pulse_times
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise DomainError("pulse times must be strictly increasing")
        if pts and not (0 < pts[0] and pts[-1] < self.total_time):
            raise DomainError("pulse times must lie inside (0, total_time)")

    @property
    def n_pulses(self) -> int:
        return len(self.pulse_times)

    def segments(self):
        """Constant-sign intervals as ``(starts, stops, signs)`` arrays."""
        edges = np.array((0.0, *self.pulse_times, self.total_time))
        signs = np.where(np.arange(len(edges) - 1) % 2 == 0, 1.0, -1.0)
        return edges[:-1], edges[1:], signs


def make_block_sequence(m: int, tau: float) -> DecouplingSequence:
    """``[tau - pi - tau]^m``: pulses at odd multiples of `tau`, duration ``2 m tau``."""
    if int(m) != m or m < 1:
        raise DomainError(f"block count must be a positive integer, got {m}")
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau}")
    m = int(m)
    pulses = tuple((2 * k + 1) * tau for k in range(m))
    return DecouplingSequence(pulses, 2 * m * tau, tau)


def toggling_sign(seq: DecouplingSequence, t: float) -> int:
    """(-1)**n with n the number of pulses strictly before `t`."""
    if not 0 <= t <= seq.total_time:
        raise DomainError(f"t={t} outside [0, {seq.total_time}]")
    n = int(np.searchsorted(seq.pulse_times, t, side="left"))
    return -1 if n % 2 else 1


def resonant_frequency(tau: float) -> float:
    """Peak sensitivity frequency 1/(4 tau) of a block sequence."""
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau}")
    return 1.0 / (4.0 * tau)
