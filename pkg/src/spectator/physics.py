"""Species constants and the second-order Zeeman frequency model.

All quantities are SI: fields in Tesla, frequencies in Hz.  Use
:func:`mG` to convert from milligauss at the boundary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

MILLIGAUSS = 1e-7  # Tesla


def mG(value):
    """Convert milligauss to Tesla."""
    return value * MILLIGAUSS


@dataclass(frozen=True)
class Species:
    name: str
    f0: float  # zero-field clock frequency, Hz
    gamma: float  # second-order Zeeman coefficient, Hz / T^2

    def __post_init__(self):
        if not (self.f0 > 0 and self.gamma > 0):
            raise DomainError(f"species {self.name!r}: f0 and gamma must be positive")


RB87 = Species("Rb", 6_834_682_611.0, 575.15e8)
CS133 = Species("Cs", 9_192_631_770.0, 427.45e8)

#: data and spectator species of the protocol
DATA_SPECIES = RB87
SPECTATOR_SPECIES = CS133


@dataclass(frozen=True)
class BiasField:
    bx: float = mG(314.0)
    by: float = mG(183.0)
    bz: float = mG(357.0)

    @property
    def magnitude(self) -> float:
        return math.sqrt(self.bx ** 2 + self.by ** 2 + self.bz ** 2)


def clock_frequency(species: Species, b_mag: float) -> float:
    """m_F = 0 clock frequency at field magnitude `b_mag` (Tesla)."""
    if b_mag < 0:
        raise DomainError(f"field magnitude must be non-negative, got {b_mag}")
    return species.f0 + species.gamma * b_mag ** 2


def instantaneous_shift(species, bz, delta_bz):
    """Clock shift produced by perturbing the z field from `bz` to `bz + delta_bz`.

    Equal to ``gamma * ((bz + delta_bz)**2 - bz**2)``, evaluated in the
    factored form to avoid cancellation.  Broadcasts over arrays.
    """
    return species.gamma * delta_bz * (2.0 * bz + delta_bz)
