"""Phase accrued under a monochromatic field tone during a decoupling sequence.

The field perturbation is ``dB(t) = A sin(2 pi f t + phi)`` with peak
amplitude ``A = sqrt(2) * rms``; the time origin is the common start of
the data and spectator sequences.  Each species accrues

    Phi = 2 pi * integral_0^T y(t) * gamma * dB (2 bz + dB) dt

where ``y`` is the toggling sign of the sequence.  Two evaluation routes
are provided: :func:`accrued_phase_closed_form` (production) integrates
every constant-sign segment analytically, and
:func:`accrued_phase_quadrature` (reference) uses adaptive quadrature.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy import integrate

from .errors import DomainError, IntegrationError
from .physics import Species, instantaneous_shift
from .sequence import DecouplingSequence

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class NoiseTone:
    rms: float  # Tesla
    freq: float  # Hz
    phase: float = 0.0  # radians, at sequence start

    def __post_init__(self):
        if self.rms < 0:
            raise DomainError(f"rms amplitude must be non-negative, got {self.rms}")

    @property
    def amplitude(self) -> float:
        return math.sqrt(2.0) * self.rms

    @property
    def omega(self) -> float:
        return TWO_PI * self.freq


@dataclass(frozen=True)
class PhaseGrid:
    resolution: float  # degrees
    phases: np.ndarray  # radians
    values: np.ndarray  # accrued phase, radians

    def __len__(self):
        return len(self.phases)


def _segment_integrals(seq, omega, phase):
    """Signed integrals of sin(wt+phi) and sin^2(wt+phi) summed over segments.

    `phase` may be an array; results broadcast against it.  Written with
    sinc so that omega -> 0 is exact rather than a cancellation.
    """
    starts, stops, signs = seq.segments()
    phase = np.asarray(phase, dtype=float)[..., None]
    width = stops - starts
    centre = omega * 0.5 * (starts + stops) + phase
    # np.sinc(x) = sin(pi x) / (pi x)
    lin = width * np.sin(centre) * np.sinc(omega * width / (2.0 * math.pi))
    quad = 0.5 * width * (1.0 - np.cos(2.0 * centre) * np.sinc(omega * width / math.pi))
    return (signs * lin).sum(axis=-1), (signs * quad).sum(axis=-1)


def accrued_phase_components(seq: DecouplingSequence, species: Species, bz: float, tone: NoiseTone):
    """Return the (linear-in-A, quadratic-in-A) parts of the accrued phase.

    The linear part flips sign under ``phase -> phase + pi``; the quadratic
    part is invariant.
    """
    a = tone.amplitude
    lin, quad = _segment_integrals(seq, tone.omega, tone.phase)
    scale = TWO_PI * species.gamma
    return scale * 2.0 * bz * a * lin, scale * a * a * quad


def accrued_phase_closed_form(seq, species, bz, tone):
    """Accrued phase in radians from the exact segment-wise antiderivative.

    ``tone.phase`` may be an array of tone phases, in which case an array
    of the same shape is returned.
    """
    lin, quad = accrued_phase_components(seq, species, bz, tone)
    return lin + quad


def accrued_phase_quadrature(seq, species, bz, tone, atol=1e-9):
    """Accrued phase in radians by adaptive Gauss-Kronrod quadrature.

    Each constant-sign segment is integrated separately so the integrand
    is smooth on every call.  Raises :class:`IntegrationError` if the
    estimated error exceeds `atol`.
    """
    a, w, phi = tone.amplitude, tone.omega, float(tone.phase)
    if a == 0.0:
        return 0.0

    def shift(t):
        return instantaneous_shift(species, bz, a * math.sin(w * t + phi))

    starts, stops, signs = seq.segments()
    seg_tol = atol / (TWO_PI * len(starts))
    total, err_total = 0.0, 0.0
    for t0, t1, s in zip(starts, stops, signs):
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                val, err = integrate.quad(shift, t0, t1, epsabs=seg_tol, epsrel=0.0, limit=500)
            except integrate.IntegrationWarning as exc:
                raise IntegrationError(
                    f"quadrature did not converge on segment [{t0}, {t1}]",
                    {"segment": (t0, t1), "tone": tone, "message": str(exc)},
                ) from exc
        total += s * val
        err_total += err
    if TWO_PI * err_total > atol:
        raise IntegrationError(
            "quadrature error estimate above tolerance",
            {"error": TWO_PI * err_total, "atol": atol, "tone": tone},
        )
    return TWO_PI * total


def grid_phases(resolution: float) -> np.ndarray:
    """Uniform tone phases over [0, 2 pi) at `resolution` degrees."""
    if not resolution > 0:
        raise DomainError(f"grid resolution must be positive, got {resolution}")
    count = 360.0 / resolution
    n = int(round(count))
    if n < 1 or abs(count - n) > 1e-9 * max(1.0, count):
        raise DomainError(f"resolution {resolution} deg does not divide 360")
    return np.deg2rad(np.arange(n) * (360.0 / n))


def phase_grid(seq, species, bz, tone_template: NoiseTone, resolution: float = 0.1) -> PhaseGrid:
    """Closed-form accrued phase for every tone phase on a uniform grid."""
    phases = grid_phases(resolution)
    values = accrued_phase_closed_form(seq, species, bz, replace(tone_template, phase=phases))
    return PhaseGrid(resolution, phases, np.asarray(values))


@dataclass(frozen=True)
class SpectrumPoint:
    freq: float
    mean_abs_phi_s: float
    mean_abs_phi_d: float
    mean_ratio: float  # nan when every grid point was excluded
    n_excluded: int


def phase_correlation_spectrum(freqs, data_cfg, spectator_cfg, rms, resolution=0.1, zero_tol=1e-9):
    """Grid-averaged phase statistics of both species against tone frequency.

    `data_cfg` and `spectator_cfg` are ``(sequence, species, bz)`` tuples.
    Grid points with ``|Phi_S| <= zero_tol * max|Phi_S|`` (or exactly zero)
    are excluded from the ratio and counted in ``n_excluded``.
    """
    out = []
    for f in freqs:
        tone = NoiseTone(rms, f)
        phi_s = phase_grid(*spectator_cfg, tone, resolution).values
        phi_d = phase_grid(*data_cfg, tone, resolution).values
        cut = zero_tol * np.max(np.abs(phi_s))
        keep = np.abs(phi_s) > cut
        ratio = float(np.mean(phi_d[keep] / phi_s[keep])) if keep.any() else math.nan
        out.append(SpectrumPoint(
            float(f),
            float(np.mean(np.abs(phi_s))),
            float(np.mean(np.abs(phi_d))),
            ratio,
            int((~keep).sum()),
        ))
    return out


def max_grid_phase(seq, species, bz, tone, resolution=0.1) -> float:
    return float(np.max(np.abs(phase_grid(seq, species, bz, tone, resolution).values)))


def breakdown_rms(seq, species, bz, freq, threshold=math.pi / 2, resolution=0.1,
                  upper=None, tol=1e-10):
    """Smallest RMS amplitude (Tesla) whose worst grid phase exceeds `threshold`.

    Bisection on the grid maximum, which increases monotonically with the
    amplitude.  `upper` defaults to an automatically expanded bracket.
    """
    def excess(rms):
        return max_grid_phase(seq, species, bz, NoiseTone(rms, freq), resolution) - threshold

    lo, hi = 0.0, upper if upper is not None else 1e-7
    while excess(hi) <= 0:
        lo, hi = hi, 2 * hi
        if hi > 1.0:
            raise DomainError("no breakdown below 1 T; tone is decoupled")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0:
            hi = mid
        else:
            lo = mid
    return hi
