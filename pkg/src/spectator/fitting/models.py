"""Model functions fitted to coherence, Ramsey and reloading data."""
from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError
from .lsq import FitResult, least_squares

TWO_PI = 2.0 * math.pi
RAMSEY_ENVELOPE_COEFF = 1.71


# -- model functions -------------------------------------------------------

def cosine(phi, amplitude, phase, offset):
    return amplitude * np.cos(phi - phase) + offset


def stretched_exponential(t, A, tau, B, n):
    """``A exp(-(t / tau)**n) + B``."""
    return A * np.exp(-np.abs(t / tau) ** n) + B


def ramsey_envelope(t, t2_star):
    return 1.0 / (1.0 + RAMSEY_ENVELOPE_COEFF * (t / t2_star) ** 2)


def ramsey(t, A, B, t2_star, detuning, phase):
    """``A + B / (1 + 1.71 (t/T2*)^2) * cos(detuning t + phase)``; detuning in rad/s."""
    return A + B * ramsey_envelope(t, t2_star) * np.cos(detuning * t + phase)


def logistic_reload(t, A, t0, T, n):
    """``A (1 - (1 + exp((t - t0)/T))**-n)``, evaluated overflow-free."""
    softplus = np.logaddexp(0.0, (t - t0) / T)
    return -A * np.expm1(-n * softplus)


# -- helpers ---------------------------------------------------------------

def _check_points(xs, ys, minimum, what):
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise DomainError(f"{what}: x and y must be 1-d arrays of equal length")
    if len(xs) < minimum:
        raise DomainError(f"{what}: need at least {minimum} points, got {len(xs)}")
    return xs, ys


def _as_p0(p0, names):
    if isinstance(p0, dict):
        return {k: float(p0[k]) for k in names}
    return dict(zip(names, map(float, p0)))


def _linear_cosine(phis, values):
    """Exact least-squares solution of ``c cos + s sin + offset`` at unit frequency."""
    design = np.column_stack([np.cos(phis), np.sin(phis), np.ones_like(phis)])
    (c, s, off), *_ = np.linalg.lstsq(design, values, rcond=None)
    return math.hypot(c, s), math.atan2(s, c), off


# -- cosine ----------------------------------------------------------------

COSINE_PARAMS = ("amplitude", "phase", "offset")


def fit_cosine(phis, values, p0=None) -> FitResult:
    """Fit ``amplitude cos(phi - phase) + offset`` with unit angular frequency.

    The result is canonical: ``amplitude >= 0`` and ``phase`` in [0, 2 pi).
    """
    phis, values = _check_points(phis, values, 4, "fit_cosine")
    if np.ptp(phis) <= math.pi:
        raise DomainError("fit_cosine: phases must span more than pi")
    if p0 is None:
        p0 = _linear_cosine(phis, values)
    fit = least_squares(cosine, phis, values, _as_p0(p0, COSINE_PARAMS), model_name="cosine")
    amp, ph = fit.params["amplitude"], fit.params["phase"]
    if amp < 0:
        amp, ph = -amp, ph + math.pi
    fit.params["amplitude"] = amp
    fit.params["phase"] = ph % TWO_PI
    return fit


def evaluate_cosine(fit: FitResult, phi):
    p = fit.params
    return cosine(phi, p["amplitude"], p["phase"], p["offset"])


def coherence_from_phase_scan(phis, populations, spam_amplitude=1.0):
    """Coherence from the fitted amplitude of a final-pulse phase scan.

    `spam_amplitude` is the fitted contrast of a reference Rabi
    measurement; dividing by it removes preparation and readout loss.
    """
    if not spam_amplitude > 0:
        raise DomainError("spam_amplitude must be positive")
    return fit_cosine(phis, populations).params["amplitude"] / spam_amplitude


# -- stretched exponential -------------------------------------------------

STRETCHED_PARAMS = ("A", "tau", "B", "n")


def _stretched_guess(ts, ys):
    span = np.ptp(ys)
    b = float(np.min(ys)) - 0.05 * span
    a = float(ys[np.argmin(ts)]) - b
    ratio = (ys - b) / a
    ok = (ts > 0) & (ratio > 1e-6) & (ratio < 1 - 1e-6)
    if ok.sum() >= 2:
        u = np.log(-np.log(ratio[ok]))
        slope, intercept = np.polyfit(np.log(ts[ok]), u, 1)
        n = float(np.clip(slope, 0.3, 4.0))
        tau = float(np.exp(-intercept / slope)) if slope > 0 else float(np.median(ts))
    else:
        n, tau = 1.0, float(np.median(ts))
    return {"A": a, "tau": tau, "B": b, "n": n}


def fit_stretched_exponential(ts, ys, p0=None) -> FitResult:
    """Fit ``A exp(-(t/tau)^n) + B`` to a coherence decay."""
    ts, ys = _check_points(ts, ys, 6, "fit_stretched_exponential")
    if np.any(ts < 0):
        raise DomainError("fit_stretched_exponential: times must be non-negative")
    p0 = _stretched_guess(ts, ys) if p0 is None else _as_p0(p0, STRETCHED_PARAMS)
    fit = least_squares(stretched_exponential, ts, ys, p0, model_name="stretched_exponential")
    fit.params["tau"] = abs(fit.params["tau"])
    return fit


# -- Ramsey ----------------------------------------------------------------

RAMSEY_PARAMS = ("A", "B", "t2_star", "detuning", "phase")


def _ramsey_guess(ts, ys):
    order = np.argsort(ts)
    ts, ys = ts[order], ys[order]
    a = float(np.mean(ys))
    # dominant frequency of the resampled, zero-padded signal
    grid = np.linspace(ts[0], ts[-1], max(len(ts), 64))
    sig = np.interp(grid, ts, ys) - a
    dt = grid[1] - grid[0]
    n_fft = 16 * len(grid)
    power = np.abs(np.fft.rfft(sig, n_fft))
    freqs = np.fft.rfftfreq(n_fft, dt)
    power[0] = 0.0
    detuning = TWO_PI * float(freqs[np.argmax(power)])
    best = None
    span = ts[-1] - ts[0] if ts[-1] > ts[0] else 1.0
    for t2 in span * np.array([0.1, 0.2, 0.4, 0.8, 1.6, 3.2]):
        env = ramsey_envelope(ts, t2)
        design = np.column_stack([env * np.cos(detuning * ts), env * np.sin(detuning * ts),
                                  np.ones_like(ts)])
        coef, *_ = np.linalg.lstsq(design, ys, rcond=None)
        cost = float(np.sum((design @ coef - ys) ** 2))
        if best is None or cost < best[0]:
            best = (cost, t2, coef)
    _, t2, (c, s, off) = best
    return {"A": float(off), "B": math.hypot(c, s), "t2_star": float(t2),
            "detuning": detuning, "phase": math.atan2(-s, c)}


def fit_ramsey(ts, ys, p0=None) -> FitResult:
    """Fit the non-exponentially decaying Ramsey fringe.

    The detuning is returned in rad/s.  Canonical form: ``B >= 0``,
    ``t2_star > 0``, ``phase`` in [0, 2 pi).
    """
    ts, ys = _check_points(ts, ys, 6, "fit_ramsey")
    p0 = _ramsey_guess(ts, ys) if p0 is None else _as_p0(p0, RAMSEY_PARAMS)
    fit = least_squares(ramsey, ts, ys, p0, model_name="ramsey")
    p = fit.params
    p["t2_star"] = abs(p["t2_star"])
    if p["B"] < 0:
        p["B"], p["phase"] = -p["B"], p["phase"] + math.pi
    p["phase"] %= TWO_PI
    return fit


# -- reloading -------------------------------------------------------------

LOGISTIC_PARAMS = ("A", "t0", "T", "n")


def _logistic_guess(ts, ys):
    order = np.argsort(ts)
    ts, ys = ts[order], ys[order]
    a = float(np.max(ys))
    if a <= 0:
        return {"A": 1.0, "t0": float(np.median(ts)), "T": float(np.ptp(ts)) / 10, "n": 1.0}

    def crossing(level):
        idx = int(np.argmax(ys >= level * a))
        return float(ts[idx])

    t_lo, t_mid, t_hi = crossing(0.1), crossing(0.5), crossing(0.9)
    width = max((t_hi - t_lo) / 4.4, np.ptp(ts) / (10 * len(ts)))
    return {"A": a, "t0": t_mid, "T": width, "n": 1.0}


def fit_logistic_reload(ts, ys, p0=None) -> FitResult:
    """Fit ``A (1 - (1 + exp((t - t0)/T))^-n)`` to a reloading curve."""
    ts, ys = _check_points(ts, ys, 6, "fit_logistic_reload")
    p0 = _logistic_guess(ts, ys) if p0 is None else _as_p0(p0, LOGISTIC_PARAMS)
    return least_squares(logistic_reload, ts, ys, p0, model_name="logistic_reload")


def reload_saturation_time(fit, window=None, tol=1e-6):
    """Time at which the reloading curve reaches ``1 - 1/e`` of its asymptote.

    Solved by bisection on the fitted curve.  `window` is the ``(lo, hi)``
    scan interval in seconds; by default ``t0 -/+ 200 T``.  Raises
    :class:`DomainError` if the crossing is not bracketed.
    """
    p = fit.params if isinstance(fit, FitResult) else dict(fit)
    if isinstance(fit, FitResult) and not fit.converged:
        raise DomainError("reload_saturation_time needs a converged fit")
    A, t0, T, n = (p[k] for k in LOGISTIC_PARAMS)
    target = (1.0 - math.exp(-1.0)) * A
    if window is None:
        window = (t0 - 200 * abs(T), t0 + 200 * abs(T))
    lo, hi = window

    def g(t):
        return logistic_reload(t, A, t0, T, n) - target

    glo, ghi = g(lo), g(hi)
    if glo * ghi > 0:
        raise DomainError(f"no 1-1/e crossing inside [{lo}, {hi}] s")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (g(mid) > 0) == (ghi > 0):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


MODELS = {
    "cosine": (cosine, COSINE_PARAMS, fit_cosine),
    "stretched-exp": (stretched_exponential, STRETCHED_PARAMS, fit_stretched_exponential),
    "ramsey": (ramsey, RAMSEY_PARAMS, fit_ramsey),
    "logistic": (logistic_reload, LOGISTIC_PARAMS, fit_logistic_reload),
}
