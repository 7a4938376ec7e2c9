"""Bimodal Poisson model of fluorescence histograms and threshold fidelity.

Counts above the threshold are assigned "bright" (atom present).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from ..errors import DomainError


@dataclass(frozen=True)
class PoissonMixture:
    lambda0: float  # dark mean count
    lambda1: float  # bright mean count
    weight: float  # dark fraction
    threshold: int
    converged: bool = True
    bimodal: bool = True

    def __post_init__(self):
        if not (self.lambda0 >= 0 and self.lambda1 > self.lambda0):
            raise DomainError(f"need lambda1 > lambda0 >= 0, got {self.lambda0}, {self.lambda1}")
        if not 0.0 <= self.weight <= 1.0:
            raise DomainError(f"weight must lie in [0, 1], got {self.weight}")


def poisson_cdf(k: int, lam: float) -> float:
    """P(X <= k) for X ~ Poisson(lam), by direct summation of the pmf."""
    if k < 0:
        return 0.0
    if lam == 0.0:
        return 1.0
    ks = np.arange(k + 1)
    terms = np.exp(ks * math.log(lam) - lam - gammaln(ks + 1))
    return float(min(1.0, math.fsum(terms)))


def fidelity(lambda0, lambda1, threshold) -> float:
    """1 - (P(bright | dark) + P(dark | bright)) / 2 at an integer threshold."""
    f0 = poisson_cdf(threshold, lambda0)
    f1 = poisson_cdf(threshold, lambda1)
    # algebraically 1 - ((1 - f0) + f1) / 2, arranged so equal modes give 0.5 exactly
    return 0.5 + 0.5 * (f0 - f1)


def discrimination_fidelity(mix: PoissonMixture) -> float:
    return fidelity(mix.lambda0, mix.lambda1, mix.threshold)


def optimal_threshold(lambda0, lambda1):
    """Integer threshold in ``[floor(lambda0), ceil(lambda1)]`` maximising the fidelity."""
    ks = range(int(math.floor(lambda0)), int(math.ceil(lambda1)) + 1)
    scores = [fidelity(lambda0, lambda1, k) for k in ks]
    best = int(np.argmax(scores))
    return ks[best], scores[best]


def _log_pmf(ks, lam):
    if lam == 0.0:
        return np.where(ks == 0, 0.0, -np.inf)
    return ks * math.log(lam) - lam - gammaln(ks + 1)


def fit_poisson_mixture(histogram, max_iter=2000, tol=1e-10, min_separation=2.0,
                        min_lr=25.0) -> PoissonMixture:
    """Maximum-likelihood two-component Poisson mixture by expectation maximisation.

    Parameters
    ----------
    histogram : mapping or (n, 2) array
        Photon count -> number of occurrences.
    min_separation : float
        Required ``(lambda1 - lambda0) / sqrt(lambda0 + lambda1)``.
    min_lr : float
        Required log-likelihood-ratio statistic ``2 (L_mix - L_single)``.

    A fit failing either test is returned with ``bimodal=False`` and
    ``converged=False``.
    """
    if isinstance(histogram, dict):
        items = sorted(histogram.items())
        ks = np.array([k for k, _ in items], dtype=float)
        ws = np.array([w for _, w in items], dtype=float)
    else:
        arr = np.asarray(histogram, dtype=float)
        ks, ws = np.ascontiguousarray(arr[:, 0]), np.ascontiguousarray(arr[:, 1])
    if np.any(ks < 0) or np.any(ks != np.round(ks)) or np.any(ws < 0):
        raise DomainError("histogram counts must be non-negative integers")
    total = ws.sum()
    if total < 100:
        raise DomainError(f"histogram needs at least 100 samples, got {total:g}")

    mean = float(np.dot(ks, ws) / total)
    low = ks <= mean
    lam0 = float(np.dot(ks[low], ws[low]) / max(ws[low].sum(), 1e-300))
    lam1 = float(np.dot(ks[~low], ws[~low]) / max(ws[~low].sum(), 1e-300)) if (~low).any() else mean + 1
    w0 = float(ws[low].sum() / total)

    converged = False
    loglik = -np.inf
    for _ in range(max_iter):
        l0 = math.log(max(w0, 1e-300)) + _log_pmf(ks, lam0)
        l1 = math.log(max(1 - w0, 1e-300)) + _log_pmf(ks, lam1)
        norm = np.logaddexp(l0, l1)
        r0 = np.exp(l0 - norm)
        new_loglik = float(np.dot(ws, norm))
        n0 = float(np.dot(ws, r0))
        n1 = total - n0
        w0 = n0 / total
        lam0 = float(np.dot(ws * r0, ks) / n0) if n0 > 0 else 0.0
        lam1 = float(np.dot(ws * (1 - r0), ks) / n1) if n1 > 0 else lam0
        if abs(new_loglik - loglik) <= tol * abs(new_loglik):
            converged = True
            loglik = new_loglik
            break
        loglik = new_loglik

    if lam1 < lam0:
        lam0, lam1, w0 = lam1, lam0, 1.0 - w0
    single = float(np.dot(ws, _log_pmf(ks, mean)))
    separation = (lam1 - lam0) / math.sqrt(max(lam0 + lam1, 1e-300))
    bimodal = bool(separation >= min_separation and 2 * (loglik - single) >= min_lr)
    if lam1 <= lam0:
        lam1 = lam0 + 1e-9
        bimodal = False
    threshold, _ = optimal_threshold(lam0, lam1)
    return PoissonMixture(float(lam0), float(lam1), float(min(max(w0, 0.0), 1.0)), int(threshold),
                          converged and bimodal, bimodal)


def mixture_histogram(rng, lambda0, lambda1, weight, n_samples):
    """Sample a count histogram ``{count: occurrences}`` from a two-mode mixture."""
    dark = rng.random(n_samples) < weight
    counts = np.where(dark, rng.poisson(lambda0, n_samples), rng.poisson(lambda1, n_samples))
    values, freq = np.unique(counts, return_counts=True)
    return {int(v): int(f) for v, f in zip(values, freq)}
