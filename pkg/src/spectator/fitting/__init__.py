"""Least-squares engine, fitted model functions and readout statistics."""
from .lsq import FitResult, least_squares
from .models import (
    MODELS,
    coherence_from_phase_scan,
    cosine,
    evaluate_cosine,
    fit_cosine,
    fit_logistic_reload,
    fit_ramsey,
    fit_stretched_exponential,
    logistic_reload,
    ramsey,
    ramsey_envelope,
    reload_saturation_time,
    stretched_exponential,
)
from .readout import (
    PoissonMixture,
    discrimination_fidelity,
    fidelity,
    fit_poisson_mixture,
    mixture_histogram,
    optimal_threshold,
    poisson_cdf,
)
