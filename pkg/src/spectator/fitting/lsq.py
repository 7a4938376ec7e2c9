"""Bounded-effort nonlinear least squares.

Thin wrapper around MINPACK Levenberg-Marquardt (via
:func:`scipy.optimize.least_squares`) with a fixed stopping contract:
a relative parameter step below ``1e-10`` or 200 iterations.  Failures
are reported through :attr:`FitResult.converged` rather than raised.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from ..errors import DomainError

XTOL = 1e-10
MAX_ITERATIONS = 200


@dataclass
class FitResult:
    params: dict[str, float]
    residual_norm: float
    converged: bool
    iterations: int
    model: str = ""
    message: str = ""
    extra: dict = field(default_factory=dict)

    def __getitem__(self, name):
        return self.params[name]

    @property
    def values(self) -> np.ndarray:
        return np.array(list(self.params.values()))


def least_squares(model, xs, ys, initial_params, names=None, model_name=""):
    """Minimise ``sum((model(x, *theta) - y)**2)`` starting from `initial_params`.

    Parameters
    ----------
    model : callable
        ``model(xs, *params) -> array`` evaluated on the whole abscissa.
    xs, ys : array_like
        Data; equal length, at least as many points as parameters.
    initial_params : sequence of float or dict
        Starting point.  A dict also supplies the parameter names.
    names : sequence of str, optional
        Parameter names when `initial_params` is a plain sequence.

    Returns
    -------
    FitResult
        ``iterations`` counts LM steps (model evaluations divided by the
        ``n + 1`` needed per finite-difference Jacobian).  The
        residual never exceeds that of the starting point: if the
        optimiser goes astray the initial parameters are returned with
        ``converged=False``.
    """
    if isinstance(initial_params, dict):
        names = list(initial_params)
        p0 = np.array(list(initial_params.values()), dtype=float)
    else:
        p0 = np.asarray(initial_params, dtype=float)
        names = list(names) if names is not None else [f"p{i}" for i in range(len(p0))]
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape:
        raise DomainError("xs and ys must have the same length")
    if len(ys) < len(p0):
        raise DomainError(f"{len(ys)} points cannot constrain {len(p0)} parameters")

    def resid(theta):
        return np.asarray(model(xs, *theta), dtype=float) - ys

    with np.errstate(all="ignore"):
        r0 = resid(p0)
    norm0 = float(np.sqrt(np.sum(r0 ** 2))) if np.all(np.isfinite(r0)) else np.inf

    def give_up(msg, iterations=0):
        return FitResult(dict(zip(names, map(float, p0))), norm0, False, iterations, model_name, msg)

    if norm0 == 0.0:
        return FitResult(dict(zip(names, map(float, p0))), 0.0, True, 0, model_name, "exact start")
    if not np.isfinite(norm0):
        return give_up("model not finite at initial parameters")

    n = len(p0)
    try:
        with np.errstate(all="ignore"):
            sol = optimize.least_squares(
                resid, p0, method="lm", xtol=XTOL, ftol=1e-15, gtol=1e-15,
                max_nfev=MAX_ITERATIONS * (n + 1),
            )
    except (ValueError, np.linalg.LinAlgError, FloatingPointError) as exc:
        return give_up(f"optimiser failed: {exc}")

    iterations = int(sol.njev) if sol.njev is not None else -(-int(sol.nfev) // (n + 1))
    theta = sol.x
    with np.errstate(all="ignore"):
        r = resid(theta)
    norm = float(np.sqrt(np.sum(r ** 2)))
    if not (np.all(np.isfinite(theta)) and np.isfinite(norm)):
        return give_up("optimiser produced non-finite parameters", iterations)
    if norm > norm0:
        # the start was already a minimum to rounding; keep it
        return FitResult(dict(zip(names, map(float, p0))), norm0, bool(sol.status > 0),
                         iterations, model_name, "no improvement on initial parameters")
    return FitResult(
        dict(zip(names, map(float, theta))), norm, bool(sol.status > 0), iterations,
        model_name, sol.message,
    )
