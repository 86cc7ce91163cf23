"""Maximum-likelihood fit of the coefficients from an i.i.d. sample.

The unit-norm constraint on ``w`` is removed by optimizing over the
stereographic image ``gamma`` (see :mod:`wavefunction.sphere`), which makes
the problem unconstrained and lets a stock L-BFGS do the work.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from . import _kernels
from .hermite import hermite_functions
from .model import DENSITY_FLOOR, WaveModel
from .sphere import unproject, unproject_jacobian

__all__ = [
    "DegenerateSampleError",
    "FitOptions",
    "FitReport",
    "standardize",
    "log_likelihood",
    "grad_log_likelihood",
    "fit_mle",
]

logger = logging.getLogger(__name__)


class DegenerateSampleError(ValueError):
    """Sample too small or with no spread, so it cannot be standardized."""


@dataclass
class FitOptions:
    degree: int = 10
    max_iterations: int = 500
    # infinity norm of the gradient of the *mean* log-likelihood
    gradient_tolerance: float = 1e-8
    initial_gamma: Optional[np.ndarray] = None

    def __post_init__(self):
        if int(self.degree) != self.degree or self.degree < 0:
            raise ValueError(f"degree must be a non-negative integer, got {self.degree!r}")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be non-negative")
        if not self.gradient_tolerance > 0:
            raise ValueError("gradient_tolerance must be positive")
        if self.initial_gamma is not None:
            g = np.asarray(self.initial_gamma, dtype=np.float64).reshape(-1)
            if g.shape[0] != self.degree:
                raise ValueError(f"initial_gamma must have length {self.degree}")
            if not np.all(np.isfinite(g)):
                raise ValueError("initial_gamma must be finite")
            self.initial_gamma = g


@dataclass
class FitReport:
    converged: bool
    iterations: int
    final_log_likelihood: float
    gradient_norm: float
    initial_log_likelihood: float = field(default=float("nan"))
    message: str = ""


def standardize(data):
    """Shift and stretch a sample to mean 0 and variance 1/2.

    ``scale`` is ``sqrt(2)`` times the unbiased sample standard deviation.

    Returns
    -------
    location, scale : float
    z : ndarray
        ``(data - location) / scale``.
    """
    x = np.asarray(data, dtype=np.float64).reshape(-1)
    if x.shape[0] < 2:
        raise DegenerateSampleError(f"need at least 2 observations, got {x.shape[0]}")
    if not np.all(np.isfinite(x)):
        raise DegenerateSampleError("sample contains non-finite values")
    if np.ptp(x) == 0.0:
        raise DegenerateSampleError("all observations are equal")
    location = float(np.mean(x))
    scale = math.sqrt(2.0) * float(np.std(x, ddof=1))
    return location, scale, (x - location) / scale


def _objective_pieces(gamma, table):
    # log-likelihood and its gradient with respect to gamma
    w = unproject(gamma)
    ll, grad_w = _kernels.loglik_grad(table, w, DENSITY_FLOOR)
    return ll, unproject_jacobian(gamma).T @ grad_w


def _table_for(gamma, z):
    gamma = np.asarray(gamma, dtype=np.float64).reshape(-1)
    z = np.asarray(z, dtype=np.float64).reshape(-1)
    return gamma, hermite_functions(z, gamma.shape[0])


def log_likelihood(gamma, z) -> float:
    """``sum_i log (sum_k w_k h_k(z_i))^2`` with ``w = unproject(gamma)``.

    Each term is floored at ``log(DENSITY_FLOOR)``.
    """
    gamma, table = _table_for(gamma, z)
    return _kernels.loglik_grad(table, unproject(gamma), DENSITY_FLOOR)[0]


def grad_log_likelihood(gamma, z) -> np.ndarray:
    gamma, table = _table_for(gamma, z)
    return _objective_pieces(gamma, table)[1]


def _newton_polish(fun, gamma, f, g, gtol, f_start, max_steps=8):
    """Finish with Newton steps on the gradient.

    L-BFGS stops once ``f`` no longer changes in double precision, which for
    a mean log-likelihood happens around gradients of 1e-8..1e-7. The
    gradient itself is still accurate there, so Newton steps on it (Hessian
    by central differences of the analytic gradient) can go further. A step
    is kept only if the gradient shrinks and ``f`` does not rise by more
    than roundoff, and never above ``f_start``.
    """
    k = gamma.shape[0]
    taken = 0
    for _ in range(max_steps):
        if np.max(np.abs(g)) <= gtol:
            break
        step = 1e-6 * max(1.0, float(np.max(np.abs(gamma))))
        hess = np.empty((k, k))
        for j in range(k):
            e = np.zeros(k)
            e[j] = step
            hess[:, j] = (fun(gamma + e)[1] - fun(gamma - e)[1]) / (2.0 * step)
        hess = 0.5 * (hess + hess.T)
        try:
            np.linalg.cholesky(hess)  # minimizing: need a positive definite Hessian
            delta = np.linalg.solve(hess, g)
        except np.linalg.LinAlgError:
            break
        cand = gamma - delta
        f_new, g_new = fun(cand)
        f_cap = min(f + 1e-13 * max(1.0, abs(f)), f_start)
        if not (np.max(np.abs(g_new)) < np.max(np.abs(g)) and f_new <= f_cap):
            break
        gamma, f, g = cand, f_new, g_new
        taken += 1
    return gamma, f, g, taken


def fit_mle(data, opts: Optional[FitOptions] = None):
    """Fit a :class:`WaveModel` to ``data`` by maximum likelihood.

    Standardizes the sample, then runs L-BFGS on ``gamma`` starting from
    ``opts.initial_gamma`` (zeros, i.e. the Gaussian, by default).
    Failing to converge is not an error: the best iterate comes back with
    ``report.converged`` false.

    Returns
    -------
    model : WaveModel
    report : FitReport
    """
    opts = opts or FitOptions()
    location, scale, z = standardize(data)
    n = z.shape[0]
    degree = int(opts.degree)
    table = hermite_functions(z, degree)
    gamma0 = np.zeros(degree) if opts.initial_gamma is None else opts.initial_gamma.copy()

    def fun(gamma):
        ll, grad = _objective_pieces(gamma, table)
        return -ll / n, -grad / n

    f0, g0 = fun(gamma0)
    gamma, f, g = gamma0, f0, g0
    iterations = 0
    if degree == 0:
        message = "degree 0 has no free parameters"
    elif np.max(np.abs(g0)) <= opts.gradient_tolerance:
        message = "initial point satisfies the gradient tolerance"
    else:
        message = "max_iterations is 0"
    if degree > 0 and np.max(np.abs(g0)) > opts.gradient_tolerance and opts.max_iterations > 0:
        res = minimize(
            fun,
            gamma0,
            jac=True,
            method="L-BFGS-B",
            options={
                "maxiter": opts.max_iterations,
                "maxcor": 10,
                "gtol": opts.gradient_tolerance,
                "ftol": 0.0,
                "maxls": 50,
                "maxfun": 20 * opts.max_iterations + 100,
            },
        )
        iterations = int(res.nit)
        message = str(res.message)
        # the line search only accepts decreases, but never hand back worse than the start
        if res.fun <= f0:
            gamma, f, g = res.x, float(res.fun), res.jac

        # polishing steps count against the same iteration budget
        budget = min(8, opts.max_iterations - iterations)
        if np.max(np.abs(g)) > opts.gradient_tolerance and budget > 0:
            gamma, f, g, polished = _newton_polish(
                fun, gamma, f, g, opts.gradient_tolerance, f0, max_steps=budget
            )
            iterations += polished
            if polished:
                message += f"; {polished} Newton polishing step(s)"

    grad_norm = float(np.max(np.abs(g))) if degree > 0 else 0.0
    converged = grad_norm <= opts.gradient_tolerance
    if not converged:
        logger.info("fit stopped before the gradient tolerance: %s", message)
    model = WaveModel(unproject(gamma), location=location, scale=scale)
    report = FitReport(
        converged=converged,
        iterations=iterations,
        final_log_likelihood=-f * n,
        gradient_norm=grad_norm,
        initial_log_likelihood=-f0 * n,
        message=message,
    )
    return model, report
