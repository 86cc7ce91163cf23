"""Orthonormal Hermite functions.

``h_n(x) = H_n(x) exp(-x^2/2) / sqrt(sqrt(pi) 2^n n!)`` with ``H_n`` the
physicists' Hermite polynomial. Values come from the recurrence on the
normalized functions themselves,

    h_{n+1}(x) = x sqrt(2/(n+1)) h_n(x) - sqrt(n/(n+1)) h_{n-1}(x),

so the ``2^n n!`` constant is never formed and degrees well past 20 stay
finite.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from ._kernels import PI_M4, recurrence_coefficients

__all__ = [
    "BasisValues",
    "eval_basis",
    "eval_basis_deriv",
    "hermite_functions",
    "hermite_polynomials",
    "PI_M4",
]


@dataclass(frozen=True)
class BasisValues:
    x: float
    values: np.ndarray
    derivs: Optional[np.ndarray] = None

    @property
    def degree(self) -> int:
        return self.values.shape[0] - 1


def _check_args(x, degree):
    if not np.isfinite(x):
        raise ValueError(f"x must be finite, got {x!r}")
    if int(degree) != degree or degree < 0:
        raise ValueError(f"degree must be a non-negative integer, got {degree!r}")
    return float(x), int(degree)


def hermite_functions(x, degree: int) -> np.ndarray:
    """Table of ``h_0..h_degree`` at every point of ``x``.

    Returns an array of shape ``x.shape + (degree + 1,)``.
    """
    x = np.asarray(x, dtype=np.float64)
    if degree < 0:
        raise ValueError("degree must be non-negative")
    up, down = recurrence_coefficients(degree)
    flat = np.ascontiguousarray(x.reshape(-1))
    table = _kernels.hermite_table(flat, up, down, True)
    return table.reshape(x.shape + (degree + 1,))


def hermite_polynomials(x, degree: int) -> np.ndarray:
    """Like :func:`hermite_functions` without the ``exp(-x^2/2)`` factor.

    These are the polynomials orthonormal under the weight ``exp(-x^2)``,
    which is what Gauss-Hermite quadrature wants.
    """
    x = np.asarray(x, dtype=np.float64)
    if degree < 0:
        raise ValueError("degree must be non-negative")
    up, down = recurrence_coefficients(degree)
    flat = np.ascontiguousarray(x.reshape(-1))
    table = _kernels.hermite_table(flat, up, down, False)
    return table.reshape(x.shape + (degree + 1,))


def eval_basis(x: float, degree: int) -> BasisValues:
    """Evaluate ``h_0(x)..h_degree(x)`` in one pass."""
    x, degree = _check_args(x, degree)
    values = hermite_functions(np.array([x]), degree)[0]
    return BasisValues(x=x, values=values)


def eval_basis_deriv(x: float, degree: int) -> BasisValues:
    """Values plus derivatives, via ``h_n' = sqrt(2n) h_{n-1} - x h_n``."""
    x, degree = _check_args(x, degree)
    values = hermite_functions(np.array([x]), degree)[0]
    derivs = -x * values
    n = np.arange(1, degree + 1)
    derivs[1:] += np.sqrt(2.0 * n) * values[:-1]
    return BasisValues(x=x, values=values, derivs=derivs)
