"""Gauss-Hermite rules, exact moments, entropy and basis projection.

On the standardized scale a model density is a polynomial of degree ``2K``
times ``exp(-z^2)``, so an n-point Gauss-Hermite rule integrates it, and any
polynomial moment of it, exactly once ``2n - 1`` covers the total degree.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.linalg import eigvalsh_tridiagonal

from .hermite import hermite_functions, hermite_polynomials
from .model import DENSITY_FLOOR, WaveModel
from ._kernels import PI_M4

__all__ = [
    "IntegrationError",
    "MassDiagnostic",
    "QuadratureRule",
    "adaptive_simpson",
    "amplitude_roots",
    "entropy",
    "gauss_hermite",
    "moment",
    "moments",
    "project_density",
]

MAX_ORDER = 200
PROJECTION_RADIUS = 12.0
SIMPSON_TOL = 1e-10
SIMPSON_MAX_DEPTH = 50


class IntegrationError(RuntimeError):
    """Adaptive integration hit its subdivision limit before the tolerance."""


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for ``int g(x) exp(-x^2) dx ~= sum_j weights_j g(nodes_j)``."""

    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, g: Callable) -> float:
        return float(self.weights @ g(self.nodes))


def _orthonormal_top(x, order):
    # p_order(x) and p_{order-1}(x) for the polynomials orthonormal under exp(-x^2)
    p1 = np.full_like(x, PI_M4)
    p2 = np.zeros_like(x)
    for j in range(1, order + 1):
        p3 = p2
        p2 = p1
        p1 = x * math.sqrt(2.0 / j) * p2 - math.sqrt((j - 1) / j) * p3
    return p1, p2


@lru_cache(maxsize=64)
def _gauss_hermite_cached(order):
    # Starting guesses: eigenvalues of the symmetric Jacobi matrix, whose
    # off-diagonal is sqrt(j/2). Then Newton on the normalized recurrence,
    # all roots at once.
    if order == 1:
        nodes = np.zeros(1)
    else:
        nodes = eigvalsh_tridiagonal(np.zeros(order), np.sqrt(np.arange(1, order) / 2.0))
    for _ in range(20):
        p, prev = _orthonormal_top(nodes, order)
        step = p / (math.sqrt(2.0 * order) * prev)
        nodes = nodes - step
        if np.all(np.abs(step) <= 1e-15 * np.maximum(1.0, np.abs(nodes))):
            break
    # exact symmetry, and an exact zero in the middle for odd orders
    nodes = 0.5 * (nodes - nodes[::-1])
    _, prev = _orthonormal_top(nodes, order)
    weights = 1.0 / (order * prev * prev)
    weights = 0.5 * (weights + weights[::-1])
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return QuadratureRule(order=order, nodes=nodes, weights=weights)


def gauss_hermite(order: int) -> QuadratureRule:
    """The ``order``-point Gauss-Hermite rule for weight ``exp(-x^2)``.

    Nodes are the roots of ``H_order``; rules are cached and immutable.
    """
    if int(order) != order or not 1 <= order <= MAX_ORDER:
        raise ValueError(f"order must be an integer in [1, {MAX_ORDER}], got {order!r}")
    return _gauss_hermite_cached(int(order))


def _polynomial_part(model: WaveModel, nodes):
    # (sum_k w_k p_k(z))^2, i.e. the standardized density times exp(z^2)
    amp = hermite_polynomials(nodes, model.degree) @ model.coeffs
    return amp * amp


def _standardized_moments(model: WaveModel, max_p: int):
    order = min(MAX_ORDER, model.degree + (max_p + 1) // 2 + 1)
    rule = gauss_hermite(order)
    mass = rule.weights * _polynomial_part(model, rule.nodes)
    return np.array([float(mass @ rule.nodes**p) for p in range(max_p + 1)])


def moments(model: WaveModel, max_p: int, scale: str = "original") -> np.ndarray:
    """Raw moments ``E[X^0] .. E[X^max_p]``.

    ``scale="standardized"`` gives moments of ``z``; ``"original"`` expands
    ``(scale * z + location)^p`` binomially.
    """
    if int(max_p) != max_p or max_p < 0:
        raise ValueError(f"moment order must be a non-negative integer, got {max_p!r}")
    max_p = int(max_p)
    std = _standardized_moments(model, max_p)
    if scale == "standardized":
        return std
    if scale != "original":
        raise ValueError(f"scale must be 'standardized' or 'original', got {scale!r}")
    s, mu = model.scale, model.location
    out = np.empty(max_p + 1)
    for p in range(max_p + 1):
        out[p] = sum(math.comb(p, j) * s**j * mu ** (p - j) * std[j] for j in range(p + 1))
    return out


def moment(model: WaveModel, p: int, scale: str = "original") -> float:
    """Single raw moment ``E[X^p]``; see :func:`moments`."""
    return float(moments(model, p, scale=scale)[p])


def amplitude_roots(model: WaveModel) -> np.ndarray:
    """Real roots of the standardized amplitude, ascending."""
    k = np.arange(model.degree + 1)
    # p_k = pi^(-1/4) H_k / sqrt(2^k k!), written as a physicists' Hermite series
    log_norm = 0.5 * (k * math.log(2.0) + np.array([math.lgamma(i + 1.0) for i in k]))
    series = model.coeffs * PI_M4 * np.exp(-log_norm)
    nz = np.flatnonzero(series)
    if nz.size == 0 or nz[-1] == 0:
        return np.empty(0)
    roots = np.polynomial.hermite.hermroots(series[: nz[-1] + 1])
    real = roots[np.abs(np.imag(roots)) < 1e-9]
    return np.sort(np.real(real))


def _entropy_gauss_hermite(model):
    order = min(MAX_ORDER, max(64, 4 * model.degree))
    rule = gauss_hermite(order)
    poly = _polynomial_part(model, rule.nodes)
    dens = poly * np.exp(-rule.nodes**2)
    return -float(rule.weights @ (poly * np.log(np.maximum(dens, DENSITY_FLOOR))))


def _entropy_between_roots(model):
    radius = math.sqrt(2 * model.degree + 1) + 8.0
    roots = amplitude_roots(model)
    edges = [-radius, *roots[np.abs(roots) < radius], radius]

    def integrand(z):
        d = model.standardized_density(z)
        return -d * math.log(d) if d > DENSITY_FLOOR else 0.0

    return sum(
        quad(integrand, a, b, epsabs=1e-13, epsrel=1e-12, limit=200)[0]
        for a, b in zip(edges[:-1], edges[1:])
        if b > a
    )


def entropy(model: WaveModel, scale: str = "original", method: str = "gauss-hermite") -> float:
    """Differential entropy ``-int f log f``.

    The integrand is not a polynomial times ``exp(-z^2)``, so this is an
    approximation either way.

    ``"gauss-hermite"`` (default) uses a rule of order ``max(64, 4K)``. It is
    cheap and very accurate when the amplitude roots sit far out in the
    tails, which is typical of fitted models; each root inside the bulk
    leaves a ``z^2 log z^2`` kink that costs roughly 1e-3 to 1e-2.
    ``"roots"`` integrates adaptively between the real roots of the
    amplitude and is good to about 1e-9 whatever the coefficients.
    """
    if method == "gauss-hermite":
        h = _entropy_gauss_hermite(model)
    elif method == "roots":
        h = _entropy_between_roots(model)
    else:
        raise ValueError(f"method must be 'gauss-hermite' or 'roots', got {method!r}")
    if scale == "standardized":
        return h
    if scale != "original":
        raise ValueError(f"scale must be 'standardized' or 'original', got {scale!r}")
    return h + math.log(model.scale)


# --------------------------------------------------------------------------
# Projection of a known density onto the basis
# --------------------------------------------------------------------------


def adaptive_simpson(f: Callable, a: float, b: float, tol: float = SIMPSON_TOL,
                     max_depth: int = SIMPSON_MAX_DEPTH) -> np.ndarray:
    """Adaptive Simpson integration of a vector-valued ``f`` over ``[a, b]``.

    ``f`` maps a 1-D array of points to an array of shape ``(points, m)``.
    An interval is accepted when ``max |S_left + S_right - S_whole| <= 15 tol``
    with the tolerance halved at each split. All intervals of one level are
    refined together so each level costs one batched call of ``f``.
    """
    if not b > a:
        raise ValueError("need a < b")
    fa, fm, fb = f(np.array([a, (a + b) / 2, b]))
    lo = np.array([a])
    hi = np.array([b])
    f_lo, f_mid, f_hi = fa[None], fm[None], fb[None]
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)[None]
    total = np.zeros_like(fa, dtype=np.float64)
    level_tol = tol
    for depth in range(max_depth + 1):
        mid = 0.5 * (lo + hi)
        quarter = np.concatenate([0.5 * (lo + mid), 0.5 * (mid + hi)])
        fq = f(quarter)
        k = lo.shape[0]
        f_lq, f_rq = fq[:k], fq[k:]
        width = (hi - lo)[:, None]
        left = width / 12.0 * (f_lo + 4.0 * f_lq + f_mid)
        right = width / 12.0 * (f_mid + 4.0 * f_rq + f_hi)
        diff = left + right - whole
        done = np.max(np.abs(diff), axis=1) <= 15.0 * level_tol
        total += (left + right + diff / 15.0)[done].sum(axis=0)
        todo = ~done
        if not todo.any():
            return total
        if depth == max_depth:
            break
        lo, mid, hi = lo[todo], mid[todo], hi[todo]
        f_lo, f_lq, f_mid, f_rq, f_hi = f_lo[todo], f_lq[todo], f_mid[todo], f_rq[todo], f_hi[todo]
        lo = np.concatenate([lo, mid])
        hi = np.concatenate([mid, hi])
        f_lo, f_mid, f_hi = (
            np.concatenate([f_lo, f_mid]),
            np.concatenate([f_lq, f_rq]),
            np.concatenate([f_mid, f_hi]),
        )
        whole = np.concatenate([left[todo], right[todo]])
        level_tol *= 0.5
    raise IntegrationError(
        f"adaptive Simpson did not reach tol={tol:g} within {max_depth} subdivisions"
    )


@dataclass(frozen=True)
class MassDiagnostic:
    """``sum_k w_k^2`` of a truncated projection; 1 means nothing was lost."""

    partial_mass: float


def project_density(sqrt_f: Callable, degree: int, tol: float = SIMPSON_TOL,
                    breakpoints: Sequence[float] = (), radius: float = PROJECTION_RADIUS):
    """Coefficients ``w_k = int h_k(z) sqrt_f(z) dz`` for ``k = 0..degree``.

    ``sqrt_f`` is the square root of a density already standardized to mean
    about 0 and variance about 1/2, and must accept a 1-D array. Integration
    runs over ``[-radius, radius]``, split at ``breakpoints`` (put any
    discontinuities there). The vector is returned as is, without
    renormalization, together with its partial mass.
    """
    if int(degree) != degree or degree < 0:
        raise ValueError("degree must be a non-negative integer")
    cuts = sorted({float(b) for b in breakpoints if -radius < b < radius})
    edges = [-radius, *cuts, radius]

    def piece(a, b):
        # ends are read as one-sided limits so a jump at a breakpoint cannot
        # leak in through rounding of the standardization
        inset = 1e-12 * (b - a)

        def integrand(z):
            z = np.clip(z, a + inset, b - inset)
            return hermite_functions(z, degree) * np.asarray(sqrt_f(z), dtype=np.float64)[:, None]

        return adaptive_simpson(integrand, a, b, tol=tol)

    w = np.zeros(degree + 1)
    for a, b in zip(edges[:-1], edges[1:]):
        w += piece(a, b)
    return w, MassDiagnostic(partial_mass=float(w @ w))
