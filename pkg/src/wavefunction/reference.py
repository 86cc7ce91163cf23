"""Analytic test distributions used as oracles for fitting and projection."""

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import stats

__all__ = ["REFERENCE_NAMES", "ReferenceDensity", "make_reference"]


@dataclass(frozen=True)
class ReferenceDensity:
    """A known density with exact moments and an exact sampler.

    ``support`` is the closed interval outside which the density vanishes
    (infinite ends for full-line densities); its finite ends are where
    the density may jump, so projections split there.
    """

    name: str
    density: Callable
    cdf: Callable
    mean: float
    variance: float
    draw: Callable  # (n, rng) -> ndarray
    support: Tuple[float, float] = (-math.inf, math.inf)

    @property
    def location(self) -> float:
        return self.mean

    @property
    def scale(self) -> float:
        """Stretch that maps the distribution to variance 1/2."""
        return math.sqrt(2.0 * self.variance)

    def sqrt_density(self, x):
        return np.sqrt(self.density(x))

    def standardized_sqrt_density(self, z):
        """``sqrt(scale * f(location + scale * z))``: the root of the standardized density."""
        z = np.asarray(z, dtype=np.float64)
        return np.sqrt(self.scale * self.density(self.location + self.scale * z))

    def standardized_breakpoints(self):
        return tuple((b - self.location) / self.scale for b in self.support if math.isfinite(b))

    def sample(self, n: int, seed: Optional[int] = None, rng: Optional[np.random.Generator] = None):
        if rng is None:
            rng = np.random.default_rng(seed)
        return self.draw(int(n), rng)


def _from_scipy(name, dist, mean, var, support=(-math.inf, math.inf)):
    # closed-form moments are passed in; scipy's can be an ulp off (e.g. N(0, 1/2))
    return ReferenceDensity(
        name=name,
        density=dist.pdf,
        cdf=dist.cdf,
        mean=mean,
        variance=var,
        draw=lambda n, rng: dist.rvs(size=n, random_state=rng),
        support=support,
    )


# Two well separated equal-weight modes; the exact parameters are a choice.
_MIX_CENTERS = (-2.0, 2.0)
_MIX_SD = 0.5


def _bimodal():
    comps = [stats.norm(c, _MIX_SD) for c in _MIX_CENTERS]

    def pdf(x):
        return 0.5 * (comps[0].pdf(x) + comps[1].pdf(x))

    def cdf(x):
        return 0.5 * (comps[0].cdf(x) + comps[1].cdf(x))

    def draw(n, rng):
        centers = np.where(rng.random(n) < 0.5, _MIX_CENTERS[0], _MIX_CENTERS[1])
        return centers + _MIX_SD * rng.standard_normal(n)

    mean = 0.5 * sum(_MIX_CENTERS)
    var = _MIX_SD**2 + 0.5 * sum((c - mean) ** 2 for c in _MIX_CENTERS)
    return ReferenceDensity("bimodal_mixture", pdf, cdf, mean, var, draw)


_FACTORIES = {
    "gaussian_half": lambda: _from_scipy("gaussian_half", stats.norm(0.0, math.sqrt(0.5)), 0.0, 0.5),
    # variance nu / (nu - 2)
    "student_t4": lambda: _from_scipy("student_t4", stats.t(4), 0.0, 2.0),
    "uniform01": lambda: _from_scipy("uniform01", stats.uniform(0.0, 1.0), 0.5, 1.0 / 12.0, (0.0, 1.0)),
    "bimodal_mixture": _bimodal,
    # a / (a + b) and a b / ((a + b)^2 (a + b + 1))
    "beta_3_5": lambda: _from_scipy("beta_3_5", stats.beta(3, 5), 3.0 / 8.0, 15.0 / 576.0, (0.0, 1.0)),
}

REFERENCE_NAMES = tuple(_FACTORIES)


def make_reference(name: str) -> ReferenceDensity:
    try:
        return _FACTORIES[name]()
    except KeyError:
        raise ValueError(
            f"unknown reference distribution {name!r}; choose from {', '.join(REFERENCE_NAMES)}"
        ) from None
