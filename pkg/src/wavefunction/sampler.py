"""Univariate slice sampling from a fitted model.

Transitions run on the standardized density with stepping-out and
shrinkage. Because the standardized variable has variance 1/2, one fixed
initial width (4.0) serves every model.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._kernels import recurrence_coefficients
from .model import DENSITY_FLOOR, WaveModel
from .quadrature import gauss_hermite

__all__ = [
    "DEFAULT_WIDTH",
    "RNG_NAME",
    "SamplerState",
    "init_sampler",
    "integrated_autocorr_time",
    "next_sample",
    "sample_n",
]

logger = logging.getLogger(__name__)

DEFAULT_WIDTH = 4.0
DEFAULT_MAX_STEP_OUT = 64
RNG_NAME = "numpy.random.PCG64"


@dataclass
class SamplerState:
    current: float
    rng: np.random.Generator
    width: float = DEFAULT_WIDTH
    max_step_out: int = DEFAULT_MAX_STEP_OUT
    cap_hits: int = field(default=0)

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError("width must be positive")
        if not np.isfinite(self.current):
            raise ValueError("current must be finite")


def _start_point(model: WaveModel) -> float:
    if model.standardized_density(0.0) > DENSITY_FLOOR:
        return 0.0
    # z = 0 is an amplitude root; start at the densest quadrature node instead
    nodes = gauss_hermite(model.degree + 2).nodes
    return float(nodes[np.argmax(model.standardized_density(nodes))])


def init_sampler(model: WaveModel, seed: int, width: float = DEFAULT_WIDTH,
                 max_step_out: int = DEFAULT_MAX_STEP_OUT) -> SamplerState:
    """Fresh sampler state at ``z = 0`` driven by ``PCG64(seed)``."""
    return SamplerState(
        current=_start_point(model),
        rng=np.random.Generator(np.random.PCG64(seed)),
        width=float(width),
        max_step_out=int(max_step_out),
    )


def _run(state: SamplerState, model: WaveModel, burn_in: int, n_out: int, thinning: int):
    up, down = recurrence_coefficients(model.degree)
    draws, z, cap_hits = _kernels.slice_chain(
        model.coeffs, up, down, float(state.current), state.width, state.max_step_out,
        int(burn_in), int(n_out), int(thinning), state.rng,
    )
    state.current = float(z)
    if cap_hits:
        state.cap_hits += int(cap_hits)
        logger.warning("slice step-out hit its cap of %d steps %d time(s)",
                       state.max_step_out, cap_hits)
    return draws


def next_sample(state: SamplerState, model: WaveModel) -> float:
    """One slice-sampling transition; returns the new point on the original scale."""
    _run(state, model, 0, 1, 1)
    return model.scale * state.current + model.location


def sample_n(model: WaveModel, n: int, seed: int, burn_in: int = 100, thinning: int = 1) -> np.ndarray:
    """``n`` draws after ``burn_in`` transitions, keeping every ``thinning``-th."""
    if n < 0 or burn_in < 0 or thinning < 1:
        raise ValueError("need n >= 0, burn_in >= 0 and thinning >= 1")
    state = init_sampler(model, seed)
    if n == 0:
        return np.empty(0)
    draws = _run(state, model, burn_in, n, thinning)
    return model.scale * draws + model.location


def integrated_autocorr_time(x, c: float = 5.0) -> float:
    """Integrated autocorrelation time with Sokal's automatic window.

    The variance of a chain mean is ``tau * var / n``; this is the ``tau``.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    if n < 2:
        return 1.0
    y = x - x.mean()
    size = 1 << (2 * n - 1).bit_length()
    freq = np.fft.rfft(y, n=size)
    acf = np.fft.irfft(freq * np.conjugate(freq), n=size)[:n]
    if acf[0] <= 0:
        return 1.0
    acf /= acf[0]
    taus = 2.0 * np.cumsum(acf) - 1.0
    window = np.arange(n) >= c * taus
    m = int(np.argmax(window)) if window.any() else n - 1
    return float(max(taus[m], 1.0))
