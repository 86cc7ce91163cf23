"""Stereographic chart for the unit sphere of coefficient vectors.

A unit vector ``w = (w_0, ..., w_K)`` is sent to ``gamma_k = w_k / (1 - w_0)``
for ``k = 1..K``; the projection pole is ``(1, 0, ..., 0)``. ``gamma`` is
stored as a length-K array whose slot ``j`` holds ``gamma_{j+1}``.
"""

import numpy as np

__all__ = ["PoleError", "POLE_TOL", "project", "unproject", "unproject_jacobian"]

POLE_TOL = 1e-12


class PoleError(ValueError):
    """The projection pole ``(1, 0, ..., 0)`` has no finite image."""


def project(w) -> np.ndarray:
    """Map a unit vector of length K+1 to its unconstrained image of length K.

    ``w`` is assumed to lie on the sphere; for ``w_0 > 0`` the denominator is
    computed from the tail norm, which agrees with ``1 - w_0`` there.
    """
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 1 or w.shape[0] < 1:
        raise ValueError("w must be a non-empty 1-D vector")
    if abs(w[0] - 1.0) < POLE_TOL:
        raise PoleError("w is at the projection pole (1, 0, ..., 0)")
    tail = w[1:]
    tail_sq = float(tail @ tail)
    if w[0] > 0.0 and tail_sq > 0.0:
        # 1 - w_0 = sum_{k>=1} w_k^2 / (1 + w_0) on the sphere, without the
        # cancellation that 1 - w_0 suffers near the pole
        return tail * ((1.0 + w[0]) / tail_sq)
    return tail / (1.0 - w[0])


def unproject(gamma) -> np.ndarray:
    """Inverse projection. ``gamma = 0`` maps to ``(-1, 0, ..., 0)``."""
    gamma = np.asarray(gamma, dtype=np.float64)
    if gamma.ndim != 1:
        raise ValueError("gamma must be a 1-D vector")
    if not np.all(np.isfinite(gamma)):
        raise ValueError("gamma must be finite")
    s2 = float(gamma @ gamma)
    w = np.empty(gamma.shape[0] + 1)
    w[0] = (s2 - 1.0) / (s2 + 1.0)
    w[1:] = 2.0 * gamma / (s2 + 1.0)
    return w


def unproject_jacobian(gamma) -> np.ndarray:
    """``d w / d gamma``, shape ``(K+1, K)``.

    Row 0 is ``4 gamma_j / (S^2+1)^2``; rows ``k >= 1`` are
    ``2 delta_kj / (S^2+1) - 4 gamma_k gamma_j / (S^2+1)^2``.
    """
    gamma = np.asarray(gamma, dtype=np.float64)
    s2p1 = float(gamma @ gamma) + 1.0
    jac = np.empty((gamma.shape[0] + 1, gamma.shape[0]))
    jac[0] = 4.0 * gamma / s2p1**2
    jac[1:] = np.eye(gamma.shape[0]) * (2.0 / s2p1) - np.outer(gamma, gamma) * (4.0 / s2p1**2)
    return jac
