"""Hot loops, in two flavours.

Every kernel exists as a numba-compiled loop and as a pure numpy/python
path. The module-level names at the bottom bind whichever one
``WAVEFUNCTION_BACKEND`` selected; ``KERNELS`` exposes both sets so the
tests and the benchmark can compare them directly.
"""

import math

import numpy as np

from ._accel import BACKEND, HAS_NUMBA, njit

PI_M4 = math.pi ** -0.25
SQRT2 = math.sqrt(2.0)


def recurrence_coefficients(degree):
    """Coefficients of the normalized three-term recurrence.

    ``h[k+1] = x * up[k] * h[k] - down[k] * h[k-1]`` for ``k = 0..degree-1``.
    Both backends read these arrays so they do identical arithmetic.
    """
    k = np.arange(max(degree, 0), dtype=np.float64)
    up = np.sqrt(2.0 / (k + 1.0))
    down = np.sqrt(k / (k + 1.0))
    return up, down


# --------------------------------------------------------------------------
# Hermite tables: rows are points, columns are degrees 0..K
# --------------------------------------------------------------------------


def _hermite_table_loop(x, up, down, gaussian):
    n = x.shape[0]
    degree = up.shape[0]
    out = np.empty((n, degree + 1))
    for i in range(n):
        xi = x[i]
        if gaussian:
            out[i, 0] = PI_M4 * np.exp(-0.5 * xi * xi)
        else:
            out[i, 0] = PI_M4
        prev = 0.0
        for k in range(degree):
            out[i, k + 1] = xi * up[k] * out[i, k] - down[k] * prev
            prev = out[i, k]
    return out


def _hermite_table_vec(x, up, down, gaussian):
    degree = up.shape[0]
    out = np.empty((x.shape[0], degree + 1))
    if gaussian:
        out[:, 0] = PI_M4 * np.exp(-0.5 * x * x)
    else:
        out[:, 0] = PI_M4
    prev = np.zeros(x.shape[0])
    for k in range(degree):
        out[:, k + 1] = x * up[k] * out[:, k] - down[k] * prev
        prev = out[:, k]
    return out


# --------------------------------------------------------------------------
# Log-likelihood and its gradient with respect to the coefficients w
# --------------------------------------------------------------------------


def _loglik_grad_loop(table, w, floor):
    n, m = table.shape
    log_floor = np.log(floor)
    total = 0.0
    grad = np.zeros(m)
    for i in range(n):
        amp = 0.0
        for k in range(m):
            amp += w[k] * table[i, k]
        dens = amp * amp
        if dens > floor:
            total += np.log(dens)
            c = 2.0 / amp
            for k in range(m):
                grad[k] += c * table[i, k]
        else:
            total += log_floor
    return total, grad


def _loglik_grad_vec(table, w, floor):
    amp = table @ w
    dens = amp * amp
    live = dens > floor
    total = np.log(dens[live]).sum() + (amp.shape[0] - live.sum()) * np.log(floor)
    grad = (2.0 / amp[live]) @ table[live]
    return float(total), grad


# --------------------------------------------------------------------------
# Slice sampler on the standardized density (sum_k w_k h_k(z))^2
# --------------------------------------------------------------------------


def _density_scalar(z, w, up, down):
    h = PI_M4 * math.exp(-0.5 * z * z)
    prev = 0.0
    amp = w[0] * h
    for k in range(up.shape[0]):
        nxt = z * up[k] * h - down[k] * prev
        prev = h
        h = nxt
        amp += w[k + 1] * h
    return amp * amp


def _make_slice_chain(density):
    def slice_chain(w, up, down, z0, width, max_step_out, burn_in, n_out, thinning, rng):
        # Stepping-out and shrinkage, one coordinate. Returns the kept draws,
        # the final state and how many times the step-out cap was hit.
        out = np.empty(n_out)
        z = z0
        fz = density(z, w, up, down)
        cap_hits = 0
        kept = 0
        total = burn_in + n_out * thinning
        for t in range(total):
            level = fz * rng.random()
            left = z - width * rng.random()
            right = left + width
            steps = 0
            while density(left, w, up, down) > level:
                if steps == max_step_out:
                    cap_hits += 1
                    break
                left -= width
                steps += 1
            steps = 0
            while density(right, w, up, down) > level:
                if steps == max_step_out:
                    cap_hits += 1
                    break
                right += width
                steps += 1
            shrinks = 0
            while True:
                cand = left + rng.random() * (right - left)
                fc = density(cand, w, up, down)
                if fc > level:
                    z = cand
                    fz = fc
                    break
                if cand < z:
                    left = cand
                else:
                    right = cand
                shrinks += 1
                if shrinks > 2000:
                    raise RuntimeError("slice collapsed onto the current point")
            if t >= burn_in and (t - burn_in) % thinning == 0:
                out[kept] = z
                kept += 1
        return out, z, cap_hits

    return slice_chain


KERNELS = {
    "numpy": {
        "hermite_table": _hermite_table_vec,
        "loglik_grad": _loglik_grad_vec,
        "density_scalar": _density_scalar,
        "slice_chain": _make_slice_chain(_density_scalar),
    }
}

if HAS_NUMBA:
    _density_scalar_nb = njit(_density_scalar)
    KERNELS["numba"] = {
        "hermite_table": njit(_hermite_table_loop),
        "loglik_grad": njit(_loglik_grad_loop),
        "density_scalar": _density_scalar_nb,
        "slice_chain": njit(_make_slice_chain(_density_scalar_nb)),
    }

_active = KERNELS[BACKEND]
hermite_table = _active["hermite_table"]
loglik_grad = _active["loglik_grad"]
density_scalar = _active["density_scalar"]
slice_chain = _active["slice_chain"]
