"""Independent oracles shared by the tests."""

import math

import mpmath as mp
import numpy as np


def hermite_mp(n, x, dps=50):
    """h_n(x) straight from the definition, in arbitrary precision."""
    with mp.workdps(dps):
        x = mp.mpf(x)
        return mp.hermite(n, x) * mp.exp(-x * x / 2) / mp.sqrt(
            mp.sqrt(mp.pi) * mp.mpf(2) ** n * mp.factorial(n)
        )


def random_unit(rng, size):
    w = rng.normal(size=size)
    return w / np.linalg.norm(w)


def fine_grid(model, lo=-16.0, hi=16.0, count=320001):
    """Standardized grid and density for brute-force integration."""
    z = np.linspace(lo, hi, count)
    return z, model.standardized_density(z), z[1] - z[0]


def tv_distance(model, ref, count=400001):
    """Total variation between a model and a reference density by fine-grid integration."""
    sd = math.sqrt(ref.variance)
    lo, hi = ref.mean - 40 * sd, ref.mean + 40 * sd
    x = np.linspace(lo, hi, count)
    return 0.5 * float(np.sum(np.abs(model.density(x) - ref.density(x)))) * (x[1] - x[0])


def tv_between_models(a, b, count=400001):
    """Total variation between two models on a grid spanning both."""
    lo = min(a.location - 30 * a.scale, b.location - 30 * b.scale)
    hi = max(a.location + 30 * a.scale, b.location + 30 * b.scale)
    x = np.linspace(lo, hi, count)
    return 0.5 * float(np.sum(np.abs(a.density(x) - b.density(x)))) * (x[1] - x[0])


def log_likelihood_central_difference_mp(gamma, z, step="1e-15", dps=40):
    """Central-difference gradient of the log-likelihood in extended precision.

    Independent of the package: basis by the plain recurrence, inverse
    projection from its formula. At 40 digits a step of 1e-15 leaves both
    roundoff and truncation error far below 1e-10, even when a data point
    sits next to an amplitude root where double-precision differencing
    cannot resolve the curvature.
    """
    with mp.workdps(dps):
        k = len(gamma)
        table = []
        for zi in z:
            zi = mp.mpf(float(zi))
            prev, cur = mp.mpf(0), mp.pi ** mp.mpf(-0.25) * mp.exp(-zi * zi / 2)
            row = [cur]
            for n in range(k):
                prev, cur = cur, zi * mp.sqrt(mp.mpf(2) / (n + 1)) * cur - mp.sqrt(mp.mpf(n) / (n + 1)) * prev
                row.append(cur)
            table.append(row)

        def ll(g):
            s2 = mp.fsum(x * x for x in g)
            w = [(s2 - 1) / (s2 + 1)] + [2 * x / (s2 + 1) for x in g]
            return mp.fsum(mp.log(mp.fdot(row, w) ** 2) for row in table)

        g0 = [mp.mpf(float(x)) for x in gamma]
        h = mp.mpf(step)
        out = []
        for j in range(k):
            gp, gm = list(g0), list(g0)
            gp[j] += h
            gm[j] -= h
            out.append(float((ll(gp) - ll(gm)) / (2 * h)))
    return np.array(out)
