"""Wave-function representation of univariate probability densities.

The square root of a density is expanded in orthonormal Hermite functions,
``f(x) ~ (sum_k w_k h_k(z))^2`` on a standardized scale ``z``, with the
coefficients fitted by maximum likelihood.
"""

__version__ = "0.1.0"

from ._accel import BACKEND
from .fit import DegenerateSampleError, FitOptions, FitReport, fit_mle, standardize
from .hermite import BasisValues, eval_basis, eval_basis_deriv, hermite_functions
from .model import WaveModel, deserialize, load_model, save_model, serialize
from .quadrature import entropy, gauss_hermite, moment, moments, project_density
from .reference import make_reference
from .sampler import init_sampler, next_sample, sample_n
from .sphere import PoleError, project, unproject

__all__ = [
    "BACKEND",
    "BasisValues",
    "DegenerateSampleError",
    "FitOptions",
    "FitReport",
    "PoleError",
    "WaveModel",
    "deserialize",
    "entropy",
    "eval_basis",
    "eval_basis_deriv",
    "fit_mle",
    "gauss_hermite",
    "hermite_functions",
    "init_sampler",
    "load_model",
    "make_reference",
    "moment",
    "moments",
    "next_sample",
    "project",
    "project_density",
    "sample_n",
    "save_model",
    "serialize",
    "standardize",
    "unproject",
]
