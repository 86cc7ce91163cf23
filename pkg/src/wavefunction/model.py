"""The fitted density object and its text document format."""

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .hermite import hermite_functions

__all__ = [
    "DENSITY_FLOOR",
    "FORMAT_VERSION",
    "ModelFormatError",
    "NormViolationError",
    "WaveModel",
    "serialize",
    "deserialize",
    "save_model",
    "load_model",
]

# Keeps log f finite at amplitude roots; far below any real likelihood term.
DENSITY_FLOOR = 1e-300

FORMAT_VERSION = 1
NORM_TOL = 1e-10
# deserialize: leave alone below this, renormalize up to the reject limit
_RENORM_SKIP = 1e-12
_RENORM_LIMIT = 1e-6


class ModelFormatError(ValueError):
    """A model document could not be read."""


class NormViolationError(ModelFormatError):
    """Coefficients in a document are too far from unit norm to repair."""


def _scalar_or_array(values, like):
    if np.ndim(like) == 0:
        return float(values.reshape(()))
    return values


@dataclass(frozen=True, eq=False)
class WaveModel:
    """Density ``(sum_k w_k h_k(z))^2 / scale`` with ``z = (x - location) / scale``.

    Parameters
    ----------
    coeffs : array_like
        Unit-norm coefficient vector ``w_0..w_K``.
    location, scale : float
        Affine standardization; the standardized variable has variance
        roughly one half.
    """

    coeffs: np.ndarray
    location: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        w = np.array(self.coeffs, dtype=np.float64).reshape(-1)
        if w.shape[0] < 1:
            raise ValueError("coeffs must have at least one entry")
        if not np.all(np.isfinite(w)):
            raise ValueError("coeffs must be finite")
        norm_err = abs(float(w @ w) - 1.0)
        if norm_err > NORM_TOL:
            raise ValueError(f"coeffs must be unit norm (|sum w^2 - 1| = {norm_err:.3g})")
        if not (np.isfinite(self.scale) and self.scale > 0):
            raise ValueError(f"scale must be positive and finite, got {self.scale!r}")
        if not np.isfinite(self.location):
            raise ValueError("location must be finite")
        w.flags.writeable = False
        object.__setattr__(self, "coeffs", w)
        object.__setattr__(self, "location", float(self.location))
        object.__setattr__(self, "scale", float(self.scale))

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def standardize(self, x):
        return (np.asarray(x, dtype=np.float64) - self.location) / self.scale

    def amplitude(self, z):
        """``sum_k w_k h_k(z)`` on the standardized scale."""
        z_arr = np.asarray(z, dtype=np.float64)
        amp = hermite_functions(z_arr, self.degree) @ self.coeffs
        return _scalar_or_array(amp, z)

    def standardized_density(self, z):
        amp = np.asarray(self.amplitude(z))
        return _scalar_or_array(amp * amp, z)

    def density(self, x):
        """Density on the original scale (includes the ``1/scale`` Jacobian)."""
        amp = np.asarray(self.amplitude(self.standardize(x)))
        return _scalar_or_array(amp * amp / self.scale, x)

    def log_density(self, x):
        amp = np.asarray(self.amplitude(self.standardize(x)))
        sq = amp * amp
        out = np.log(np.maximum(sq, DENSITY_FLOOR))
        return _scalar_or_array(out - math.log(self.scale), x)


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def serialize(model: WaveModel) -> str:
    """Model document: JSON with every number printed to 17 significant digits."""
    coeffs = ", ".join(_fmt(c) for c in model.coeffs)
    return (
        "{\n"
        f'  "format_version": {FORMAT_VERSION},\n'
        f'  "degree": {model.degree},\n'
        f'  "location": {_fmt(model.location)},\n'
        f'  "scale": {_fmt(model.scale)},\n'
        f'  "coefficients": [{coeffs}]\n'
        "}\n"
    )


def deserialize(text: str) -> WaveModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"model document is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ModelFormatError("model document must be a JSON object")
    for key in ("format_version", "degree", "location", "scale", "coefficients"):
        if key not in doc:
            raise ModelFormatError(f"model document is missing {key!r}")
    if doc["format_version"] != FORMAT_VERSION:
        raise ModelFormatError(f"unknown format_version {doc['format_version']!r}")

    degree = doc["degree"]
    if not isinstance(degree, int) or isinstance(degree, bool) or degree < 0:
        raise ModelFormatError(f"degree must be a non-negative integer, got {degree!r}")
    raw = doc["coefficients"]
    if not isinstance(raw, list) or not all(
        isinstance(c, (int, float)) and not isinstance(c, bool) for c in raw
    ):
        raise ModelFormatError("coefficients must be an array of numbers")
    if len(raw) != degree + 1:
        raise ModelFormatError(f"degree {degree} needs {degree + 1} coefficients, got {len(raw)}")
    for key in ("location", "scale"):
        if not isinstance(doc[key], (int, float)) or isinstance(doc[key], bool):
            raise ModelFormatError(f"{key} must be a number")

    w = np.array(raw, dtype=np.float64)
    if not np.all(np.isfinite(w)):
        raise ModelFormatError("coefficients must be finite")
    norm_err = abs(float(w @ w) - 1.0)
    if norm_err > _RENORM_LIMIT:
        raise NormViolationError(f"coefficients are not unit norm (|sum w^2 - 1| = {norm_err:.3g})")
    if norm_err > _RENORM_SKIP:
        w = w / math.sqrt(float(w @ w))
    try:
        return WaveModel(w, location=float(doc["location"]), scale=float(doc["scale"]))
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from None


def save_model(model: WaveModel, path) -> None:
    Path(path).write_text(serialize(model))


def load_model(path) -> WaveModel:
    return deserialize(Path(path).read_text())
