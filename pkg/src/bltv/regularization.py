"""TV and BLTV regularizers and their proximal maps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import gradient_array
from .types import ParameterMaps

__all__ = [
    "ProxInput",
    "tv_value",
    "bltv_value",
    "prox_anisotropic_l1",
    "prox_anisotropic_l1_field",
    "shrink_isotropic",
    "rotate",
    "rotate_back",
]


@dataclass(frozen=True)
class ProxInput:
    q: tuple[float, float]
    lambda1: float
    lambda2: float
    theta: float
    beta: float

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("beta must be positive")


def rotate(v: np.ndarray, theta) -> np.ndarray:
    """Apply the rotation by ``-theta`` to the trailing 2-vector axis."""
    c, s = np.cos(theta), np.sin(theta)
    x, y = v[..., 0], v[..., 1]
    return np.stack([c * x + s * y, -s * x + c * y], axis=-1)


def rotate_back(v: np.ndarray, theta) -> np.ndarray:
    """Transpose of :func:`rotate`."""
    c, s = np.cos(theta), np.sin(theta)
    x, y = v[..., 0], v[..., 1]
    return np.stack([c * x - s * y, s * x + c * y], axis=-1)


def tv_value(u) -> float:
    """Isotropic total variation ``sum_i ||(grad u)_i||_2``."""
    g = gradient_array(np.asarray(u, dtype=np.float64))
    return float(np.sqrt(g[..., 0] ** 2 + g[..., 1] ** 2).sum())


def _bltv_from_grad(g: np.ndarray, lambda1, lambda2, theta) -> float:
    s = rotate(g, theta)
    return float((lambda1 * np.abs(s[..., 0]) + lambda2 * np.abs(s[..., 1])).sum())


def bltv_value(u, maps: ParameterMaps) -> float:
    """Space-variant weighted l1 norm of the locally rotated gradient."""
    arr = np.asarray(u, dtype=np.float64)
    if arr.shape != maps.shape:
        raise ValueError(f"raster shape {arr.shape} does not match maps {maps.shape}")
    return _bltv_from_grad(gradient_array(arr), maps.lambda1, maps.lambda2, maps.theta)


def prox_anisotropic_l1_field(q: np.ndarray, lambda1, lambda2, theta, beta: float) -> np.ndarray:
    """Vectorized prox of ``t -> ||diag(lambda) R_theta t||_1`` with weight ``beta``.

    ``q`` has a trailing axis of length 2; the other arguments broadcast
    against its leading axes.  Soft thresholding in the rotated frame is
    exact because the rotation is orthogonal.
    """
    s = rotate(q, theta)
    thr1 = np.asarray(lambda1) / beta
    thr2 = np.asarray(lambda2) / beta
    s[..., 0] = np.sign(s[..., 0]) * np.maximum(np.abs(s[..., 0]) - thr1, 0.0)
    s[..., 1] = np.sign(s[..., 1]) * np.maximum(np.abs(s[..., 1]) - thr2, 0.0)
    return rotate_back(s, theta)


def prox_anisotropic_l1(inp: ProxInput) -> np.ndarray:
    q = np.asarray(inp.q, dtype=np.float64)
    return prox_anisotropic_l1_field(q, inp.lambda1, inp.lambda2, inp.theta, inp.beta)


def shrink_isotropic(q: np.ndarray, threshold) -> np.ndarray:
    """Prox of ``threshold * ||.||_2`` applied to each trailing 2-vector."""
    norm = np.sqrt(q[..., 0] ** 2 + q[..., 1] ** 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(norm > threshold, 1.0 - threshold / norm, 0.0)
    return q * scale[..., None]
