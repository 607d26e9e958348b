"""Per-pixel BLD parameter maps from windowed gradient statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bld
from .operators import gradient_array
from .types import ParameterMaps

__all__ = ["EstimationConfig", "estimate_maps", "maps_from_gradient", "window_samples", "box_sum"]


@dataclass(frozen=True)
class EstimationConfig:
    """Window radius and ML guards; the window is ``(2*radius+1)**2`` pixels."""

    radius: int = 8
    grid_size: int = bld.DEFAULT_GRID_SIZE
    lambda_min: float = bld.DEFAULT_LAMBDA_MIN
    lambda_max: float = bld.DEFAULT_LAMBDA_MAX
    eps: float = bld.DEFAULT_SCALE_EPS
    theta_eps: float = bld.DEFAULT_THETA_EPS

    def __post_init__(self):
        if self.radius < 1:
            raise ValueError(f"radius must be >= 1, got {self.radius}")
        if self.grid_size < 2:
            raise ValueError(f"grid_size must be >= 2, got {self.grid_size}")
        if not 0 < self.lambda_min <= self.lambda_max:
            raise ValueError("need 0 < lambda_min <= lambda_max")
        if self.eps < 0 or self.theta_eps < 0:
            raise ValueError("eps values must be non-negative")


def box_sum(a: np.ndarray, radius: int) -> np.ndarray:
    """Periodic sum over the square window centered at every pixel.

    Built from shifted copies added in a fixed order, so circularly shifting
    ``a`` shifts the result bit-for-bit.
    """
    rows = a.copy()
    for d in range(1, radius + 1):
        rows += np.roll(a, d, axis=1)
        rows += np.roll(a, -d, axis=1)
    out = rows.copy()
    for d in range(1, radius + 1):
        out += np.roll(rows, d, axis=0)
        out += np.roll(rows, -d, axis=0)
    return out


def window_samples(grad: np.ndarray, row: int, col: int, radius: int) -> np.ndarray:
    """Gradient vectors in the periodic window around ``(row, col)`` as ``(N, 2)``."""
    h, w = grad.shape[:2]
    rr = np.arange(row - radius, row + radius + 1) % h
    cc = np.arange(col - radius, col + radius + 1) % w
    return grad[np.ix_(rr, cc)].reshape(-1, 2)


def estimate_maps(u, cfg: EstimationConfig = EstimationConfig()) -> ParameterMaps:
    """Fit a BLD to the gradients around every pixel of ``u``.

    Equivalent to calling :func:`bld.fit` on :func:`window_samples` for each
    pixel, vectorized across pixels one candidate angle at a time.
    """
    return maps_from_gradient(gradient_array(np.asarray(u, dtype=np.float64)), cfg)


def maps_from_gradient(grad: np.ndarray, cfg: EstimationConfig = EstimationConfig()) -> ParameterMaps:
    """Windowed BLD fit on an ``(H, W, 2)`` field of gradient samples."""
    gx, gy = grad[..., 0], grad[..., 1]
    shape = gx.shape
    n_window = (2 * cfg.radius + 1) ** 2

    best_obj = np.full(shape, np.inf)
    best_q = np.zeros(shape, dtype=np.intp)
    best_s1 = np.zeros(shape)
    best_s2 = np.zeros(shape)
    for q, theta in enumerate(bld.theta_grid(cfg.grid_size)):
        c, s = np.cos(theta), np.sin(theta)
        s1 = box_sum(np.abs(c * gx + s * gy), cfg.radius)
        s2 = box_sum(np.abs(-s * gx + c * gy), cfg.radius)
        obj = np.log(s1 + cfg.theta_eps) + np.log(s2 + cfg.theta_eps)
        better = obj < best_obj
        best_obj[better] = obj[better]
        best_q[better] = q
        best_s1[better] = s1[better]
        best_s2[better] = s2[better]

    theta_map = bld.theta_grid(cfg.grid_size)[best_q]
    with np.errstate(divide="ignore"):
        l1 = 1.0 / (best_s1 / n_window + cfg.eps)
        l2 = 1.0 / (best_s2 / n_window + cfg.eps)
    l1 = np.clip(l1, cfg.lambda_min, cfg.lambda_max)
    l2 = np.clip(l2, cfg.lambda_min, cfg.lambda_max)
    return ParameterMaps(l1, l2, theta_map)
