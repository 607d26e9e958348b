"""Synthetic observations ``g = K u + e`` with Gaussian blur and AWGN."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import convolve
from .rng import standard_normals
from .types import BlurKernel, Raster

__all__ = ["NoiseSpec", "gaussian_kernel", "degrade", "noise_field"]


@dataclass(frozen=True)
class NoiseSpec:
    sigma: float
    seed: int = 0

    def __post_init__(self):
        if not (self.sigma >= 0 and np.isfinite(self.sigma)):
            raise ValueError(f"noise sigma must be finite and >= 0, got {self.sigma}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def gaussian_kernel(size: int, sigma: float) -> BlurKernel:
    """Isotropic Gaussian on a ``size x size`` grid, normalized to unit sum."""
    if size < 1 or size % 2 != 1:
        raise ValueError(f"kernel size must be odd and positive, got {size}")
    if not sigma > 0:
        raise ValueError(f"kernel sigma must be positive, got {sigma}")
    half = (size - 1) // 2
    x = np.arange(-half, half + 1, dtype=np.float64)
    g1 = np.exp(-(x ** 2) / (2.0 * sigma ** 2))
    w = np.outer(g1, g1)
    return BlurKernel(w / w.sum(), sigma=float(sigma))


def noise_field(shape: tuple[int, int], noise: NoiseSpec) -> np.ndarray:
    if noise.sigma == 0:
        return np.zeros(shape)
    n = shape[0] * shape[1]
    return noise.sigma * standard_normals(noise.seed, n).reshape(shape)


def degrade(u, kernel: BlurKernel, noise: NoiseSpec) -> Raster:
    """Blur ``u`` periodically, then add unclipped white Gaussian noise."""
    arr = np.asarray(u, dtype=np.float64)
    if kernel.size == 1 and kernel.weights[0, 0] == 1.0:
        blurred = arr.copy()
    else:
        blurred = convolve(arr, kernel).data
    if noise.sigma == 0:
        return Raster(blurred)
    return Raster(blurred + noise_field(arr.shape, noise))
