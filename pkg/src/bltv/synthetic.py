"""Synthetic test images on the [0, 255] intensity scale."""

from __future__ import annotations

import numpy as np

from .types import Raster

__all__ = ["piecewise_constant", "oriented_stripes", "vertical_stripes", "GENERATORS"]


def piecewise_constant(size: int = 64) -> Raster:
    """Rectangles, a disk and a triangle on a dark background."""
    y, x = np.mgrid[0:size, 0:size] / size
    img = np.full((size, size), 40.0)
    img[(x > 0.1) & (x < 0.45) & (y > 0.15) & (y < 0.55)] = 200.0
    img[(x - 0.68) ** 2 + (y - 0.35) ** 2 < 0.18 ** 2] = 130.0
    img[(y > 0.62) & (y < 0.9) & (x > 0.2) & (x - 0.2 < (y - 0.62) * 2.2)] = 230.0
    img[(x > 0.6) & (x < 0.9) & (y > 0.65) & (y < 0.85)] = 90.0
    return Raster(img)


def oriented_stripes(
    size: int = 128,
    angle: float = np.pi / 6,
    period: float = 16.0,
    low: float = 50.0,
    high: float = 200.0,
    profile: str = "sine",
    supersample: int = 8,
) -> Raster:
    """Parallel stripes running along ``angle`` (radians from the x axis).

    ``profile="sine"`` varies sinusoidally across the stripes.
    ``profile="square"`` alternates between ``low`` and ``high``, with each
    pixel area-averaged over ``supersample**2`` points to anti-alias edges.
    """
    y, x = np.mgrid[0:size, 0:size].astype(np.float64)
    if profile == "sine":
        across = -np.sin(angle) * x + np.cos(angle) * y
        mid, amp = (high + low) / 2, (high - low) / 2
        return Raster(mid + amp * np.sin(2 * np.pi * across / period))
    if profile != "square":
        raise ValueError(f"unknown stripe profile {profile!r}")
    offsets = (np.arange(supersample) + 0.5) / supersample - 0.5
    frac = np.zeros((size, size))
    for oy in offsets:
        for ox in offsets:
            across = -np.sin(angle) * (x + ox) + np.cos(angle) * (y + oy)
            frac += np.mod(across, period) < period / 2
    frac /= supersample ** 2
    return Raster(low + (high - low) * frac)


def vertical_stripes(width: int, height: int, low: float = 0.0, high: float = 255.0) -> Raster:
    """Columns alternating between ``low`` and ``high``."""
    row = np.where(np.arange(width) % 2 == 0, low, high)
    return Raster(np.tile(row, (height, 1)))


GENERATORS = {
    "shapes": lambda size: piecewise_constant(size),
    "stripes": lambda size: oriented_stripes(size),
    "square-stripes": lambda size: oriented_stripes(size, profile="square"),
}
