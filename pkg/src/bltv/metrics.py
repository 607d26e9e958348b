"""Restoration quality metrics: ISNR and Gaussian-window SSIM."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

__all__ = ["SsimConfig", "isnr", "ssim", "ssim_map"]


def _pair(a, b, name_a="a", name_b="b"):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"{name_a} shape {a.shape} differs from {name_b} shape {b.shape}")
    return a, b


def isnr(restored, observed, truth) -> float:
    """Improvement in SNR, ``10 log10(|g - u|^2 / |u* - u|^2)`` in dB.

    Returns ``inf`` when ``restored`` equals ``truth`` exactly.
    """
    r, g = _pair(restored, observed, "restored", "observed")
    _, u = _pair(r, truth, "restored", "truth")
    num = float(np.sum((g - u) ** 2))
    den = float(np.sum((r - u) ** 2))
    if den == 0.0:
        return float("inf")
    if num == 0.0:
        return float("-inf")
    return 10.0 * np.log10(num / den)


@dataclass(frozen=True)
class SsimConfig:
    window_size: int = 11
    window_sigma: float = 1.5
    k1: float = 0.01
    k2: float = 0.03
    dynamic_range: float = 255.0

    def __post_init__(self):
        if self.window_size < 3 or self.window_size % 2 != 1:
            raise ValueError("window_size must be odd and >= 3")
        if not (self.k1 > 0 and self.k2 > 0):
            raise ValueError("k1 and k2 must be positive")

    def window(self) -> np.ndarray:
        half = (self.window_size - 1) // 2
        x = np.arange(-half, half + 1, dtype=np.float64)
        g = np.exp(-(x ** 2) / (2 * self.window_sigma ** 2))
        g /= g.sum()
        return np.outer(g, g)


def _filter(a: np.ndarray, win: np.ndarray) -> np.ndarray:
    return fftconvolve(a, win, mode="valid")


def ssim_map(a, b, cfg: SsimConfig = SsimConfig()) -> np.ndarray:
    """Local SSIM at every window position fully inside the image."""
    a, b = _pair(a, b)
    if min(a.shape) < cfg.window_size:
        raise ValueError(f"image {a.shape} smaller than the {cfg.window_size}px SSIM window")
    win = cfg.window()
    c1 = (cfg.k1 * cfg.dynamic_range) ** 2
    c2 = (cfg.k2 * cfg.dynamic_range) ** 2
    mu_a = _filter(a, win)
    mu_b = _filter(b, win)
    var_a = _filter(a * a, win) - mu_a * mu_a
    var_b = _filter(b * b, win) - mu_b * mu_b
    cov = _filter(a * b, win) - mu_a * mu_b
    num = (2 * mu_a * mu_b + c1) * (2 * cov + c2)
    den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    return num / den


def ssim(a, b, cfg: SsimConfig = SsimConfig()) -> float:
    return float(np.mean(ssim_map(a, b, cfg)))
