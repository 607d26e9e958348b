"""Reproducible random variates.

The raw stream is numpy's PCG64 bit generator, whose output for a given seed
is stable across numpy releases (unlike the ``Generator`` sampling methods).
Uniforms are formed from the top 53 bits of each 64-bit word,
``u = ((x >> 11) + 0.5) * 2**-53``, which lies strictly inside (0, 1).
Gaussians use the Box-Muller transform on consecutive uniform pairs and
Laplace variates use the inverse CDF.
"""

from __future__ import annotations

import numpy as np

__all__ = ["uniforms", "standard_normals", "laplace_ppf", "laplace_variates"]

_TWO_POW_M53 = 2.0 ** -53


def uniforms(seed: int, size: int, stream: int = 0) -> np.ndarray:
    """``size`` uniforms in (0, 1) from PCG64 seeded with ``(seed, stream)``."""
    if seed < 0 or seed >= 2 ** 64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    bitgen = np.random.PCG64(np.random.SeedSequence([int(seed), int(stream)]))
    raw = bitgen.random_raw(size)
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * _TWO_POW_M53


def standard_normals(seed: int, size: int, stream: int = 0) -> np.ndarray:
    """Standard normal variates by Box-Muller (both branches used)."""
    m = (size + 1) // 2
    u = uniforms(seed, 2 * m, stream)
    u1, u2 = u[0::2], u[1::2]
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    z = np.empty(2 * m)
    z[0::2] = radius * np.cos(angle)
    z[1::2] = radius * np.sin(angle)
    return z[:size]


def laplace_ppf(u, scale: float = 1.0):
    """Inverse CDF of the zero-mean Laplace distribution with the given scale."""
    u = np.asarray(u, dtype=np.float64)
    d = u - 0.5
    return -scale * np.sign(d) * np.log1p(-2.0 * np.abs(d))


def laplace_variates(seed: int, size: int, scale: float, stream: int = 0) -> np.ndarray:
    return laplace_ppf(uniforms(seed, size, stream), scale)
