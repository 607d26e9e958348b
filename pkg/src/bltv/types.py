"""Dense containers shared by every stage of the restoration pipeline.

Images are stored as ``(height, width)`` float64 arrays in row-major order,
so the flat pixel index is ``row * width + col``.  Per-pixel pairs (the
split variable ``t`` and its multiplier) live in ``(height, width, 2)``
arrays, which keeps the horizontal and vertical components contiguous.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Raster",
    "GradientField",
    "ParameterMaps",
    "BlurKernel",
    "SolverState",
    "raster_new",
]


def _finite_2d(data, name: str) -> np.ndarray:
    arr = np.array(data, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must have positive dimensions, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


@dataclass(frozen=True, eq=False)
class Raster:
    """Grayscale image with nominal intensities in [0, 255]."""

    data: np.ndarray

    def __post_init__(self):
        arr = _finite_2d(self.data, "raster data")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @classmethod
    def from_flat(cls, values, width: int, height: int) -> "Raster":
        values = np.asarray(values, dtype=np.float64)
        if values.size != width * height:
            raise ValueError(
                f"expected {width * height} values for {width}x{height}, got {values.size}"
            )
        return cls(values.reshape(height, width))

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def n(self) -> int:
        return self.data.size

    def flat(self) -> np.ndarray:
        return self.data.ravel()

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.data
        return self.data.astype(dtype)


def raster_new(width: int, height: int, fill: float = 0.0) -> Raster:
    """Constant raster of the given size."""
    if width < 1 or height < 1:
        raise ValueError(f"raster dimensions must be positive, got {width}x{height}")
    if not np.isfinite(fill):
        raise ValueError("fill value must be finite")
    return Raster(np.full((height, width), float(fill)))


@dataclass(frozen=True, eq=False)
class GradientField:
    """Horizontal and vertical forward differences of a raster."""

    dh: np.ndarray
    dv: np.ndarray

    def __post_init__(self):
        dh = _finite_2d(self.dh, "dh")
        dv = _finite_2d(self.dv, "dv")
        if dh.shape != dv.shape:
            raise ValueError(f"dh and dv shapes differ: {dh.shape} vs {dv.shape}")
        object.__setattr__(self, "dh", dh)
        object.__setattr__(self, "dv", dv)

    @classmethod
    def from_pairs(cls, pairs: np.ndarray) -> "GradientField":
        """Build from an ``(H, W, 2)`` pixel-interleaved array."""
        pairs = np.asarray(pairs, dtype=np.float64)
        return cls(pairs[..., 0], pairs[..., 1])

    @property
    def width(self) -> int:
        return self.dh.shape[1]

    @property
    def height(self) -> int:
        return self.dh.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.dh.shape

    def pairs(self) -> np.ndarray:
        """``(H, W, 2)`` array holding (dh, dv) contiguously per pixel."""
        return np.stack([self.dh, self.dv], axis=-1)


@dataclass(frozen=True, eq=False)
class ParameterMaps:
    """Per-pixel scales and orientation of the local bivariate Laplacians.

    ``theta`` is the angle of the first principal axis ``(cos, sin)``;
    ``lambda1`` weights the projection on that axis and ``lambda2`` the
    projection on its normal.
    """

    lambda1: np.ndarray
    lambda2: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        l1 = _finite_2d(self.lambda1, "lambda1")
        l2 = _finite_2d(self.lambda2, "lambda2")
        th = _finite_2d(self.theta, "theta")
        if not (l1.shape == l2.shape == th.shape):
            raise ValueError("parameter maps must share one shape")
        if np.any(l1 <= 0) or np.any(l2 <= 0):
            raise ValueError("lambda maps must be strictly positive")
        if np.any(th < 0) or np.any(th >= np.pi / 2):
            raise ValueError("theta must lie in [0, pi/2)")
        for name, arr in (("lambda1", l1), ("lambda2", l2), ("theta", th)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def isotropic(cls, shape: tuple[int, int], value: float = 1.0) -> "ParameterMaps":
        ones = np.full(shape, float(value))
        return cls(ones, ones.copy(), np.zeros(shape))

    @property
    def shape(self) -> tuple[int, int]:
        return self.lambda1.shape

    def within(self, lambda_min: float, lambda_max: float) -> bool:
        return bool(
            np.all((self.lambda1 >= lambda_min) & (self.lambda1 <= lambda_max))
            and np.all((self.lambda2 >= lambda_min) & (self.lambda2 <= lambda_max))
        )


@dataclass(frozen=True, eq=False)
class BlurKernel:
    """Normalized, odd-sized convolution kernel."""

    weights: np.ndarray
    sigma: float = float("nan")

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"kernel must be square, got shape {w.shape}")
        if w.shape[0] % 2 != 1:
            raise ValueError(f"kernel size must be odd, got {w.shape[0]}")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("kernel weights must be finite and non-negative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"kernel weights must sum to 1, got {w.sum()!r}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def identity(cls) -> "BlurKernel":
        return cls(np.ones((1, 1)))

    @property
    def size(self) -> int:
        return self.weights.shape[0]


@dataclass(eq=False)
class SolverState:
    """Mutable ADMM iterate.

    ``t`` and ``rho_t`` are ``(H, W, 2)``; everything else is ``(H, W)``.
    """

    u: np.ndarray
    w: np.ndarray
    t: np.ndarray
    rho_w: np.ndarray
    rho_t: np.ndarray
    mu: float = 0.0
    k: int = 0

    def is_finite(self) -> bool:
        return bool(
            np.isfinite(self.mu)
            and self.mu >= 0
            and all(
                np.all(np.isfinite(a))
                for a in (self.u, self.w, self.t, self.rho_w, self.rho_t)
            )
        )

    def copy(self) -> "SolverState":
        return SolverState(
            self.u.copy(), self.w.copy(), self.t.copy(),
            self.rho_w.copy(), self.rho_t.copy(), self.mu, self.k,
        )
