"""Periodic finite differences, circular convolution and their DFT symbols.

All operators use wrap-around boundaries so that the 2-D DFT diagonalizes
them exactly.  Functions accept either :class:`~bltv.types.Raster` objects
or plain 2-D arrays; the ``*_array`` variants are the allocation-light
kernels used inside the solver loop.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .types import BlurKernel, GradientField, Raster

__all__ = [
    "FourierSymbols",
    "gradient",
    "gradient_adjoint",
    "gradient_array",
    "gradient_adjoint_array",
    "convolve",
    "build_symbols",
    "apply_symbol",
    "kernel_to_otf",
]


def gradient_array(u: np.ndarray) -> np.ndarray:
    """Forward differences of ``u`` as an ``(H, W, 2)`` array."""
    out = np.empty(u.shape + (2,))
    out[..., 0] = np.roll(u, -1, axis=1) - u
    out[..., 1] = np.roll(u, -1, axis=0) - u
    return out


def gradient_adjoint_array(p: np.ndarray) -> np.ndarray:
    """Transpose of :func:`gradient_array` (negative backward divergence)."""
    ph = p[..., 0]
    pv = p[..., 1]
    return (np.roll(ph, 1, axis=1) - ph) + (np.roll(pv, 1, axis=0) - pv)


def gradient(u) -> GradientField:
    """Periodic forward-difference gradient.

    ``dh[r, c] = u[r, c+1] - u[r, c]`` and ``dv[r, c] = u[r+1, c] - u[r, c]``
    with indices taken modulo the image size.
    """
    arr = np.asarray(u, dtype=np.float64)
    return GradientField(np.roll(arr, -1, axis=1) - arr, np.roll(arr, -1, axis=0) - arr)


def gradient_adjoint(p: GradientField) -> Raster:
    """Exact matrix adjoint of :func:`gradient`."""
    dh, dv = p.dh, p.dv
    return Raster((np.roll(dh, 1, axis=1) - dh) + (np.roll(dv, 1, axis=0) - dv))


def _check_kernel_fits(kernel: BlurKernel, shape: tuple[int, int]) -> None:
    if kernel.size > min(shape):
        raise ValueError(
            f"kernel size {kernel.size} exceeds image dimensions {shape[1]}x{shape[0]}"
        )


def kernel_to_otf(kernel: BlurKernel, shape: tuple[int, int]) -> np.ndarray:
    """DFT of the kernel zero-padded to ``shape`` with its center at (0, 0)."""
    _check_kernel_fits(kernel, shape)
    half = (kernel.size - 1) // 2
    psf = np.zeros(shape)
    psf[: kernel.size, : kernel.size] = kernel.weights
    psf = np.roll(psf, (-half, -half), axis=(0, 1))
    return np.fft.fft2(psf)


def convolve(u, kernel: BlurKernel) -> Raster:
    """Circular 2-D convolution with the kernel centered at its midpoint.

    Evaluated directly in the spatial domain as a sum of shifted copies, so
    it serves as an independent check on the Fourier route.
    """
    arr = np.asarray(u, dtype=np.float64)
    _check_kernel_fits(kernel, arr.shape)
    half = (kernel.size - 1) // 2
    out = np.zeros_like(arr)
    w = kernel.weights
    for a in range(kernel.size):
        for b in range(kernel.size):
            if w[a, b] != 0.0:
                out += w[a, b] * np.roll(arr, (a - half, b - half), axis=(0, 1))
    return Raster(out)


@dataclass(frozen=True, eq=False)
class FourierSymbols:
    """Eigenvalues of the blur and difference operators under the 2-D DFT.

    Arrays have the image shape ``(height, width)`` in ``numpy.fft`` layout.
    """

    sym_K: np.ndarray
    sym_Dh: np.ndarray
    sym_Dv: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.sym_K.shape

    @property
    def width(self) -> int:
        return self.shape[1]

    @property
    def height(self) -> int:
        return self.shape[0]

    @property
    def DtD(self) -> np.ndarray:
        """Symbol of ``D^T D`` (the periodic negative Laplacian)."""
        return np.abs(self.sym_Dh) ** 2 + np.abs(self.sym_Dv) ** 2

    @property
    def KtK(self) -> np.ndarray:
        return np.abs(self.sym_K) ** 2


def build_symbols(kernel: BlurKernel, width: int, height: int) -> FourierSymbols:
    shape = (height, width)
    sym_K = kernel_to_otf(kernel, shape)

    # first columns of the circulant difference matrices
    dh = np.zeros(shape)
    dh[0, 0] = -1.0
    dh[0, -1 % width] += 1.0
    dv = np.zeros(shape)
    dv[0, 0] = -1.0
    dv[-1 % height, 0] += 1.0
    return FourierSymbols(sym_K, np.fft.fft2(dh), np.fft.fft2(dv))


def apply_symbol(symbol: np.ndarray, u: np.ndarray, adjoint: bool = False) -> np.ndarray:
    """Multiply ``u`` by the circulant operator with the given DFT symbol."""
    s = np.conj(symbol) if adjoint else symbol
    return np.real(np.fft.ifft2(s * np.fft.fft2(u)))
