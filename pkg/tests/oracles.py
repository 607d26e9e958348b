"""Independent reference implementations used as test oracles.

Nothing here imports the solver or operator code paths under test; the
matrices are assembled entry by entry.
"""

import numpy as np
import scipy.fft
import scipy.sparse as sp


def pixel(r, c, width):
    return r * width + c


def dense_gradient_matrices(height, width):
    """Explicit (n x n) periodic forward-difference matrices."""
    n = height * width
    dh = np.zeros((n, n))
    dv = np.zeros((n, n))
    for r in range(height):
        for c in range(width):
            i = pixel(r, c, width)
            dh[i, i] -= 1.0
            dh[i, pixel(r, (c + 1) % width, width)] += 1.0
            dv[i, i] -= 1.0
            dv[i, pixel((r + 1) % height, c, width)] += 1.0
    return dh, dv


def dense_blur_matrix(weights, height, width):
    """Explicit circulant matrix of a centered kernel."""
    size = weights.shape[0]
    half = (size - 1) // 2
    n = height * width
    k = np.zeros((n, n))
    for r in range(height):
        for c in range(width):
            i = pixel(r, c, width)
            for a in range(size):
                for b in range(size):
                    # out(r, c) += w[a, b] * u(r - (a - half), c - (b - half))
                    j = pixel((r - a + half) % height, (c - b + half) % width, width)
                    k[i, j] += weights[a, b]
    return k


def prox_objective(t, q, lambda1, lambda2, theta, beta):
    """``||diag(lambda) R_theta t||_1 + beta/2 ||t - q||^2`` on the trailing axis."""
    c, s = np.cos(theta), np.sin(theta)
    a = c * t[..., 0] + s * t[..., 1]
    b = -s * t[..., 0] + c * t[..., 1]
    d0 = t[..., 0] - q[0]
    d1 = t[..., 1] - q[1]
    return lambda1 * np.abs(a) + lambda2 * np.abs(b) + 0.5 * beta * (d0 * d0 + d1 * d1)


def brute_force_prox(q, lambda1, lambda2, theta, beta, points=161, levels=6):
    """Coarse-to-fine grid search for the prox minimizer; returns (t, value)."""
    q = np.asarray(q, dtype=float)
    half = np.hypot(lambda1, lambda2) / beta + 1e-3
    center = q.copy()
    best_t, best_v = center, prox_objective(center, q, lambda1, lambda2, theta, beta)
    for _ in range(levels):
        xs = np.linspace(center[0] - half, center[0] + half, points)
        ys = np.linspace(center[1] - half, center[1] + half, points)
        grid = np.stack(np.meshgrid(xs, ys, indexing="ij"), axis=-1)
        vals = prox_objective(grid, q, lambda1, lambda2, theta, beta)
        idx = np.unravel_index(np.argmin(vals), vals.shape)
        if vals[idx] < best_v:
            best_v, best_t = float(vals[idx]), grid[idx].copy()
        center = best_t
        half *= 4.0 / (points - 1)
    return best_t, best_v


class PlainRofAdmm:
    """Minimal TV-L2 ADMM with discrepancy-ball projection.

    Same splitting, penalties, initialization and stopping rule as the
    library solver, written against sparse difference matrices and complex
    FFTs from scipy.
    """

    def __init__(self, g, weights, sigma, beta_t=1.0, beta_w=1.0, tau=1.0):
        self.g = np.asarray(g, dtype=float)
        self.h, self.w = self.g.shape
        n = self.g.size
        self.beta_t, self.beta_w = beta_t, beta_w
        self.radius = tau * sigma * np.sqrt(n)

        eye_h = sp.identity(self.h, format="csr")
        eye_w = sp.identity(self.w, format="csr")
        fwd_w = sp.csr_matrix(np.roll(np.eye(self.w), 1, axis=1) - np.eye(self.w))
        fwd_h = sp.csr_matrix(np.roll(np.eye(self.h), 1, axis=1) - np.eye(self.h))
        self.Dh = sp.kron(eye_h, fwd_w, format="csr")
        self.Dv = sp.kron(fwd_h, eye_w, format="csr")

        size = weights.shape[0]
        pad = np.zeros((self.h, self.w))
        pad[:size, :size] = weights
        pad = np.roll(pad, (-(size // 2), -(size // 2)), axis=(0, 1))
        self.otf = scipy.fft.fft2(pad)
        lap = (np.abs(scipy.fft.fft2(self._col(self.Dh))) ** 2
               + np.abs(scipy.fft.fft2(self._col(self.Dv))) ** 2)
        self.den = beta_t * lap + beta_w * np.abs(self.otf) ** 2

    def _col(self, m):
        e0 = np.zeros(self.h * self.w)
        e0[0] = 1.0
        return (m @ e0).reshape(self.h, self.w)

    def K(self, u):
        return np.real(scipy.fft.ifft2(self.otf * scipy.fft.fft2(u)))

    def Kt(self, u):
        return np.real(scipy.fft.ifft2(np.conj(self.otf) * scipy.fft.fft2(u)))

    def run(self, max_iter=1500, tol=1e-6):
        g, bt, bw = self.g, self.beta_t, self.beta_w
        u = g.ravel().copy()
        th, tv = self.Dh @ u, self.Dv @ u
        w = (self.K(g) - g).ravel()
        lh, lv, lw = np.zeros_like(u), np.zeros_like(u), np.zeros_like(u)
        k = 0
        while k < max_iter:
            k += 1
            u_old = u
            rhs = (self.Dh.T @ (bt * th - lh) + self.Dv.T @ (bt * tv - lv)).reshape(g.shape) \
                + self.Kt((bw * (w + g.ravel()) - lw).reshape(g.shape))
            u = np.real(scipy.fft.ifft2(scipy.fft.fft2(rhs) / self.den)).ravel()
            r = self.K(u.reshape(g.shape)).ravel() - g.ravel()
            v = r + lw / bw
            nv = np.sqrt(np.sum(v * v))
            w = v if nv <= self.radius else v * (self.radius / nv)
            gh, gv = self.Dh @ u, self.Dv @ u
            ah, av = gh + lh / bt, gv + lv / bt
            mag = np.sqrt(ah * ah + av * av)
            keep = np.maximum(mag - 1.0 / bt, 0.0) / np.where(mag > 0, mag, 1.0)
            th, tv = ah * keep, av * keep
            lw = lw - bw * (w - r)
            lh = lh - bt * (th - gh)
            lv = lv - bt * (tv - gv)
            delta = np.linalg.norm(u - u_old) / np.linalg.norm(u_old)
            if k > 1 and delta <= tol:
                break
        return u.reshape(g.shape), k
