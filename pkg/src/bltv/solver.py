"""ADMM for the discrepancy-constrained TV-L2 and BLTV-L2 models.

The problem is split with ``w = K u - g`` and ``t = D u``.  Each sweep runs
the u-step (FFT solve), the w-step (projection onto the discrepancy ball,
which fixes the fidelity weight ``mu``), the t-step (per-pixel prox) and the
multiplier ascent, in that order.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .estimation import EstimationConfig, estimate_maps
from .operators import FourierSymbols, build_symbols, gradient_adjoint_array, gradient_array
from .regularization import _bltv_from_grad, prox_anisotropic_l1_field, shrink_isotropic
from .types import BlurKernel, ParameterMaps, Raster, SolverState

__all__ = [
    "Model",
    "SolverConfig",
    "IterationReport",
    "SolverResult",
    "NumericalError",
    "solve",
    "u_step",
    "w_step",
    "t_step",
    "multiplier_step",
    "refresh_maps",
    "refresh_due",
    "objective",
]

log = logging.getLogger(__name__)


class NumericalError(RuntimeError):
    """The ADMM iterate became non-finite."""


class Model(str, enum.Enum):
    TV = "tv"
    BLTV = "bltv"


@dataclass(frozen=True)
class SolverConfig:
    """Hyperparameters of the ADMM loop.

    ``fixed_mu`` bypasses the discrepancy rule and keeps the fidelity weight
    constant; it exists for diagnostics and objective-decrease checks.
    """

    model: Model = Model.BLTV
    sigma: float = 1.0
    beta_t: float = 1.0
    beta_w: float = 1.0
    tau: float = 1.0
    max_iter: int = 1500
    tol: float = 1e-6
    map_refresh_every: int = 300
    estimation: EstimationConfig = field(default_factory=EstimationConfig)
    fixed_mu: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        if not (self.beta_t > 0 and self.beta_w > 0):
            raise ValueError("penalties beta_t, beta_w must be positive")
        if not self.sigma > 0:
            raise ValueError("noise sigma must be positive")
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.map_refresh_every < 0:
            raise ValueError("map_refresh_every must be >= 0")
        if self.fixed_mu is not None and self.fixed_mu < 0:
            raise ValueError("fixed_mu must be non-negative")

    def discrepancy(self, n: int) -> float:
        return self.tau * self.sigma * np.sqrt(n)


@dataclass(frozen=True)
class IterationReport:
    k: int
    delta: float
    primal_res_t: float
    primal_res_w: float
    mu: float
    objective: float


@dataclass
class SolverResult:
    u: Raster
    maps: ParameterMaps
    history: list[IterationReport]
    state: SolverState

    @property
    def iterations(self) -> int:
        return self.state.k

    def __iter__(self):
        # allows ``u, maps, history = solve(...)``
        return iter((self.u, self.maps, self.history))


class _Fourier:
    """Real-FFT view of the operator symbols for one grid."""

    def __init__(self, symbols: FourierSymbols):
        w = symbols.width
        half = w // 2 + 1
        self.shape = symbols.shape
        self.K = symbols.sym_K[:, :half]
        self.Dh = symbols.sym_Dh[:, :half]
        self.Dv = symbols.sym_Dv[:, :half]
        self.KtK = np.abs(self.K) ** 2
        self.DtD = np.abs(self.Dh) ** 2 + np.abs(self.Dv) ** 2

    def fft(self, a):
        return np.fft.rfft2(a)

    def ifft(self, a):
        return np.fft.irfft2(a, s=self.shape)

    def blur(self, u):
        return self.ifft(self.K * self.fft(u))


def _fourier(symbols) -> _Fourier:
    return symbols if isinstance(symbols, _Fourier) else _Fourier(symbols)


def u_step(
    symbols,
    t: np.ndarray,
    w: np.ndarray,
    rho_t: np.ndarray,
    rho_w: np.ndarray,
    g: np.ndarray,
    beta_t: float,
    beta_w: float,
) -> np.ndarray:
    """Solve ``(beta_t D^T D + beta_w K^T K) u = D^T(beta_t t - rho_t) + K^T(beta_w (w + g) - rho_w)``."""
    f = _fourier(symbols)
    a = beta_t * t - rho_t
    b = beta_w * (w + g) - rho_w
    num = (
        np.conj(f.Dh) * f.fft(a[..., 0])
        + np.conj(f.Dv) * f.fft(a[..., 1])
        + np.conj(f.K) * f.fft(b)
    )
    den = beta_t * f.DtD + beta_w * f.KtK
    assert np.all(den > 0), "singular u-step system"
    return f.ifft(num / den)


def w_step(
    residual: np.ndarray,
    rho_w: np.ndarray,
    beta_w: float,
    radius: float,
    fixed_mu: Optional[float] = None,
) -> tuple[np.ndarray, float]:
    """Minimize ``mu/2 |w|^2 - rho_w.w + beta_w/2 |w - residual|^2``.

    ``mu`` is the smallest non-negative weight keeping ``|w| <= radius``
    (``radius = tau sigma sqrt(n)``), which makes ``w`` the projection of
    ``residual + rho_w / beta_w`` onto that ball.
    """
    v = residual + rho_w / beta_w
    if fixed_mu is not None:
        mu = float(fixed_mu)
    else:
        norm_v = float(np.linalg.norm(v))
        mu = 0.0 if norm_v <= radius else beta_w * (norm_v / radius - 1.0)
    w = (rho_w + beta_w * residual) / (mu + beta_w)
    return w, mu


def t_step(
    du: np.ndarray,
    rho_t: np.ndarray,
    maps,
    beta_t: float,
    isotropic: bool = False,
) -> np.ndarray:
    """Per-pixel prox at anchors ``du + rho_t / beta_t``.

    ``maps`` only needs ``lambda1``, ``lambda2`` and ``theta`` attributes;
    they are ignored in isotropic (TV) mode, which shrinks with unit weight.
    """
    q = du + rho_t / beta_t
    if isotropic:
        return shrink_isotropic(q, 1.0 / beta_t)
    return prox_anisotropic_l1_field(q, maps.lambda1, maps.lambda2, maps.theta, beta_t)


def multiplier_step(
    state: SolverState,
    du: np.ndarray,
    residual: np.ndarray,
    beta_t: float,
    beta_w: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Dual ascent on both constraints; updates ``state`` in place."""
    state.rho_w = state.rho_w - beta_w * (state.w - residual)
    state.rho_t = state.rho_t - beta_t * (state.t - du)
    return state.rho_w, state.rho_t


def refresh_due(k: int, every: int) -> bool:
    return every > 0 and k > 0 and k % every == 0


def refresh_maps(u, cfg: SolverConfig) -> ParameterMaps:
    return estimate_maps(u, cfg.estimation)


def objective(du: np.ndarray, residual: np.ndarray, maps: ParameterMaps, mu: float, isotropic: bool) -> float:
    fid = 0.5 * mu * float(np.dot(residual.ravel(), residual.ravel()))
    if isotropic:
        reg = float(np.sqrt(du[..., 0] ** 2 + du[..., 1] ** 2).sum())
    else:
        reg = _bltv_from_grad(du, maps.lambda1, maps.lambda2, maps.theta)
    return reg + fid


def solve(
    g,
    kernel: BlurKernel,
    cfg: SolverConfig,
    maps: Optional[ParameterMaps] = None,
    callback: Optional[Callable[[IterationReport], None]] = None,
) -> SolverResult:
    """Restore ``g`` by ADMM.

    Args:
        g: observed image.
        kernel: the (known) blur.
        cfg: solver settings; ``cfg.model`` selects TV or BLTV.
        maps: initial parameter maps for BLTV. Estimated from ``g`` when
            omitted; ignored for TV.
        callback: receives every :class:`IterationReport` as it is produced.

    Returns:
        A :class:`SolverResult`, which also unpacks as ``(u, maps, history)``.

    Raises:
        NumericalError: if the iterate stops being finite.
    """
    g = np.array(g, dtype=np.float64)
    height, width = g.shape
    n = g.size
    isotropic = cfg.model is Model.TV
    f = _Fourier(build_symbols(kernel, width, height))
    radius = cfg.discrepancy(n)

    if isotropic:
        maps = ParameterMaps.isotropic(g.shape)
    elif maps is None:
        maps = estimate_maps(g, cfg.estimation)
    elif maps.shape != g.shape:
        raise ValueError(f"maps shape {maps.shape} does not match image {g.shape}")

    u = g.copy()
    du = gradient_array(u)
    residual = f.blur(u) - g
    state = SolverState(
        u=u, w=residual.copy(), t=du.copy(),
        rho_w=np.zeros_like(g), rho_t=np.zeros_like(du),
    )
    _, state.mu = w_step(residual, state.rho_w, cfg.beta_w, radius, cfg.fixed_mu)

    history: list[IterationReport] = []
    while state.k < cfg.max_iter:
        u_prev = state.u
        state.u = u_step(f, state.t, state.w, state.rho_t, state.rho_w, g, cfg.beta_t, cfg.beta_w)
        residual = f.blur(state.u) - g
        state.w, state.mu = w_step(residual, state.rho_w, cfg.beta_w, radius, cfg.fixed_mu)
        du = gradient_array(state.u)
        state.t = t_step(du, state.rho_t, maps, cfg.beta_t, isotropic)
        multiplier_step(state, du, residual, cfg.beta_t, cfg.beta_w)
        state.k += 1

        if not state.is_finite():
            raise NumericalError(f"non-finite ADMM state at iteration {state.k}")

        prev_norm = float(np.linalg.norm(u_prev))
        change = float(np.linalg.norm(state.u - u_prev))
        delta = change / prev_norm if prev_norm > 0 else (0.0 if change == 0 else np.inf)
        report = IterationReport(
            k=state.k,
            delta=delta,
            primal_res_t=float(np.linalg.norm(state.t - du)),
            primal_res_w=float(np.linalg.norm(state.w - residual)),
            mu=state.mu,
            objective=objective(du, residual, maps, state.mu, isotropic),
        )
        history.append(report)
        if callback is not None:
            callback(report)

        # the warm start is a fixed point of the first u-step, so delta is 0 at k=1
        if state.k > 1 and delta <= cfg.tol:
            log.debug("relative change %.3e below tolerance at k=%d", delta, state.k)
            break
        if not isotropic and state.k < cfg.max_iter and refresh_due(state.k, cfg.map_refresh_every):
            maps = refresh_maps(state.u, cfg)
            log.debug("parameter maps refreshed at k=%d", state.k)

    return SolverResult(Raster(state.u), maps, history, state)
