"""Space-variant anisotropic bivariate-Laplacian TV restoration."""

from .bld import BldParams, fit, fit_scales, fit_theta, nll, sample_bld
from .degradation import NoiseSpec, degrade, gaussian_kernel
from .estimation import EstimationConfig, estimate_maps
from .metrics import SsimConfig, isnr, ssim
from .operators import build_symbols, convolve, gradient, gradient_adjoint
from .regularization import ProxInput, bltv_value, prox_anisotropic_l1, tv_value
from .solver import IterationReport, Model, NumericalError, SolverConfig, solve
from .types import BlurKernel, GradientField, ParameterMaps, Raster, SolverState, raster_new

__version__ = "0.1.0"
