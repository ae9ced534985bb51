"""Path-integral pricing of proportional step and double-barrier step calls."""
from .baseline import (KernelDiagnostics, bs_call_closed, bs_call_kernel, bs_kernel,
                       sdb_price, uosb_price)
from .core import (MarketParams, ModelCoefficients, OptionKind, StepOptionSpec,
                   daily_knockout_factor, model_coefficients, normal_cdf)
from .montecarlo import McEstimate, PathConfig, mc_convergence_report, mc_price
from .quadrature import QuadConfig, integrate, integrate_semi_infinite
from .spectrum import (EigenMode, WellGeometry, approx_mode_high, approx_mode_low,
                       build_spectrum, error_formulas, eval_wavefunction, exact_mode,
                       n_max, partition)
from .step import (PricingResult, ScatteringState, delta, pdbs_price, price,
                   pso_kernel, pso_price, scattering_state)

__version__ = "0.1.0"

__all__ = [
    "KernelDiagnostics", "bs_call_closed", "bs_call_kernel", "bs_kernel", "sdb_price",
    "uosb_price", "MarketParams", "ModelCoefficients", "OptionKind", "StepOptionSpec",
    "daily_knockout_factor", "model_coefficients", "normal_cdf", "McEstimate", "PathConfig",
    "mc_convergence_report", "mc_price", "QuadConfig", "integrate", "integrate_semi_infinite",
    "EigenMode", "WellGeometry", "approx_mode_high", "approx_mode_low", "build_spectrum",
    "error_formulas", "eval_wavefunction", "exact_mode", "n_max", "partition",
    "PricingResult", "ScatteringState", "delta", "pdbs_price", "price", "pso_kernel",
    "pso_price", "scattering_state",
]
