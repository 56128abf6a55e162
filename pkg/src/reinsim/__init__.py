"""Excess-of-loss reinsurance under a stochastic environmental factor."""

from .claims import (
    ClaimRecord,
    ClaimSet,
    ClaimsModel,
    ConditionalSizeFamily,
    ExponentialFamily,
    ExponentialWeight,
    ParetoFamily,
    conditional_cdf,
    baseline_claims,
    simulate_claims,
    simulate_claims_paths,
    survival_integral,
)
from .config import ExperimentConfig, load_config
from .errors import ConfigError, ModelError, NoInteriorRoot, NumericalBlowUp, NumericalError, QuadratureError
from .factor import FactorModel, FactorPath, TimeGrid, euler_step, baseline_factor, simulate_factor, simulate_factor_paths
from .premium import CustomPrinciple, MarketParams, PremiumPrinciple, PrincipleKind, evp, premium_derivative, premium_rate, vp
from .strategy import (
    PsiContext,
    Regime,
    RetentionDecision,
    convexity_certificate,
    in_A0,
    optimal_retention,
    optimal_retention_values,
    psi,
    psi_derivative,
    retention_path,
    solve_first_order,
)
from .valuation import ValueEstimate, value_direct, value_feynman_kac
from .wealth import WealthPath, terminal_utility, wealth_closed_form, wealth_euler

__version__ = "0.1.0"
