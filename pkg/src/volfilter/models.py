"""Stochastic-volatility model catalog.

Four one-asset markets driven by four Brownian motions W1..W4 (W2 independent
of W1; W3, W4 independent of both):

    dS/S = price drift dt + g(V) dW1
    dV   = f(., V) dt + k(V) (rho dW1 + sqrt(1-rho^2) dW2)
    dmu  = lambda_mu (theta_mu - mu) dt + sigma_mu dW3
    dbeta= lambda_beta beta dt + sigma_beta dW4        (GarchFactor only)

The latent drift mu is never observed; only the price path is.  Per model:

    LogOU        g = exp(v),  k = sigma_V,    f = lambda_V (theta - v), factor form
    GarchFactor  g = sqrt(v), k = sigma_V v,  f = beta (theta - v),     factor form
    Heston       g = sqrt(v), k = sigma_V sqrt(v), f = lambda_V (theta - v)
    SteinStein   g = |v|,     k = sigma_V,    f = lambda_V (theta - v)

"Factor form" means the price drift is mu * g(V), so the price risk premium
per unit of W1-noise is mu itself; for Heston/SteinStein the drift is mu and
the premium is mu / g(V).  The volatility-channel premium is

    vol risk = (f - rho k * price risk) / (sqrt(1-rho^2) k).

Filtering and the dual value solver accept LogOU and GarchFactor only; all
four kinds can be simulated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Tuple, Union

import numpy as np

from .errors import DomainError, KindError, ValidationError

Array = Union[float, np.ndarray]


class ModelKind(str, Enum):
    LOG_OU = "LogOU"
    GARCH_FACTOR = "GarchFactor"
    HESTON = "Heston"
    STEIN_STEIN = "SteinStein"


#: kinds whose price drift enters as mu * g(V), making the price risk = mu
FACTOR_KINDS = (ModelKind.LOG_OU, ModelKind.GARCH_FACTOR)

#: kinds admitting a filter (finite-dimensional or particle)
FILTERABLE_KINDS = (ModelKind.LOG_OU, ModelKind.GARCH_FACTOR)


@dataclass(frozen=True)
class ModelParams:
    """Parameter set for one stochastic-volatility market.

    Parameters
    ----------
    kind : ModelKind
    lambda_V : float
        Mean-reversion rate of the volatility state (>= 0).
    theta : float
        Volatility mean level.  Must be 0 for GarchFactor.
    sigma_V : float
        Vol-of-vol (> 0).
    lambda_mu, theta_mu, sigma_mu : float
        OU parameters of the latent drift (rates >= 0, sigma_mu >= 0).
    lambda_beta, sigma_beta : float
        GarchFactor reversion-speed process d beta = lambda_beta beta dt
        + sigma_beta dW4.  Ignored by the other kinds.
    rho : float
        Correlation between the price and volatility Brownian channels,
        strictly inside (-1, 1).
    m0, sigma0 : float
        Prior mean and variance of the initial drift (sigma0 >= 0).
    m1, sigma1 : float
        Prior mean and variance of beta_0 (GarchFactor only).
    S0, V0 : float
        Initial price (> 0) and volatility state.
    """

    kind: ModelKind
    lambda_V: float
    theta: float
    sigma_V: float
    lambda_mu: float
    theta_mu: float
    sigma_mu: float
    rho: float
    m0: float
    sigma0: float
    S0: float = 1.0
    V0: float = 0.0
    lambda_beta: float = 0.0
    sigma_beta: float = 0.0
    m1: float = 0.0
    sigma1: float = 0.0

    @property
    def rho_bar(self) -> float:
        return math.sqrt(1.0 - self.rho * self.rho)

    @property
    def is_factor(self) -> bool:
        return self.kind in FACTOR_KINDS


@dataclass(frozen=True)
class UtilitySpec:
    """Terminal-wealth utility: logarithmic, or power x^p / p with 0 < p < 1.

    ``q = p / (p - 1)`` is the conjugate exponent of the convex dual
    -z^q / q; it is negative for p in (0, 1).
    """

    kind: str  # "Log" | "Power"
    p: float = 0.0

    def __post_init__(self):
        if self.kind not in ("Log", "Power"):
            raise ValidationError("utility.kind", f"unknown utility {self.kind!r}")
        if self.kind == "Power" and not 0.0 < self.p < 1.0:
            raise ValidationError("utility.p", f"p={self.p} outside (0, 1)")

    @property
    def is_log(self) -> bool:
        return self.kind == "Log"

    @property
    def q(self) -> float:
        if self.is_log:
            raise KindError("q is defined for power utility only")
        return self.p / (self.p - 1.0)

    def u(self, x: Array) -> Array:
        """Utility of wealth; wealth must be strictly positive."""
        xa = np.asarray(x, dtype=float)
        if np.any(xa <= 0.0):
            raise DomainError("utility undefined for nonpositive wealth")
        if self.is_log:
            return np.log(xa)
        return xa**self.p / self.p


LOG_UTILITY = UtilitySpec("Log")


def validate_params(params: ModelParams) -> ModelParams:
    """Check all model invariants; return the input unchanged if they hold.

    Raises
    ------
    ValidationError
        Naming the first violated field.
    """
    if not isinstance(params.kind, ModelKind):
        raise ValidationError("kind", f"unknown model kind {params.kind!r}")
    if not abs(params.rho) < 1.0:
        raise ValidationError("rho", f"|rho| must be < 1, got {params.rho}")
    if not params.sigma_V > 0.0:
        raise ValidationError("sigma_V", f"must be > 0, got {params.sigma_V}")
    for name in ("lambda_V", "lambda_mu"):
        if getattr(params, name) < 0.0:
            raise ValidationError(name, "rate must be >= 0")
    for name in ("sigma_mu", "sigma0", "sigma1"):
        if getattr(params, name) < 0.0:
            raise ValidationError(name, "must be >= 0")
    if not params.S0 > 0.0:
        raise ValidationError("S0", f"must be > 0, got {params.S0}")
    if params.kind == ModelKind.GARCH_FACTOR:
        if params.theta != 0.0:
            raise ValidationError("theta", "GarchFactor requires theta = 0")
        if not params.V0 > 0.0:
            raise ValidationError("V0", "GarchFactor requires V0 > 0")
    if params.kind == ModelKind.HESTON and not params.V0 > 0.0:
        raise ValidationError("V0", "Heston requires V0 > 0")
    if params.kind == ModelKind.STEIN_STEIN and params.V0 == 0.0:
        raise ValidationError("V0", "SteinStein requires V0 != 0 (g = |v| > 0)")
    for name in ("theta", "theta_mu", "m0", "m1", "V0", "lambda_beta", "sigma_beta"):
        if not math.isfinite(getattr(params, name)):
            raise ValidationError(name, "must be finite")
    return params


def model_coefficients(params: ModelParams, v: Array) -> Tuple[Array, Array]:
    """Price-volatility g(v) and vol-diffusion k(v), both strictly positive.

    Parameters
    ----------
    v : float or ndarray
        Volatility state(s); must lie in the model's admissible space
        (v > 0 for Heston and GarchFactor, v != 0 for SteinStein).

    Returns
    -------
    (g, k) : pair of floats or ndarrays

    Raises
    ------
    DomainError
        If any state is outside the admissible space.
    """
    va = np.asarray(v, dtype=float)
    kind = params.kind
    if kind == ModelKind.LOG_OU:
        g = np.exp(va)
        k = np.broadcast_to(np.float64(params.sigma_V), va.shape).copy() if va.ndim else params.sigma_V
        return (float(g), float(k)) if va.ndim == 0 else (g, k)
    if kind in (ModelKind.HESTON, ModelKind.GARCH_FACTOR):
        if np.any(va <= 0.0):
            raise DomainError(f"{kind.value} requires v > 0")
        g = np.sqrt(va)
        k = params.sigma_V * (np.sqrt(va) if kind == ModelKind.HESTON else va)
        return (float(g), float(k)) if va.ndim == 0 else (g, k)
    if kind == ModelKind.STEIN_STEIN:
        if np.any(va == 0.0):
            raise DomainError("SteinStein requires v != 0 (g = |v| > 0)")
        g = np.abs(va)
        k = np.broadcast_to(np.float64(params.sigma_V), va.shape).copy() if va.ndim else params.sigma_V
        return (float(g), float(k)) if va.ndim == 0 else (g, k)
    raise KindError(f"unknown model kind {kind!r}")


def vol_drift(params: ModelParams, v: Array, beta: Array = None) -> Array:
    """Drift f of the volatility state: beta (theta - v) for GarchFactor,
    lambda_V (theta - v) otherwise."""
    if params.kind == ModelKind.GARCH_FACTOR:
        if beta is None:
            raise KindError("GarchFactor vol drift needs the beta state")
        return beta * (params.theta - v)
    return params.lambda_V * (params.theta - v)


def risks_from_state(
    params: ModelParams, v: Array, mu: Array, beta: Array = None
) -> Tuple[Array, Array]:
    """Market prices of risk (price channel, volatility channel) at a state.

    The price risk is mu for the factor-form models (LogOU, GarchFactor) and
    mu / g(v) otherwise.  The volatility risk is
    (f - rho k * price risk) / (rho_bar k).

    Raises
    ------
    DomainError
        Propagated from :func:`model_coefficients`.
    """
    g, k = model_coefficients(params, v)
    mu_tilde = np.asarray(mu, dtype=float) if params.is_factor else mu / g
    f = vol_drift(params, v, beta)
    beta_tilde = (f - params.rho * k * mu_tilde) / (params.rho_bar * k)
    if np.ndim(v) == 0:
        return float(mu_tilde), float(beta_tilde)
    return mu_tilde, beta_tilde


def volatility_from_risks(params: ModelParams, mu_tilde: Array, beta_tilde: Array) -> Array:
    """Invert the LogOU risk map: recover v from the two risk premia.

    Exact inverse of :func:`risks_from_state` for the LogOU factor form,
    v = theta - (sigma_V / lambda_V) (rho_bar * vol risk + rho * price risk).
    """
    if params.kind != ModelKind.LOG_OU:
        raise KindError("risk-map inversion implemented for LogOU only")
    if params.lambda_V == 0.0:
        raise DomainError("inversion needs lambda_V > 0")
    return params.theta - (params.sigma_V / params.lambda_V) * (
        params.rho_bar * np.asarray(beta_tilde, dtype=float)
        + params.rho * np.asarray(mu_tilde, dtype=float)
    )


# ---------------------------------------------------------------------------
# canonical parameter sets used by the verification suite
# ---------------------------------------------------------------------------

def logou_stationary_variance(params: ModelParams) -> float:
    """Steady-state prior variance s of the LogOU drift filter.

    With the volatility state observed, the joint risk covariance stays on
    the rank-one ray s * u u^T, u = (1, -rho/rho_bar), and s solves
    s' = sigma_mu^2 - 2 lambda_mu s - s^2 / rho_bar^2.  The positive root is

        s = rho_bar^2 (sqrt(lambda_mu^2 + sigma_mu^2 / rho_bar^2) - lambda_mu).
    """
    if params.kind != ModelKind.LOG_OU:
        raise KindError("stationary variance formula is LogOU-specific")
    rb2 = params.rho_bar**2
    return rb2 * (
        math.sqrt(params.lambda_mu**2 + params.sigma_mu**2 / rb2) - params.lambda_mu
    )


def canonical_logou(stationary_prior: bool = True) -> ModelParams:
    """Reference LogOU market used throughout the verification suite.

    With ``stationary_prior`` the prior variance is set at the filter's
    steady state, so the error covariance is constant in time and the
    stationary-coefficient value solver is exact for this configuration.
    """
    base = ModelParams(
        kind=ModelKind.LOG_OU,
        lambda_V=1.0,
        theta=math.log(0.3),
        sigma_V=0.3,
        lambda_mu=0.5,
        theta_mu=0.2,
        sigma_mu=0.3,
        rho=-0.5,
        m0=0.2,
        sigma0=0.04,
        S0=1.0,
        V0=math.log(0.3),
    )
    if stationary_prior:
        base = replace(base, sigma0=logou_stationary_variance(base))
    return validate_params(base)


def canonical_garch() -> ModelParams:
    """Reference GarchFactor market (theta = 0 as the filter requires)."""
    return validate_params(
        ModelParams(
            kind=ModelKind.GARCH_FACTOR,
            lambda_V=0.0,
            theta=0.0,
            sigma_V=0.3,
            lambda_mu=0.5,
            theta_mu=0.2,
            sigma_mu=0.3,
            rho=-0.5,
            m0=0.2,
            sigma0=0.04,
            S0=1.0,
            V0=0.09,
            lambda_beta=-0.5,
            sigma_beta=0.2,
            m1=0.5,
            sigma1=0.04,
        )
    )


def canonical_heston() -> ModelParams:
    """Reference Heston market (simulation-side only; 2 lambda_V theta >= sigma_V^2)."""
    return validate_params(
        ModelParams(
            kind=ModelKind.HESTON,
            lambda_V=2.0,
            theta=0.09,
            sigma_V=0.3,
            lambda_mu=0.5,
            theta_mu=0.06,
            sigma_mu=0.1,
            rho=-0.7,
            m0=0.06,
            sigma0=0.01,
            S0=1.0,
            V0=0.09,
        )
    )
