"""Dual stochastic-control problem: closed-form value for the LogOU market.

After reduction to full information, the dual problem minimizes
E[Udual(z Z_T^nu)] over volatility-risk processes nu, where

    dZ^nu = -Z^nu (m dWbar1 + nu dWbar2)

and the controlled state Y = (V, m) = (volatility, drift estimate) follows

    dY = Gamma(Y) dt + Sigma(Y) dWbar,
    Gamma = (lambda_V (theta - v), lambda_mu (theta_mu - m)),
    Sigma = [[rho k(v), rho_bar k(v)], [Theta11, Theta12]],

with Theta the filter covariance.  For log or power utility the value
factorizes through a scalar field Phi(t, y) solving the semilinear PDE

    -Phi_t - 0.5 Tr(Sigma Sigma^T D^2 Phi) + H(y, DPhi) = 0,   Phi(T, .) = 0,

with (power case, q = p/(p-1) < 0)

    H(y, Q) = 0.5 Q^T (Sigma Sigma^T - q/(q-1) K2 K2^T) Q
              - Q^T (Gamma - q m K1) + 0.5 q (q-1) m^2,
    K1 = (rho k(v), Theta11),  K2 = (rho_bar k(v), Theta12),

whose minimizer gives the optimal dual control nu = (1-p) K2^T DPhi.  For
log utility H(y, Q) = -Q^T Gamma + 0.5 m^2 and the optimal nu is 0.

Separated closed form (LogOU)
-----------------------------
The ansatz Phi = At(t) v + Bt(t) - v (T - t) - Ab(t) m^2 - Bb(t) m - Cb(t)
reduces the PDE to scalar ODEs with zero terminal conditions.  Matching the
v-coefficient of the PDE gives

    At' = lambda_V At - lambda_V (T - t) - 1,

whose solution is At = T - t: since (Z, m) never feel V, the dual value
cannot depend on v and the two v-terms cancel identically.  (The source
derivation drops the "-1" and a (T-t) factor in the Bt equation; that
variant fails both the PDE residual and the Monte Carlo dual-moment check
and is kept only behind ``compat_printed`` for comparison.)  With
a(t) = At - (T - t) and constants

    ct = sigma_V^2 (1 - (q/(q-1)) (1 - rho^2)),
    dt_ = rho sigma_V Theta11 + rho_bar sigma_V Theta12 (1 - q/(q-1)),
    eb  = Theta11^2 + Theta12^2 - (q/(q-1)) Theta12^2,

the remaining ODEs, integrated backwards by RK4 from zero at T, are

    Bt' = 0.5 ct a^2 - lambda_V theta a
    Ab' = -2 eb Ab^2 + 2 (lambda_mu + q Theta11) Ab - 0.5 q (q-1)
    Bb' = (-2 eb Ab + lambda_mu + q Theta11) Bb - q rho sigma_V a
          + 2 (dt_ a - lambda_mu theta_mu) Ab
    Cb' = -(Theta11^2 + Theta12^2) Ab - 0.5 eb Bb^2
          + (dt_ a - lambda_mu theta_mu) Bb.

Theta enters as the converged covariance (stationary mode, default) or as
the time-varying Riccati solution sampled inside the integration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple, Union

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import (
    ConvexityError,
    IntegrationError,
    KindError,
    NotConvergedError,
    RangeError,
)
from .filtering import RiccatiPath, SignalDynamics, riccati_residual
from .models import ModelKind, ModelParams, UtilitySpec, model_coefficients
from .sde_sim import TimeGrid

STATIONARY = "stationary"
TIME_VARYING = "time_varying"


@dataclass
class YField:
    """Coefficient field of the controlled state Y = (volatility, drift estimate).

    ``theta_const`` holds the frozen covariance in stationary mode;
    ``theta_path`` the Riccati solution in time-varying mode.  ``degenerate``
    flags a vanishing estimate-diffusion row (zero covariance), which is
    legitimate in deterministic-drift limits.
    """

    params: ModelParams
    mode: str
    theta_const: Optional[np.ndarray] = None
    theta_path: Optional[RiccatiPath] = None
    degenerate: bool = False

    def theta_at(self, t: Optional[float]) -> np.ndarray:
        if self.mode == STATIONARY:
            return self.theta_const
        if t is None:
            raise RangeError("time-varying field needs an evaluation time")
        return self.theta_path.at(t)

    def psi(self, m):
        return m

    def gamma(self, v, m) -> np.ndarray:
        p = self.params
        return np.array([p.lambda_V * (p.theta - v), p.lambda_mu * (p.theta_mu - m)])

    def k1_at(self, v, t: Optional[float] = None) -> np.ndarray:
        th = self.theta_at(t)
        _, k = model_coefficients(self.params, v)
        return np.array([self.params.rho * k, th[0, 0]])

    def k2_at(self, v, t: Optional[float] = None) -> np.ndarray:
        th = self.theta_at(t)
        _, k = model_coefficients(self.params, v)
        return np.array([self.params.rho_bar * k, th[0, 1]])

    def sigma_at(self, v, t: Optional[float] = None) -> np.ndarray:
        th = self.theta_at(t)
        _, k = model_coefficients(self.params, v)
        return np.array([
            [self.params.rho * k, self.params.rho_bar * k],
            [th[0, 0], th[0, 1]],
        ])


def yfield_assemble(
    params: ModelParams,
    filter_dyn: SignalDynamics,
    theta: Union[RiccatiPath, np.ndarray],
    mode: str = STATIONARY,
    stationarity_tol: float = 1e-8,
) -> YField:
    """Build the Y-field from the filter covariance.

    In stationary mode a RiccatiPath must have converged (last two nodes
    within ``stationarity_tol`` in max-norm and small algebraic residual);
    a bare 2x2 matrix is accepted as an already-converged covariance.

    Raises
    ------
    KindError for non-LogOU parameters; NotConvergedError if stationarity
    fails.
    """
    if params.kind != ModelKind.LOG_OU:
        raise KindError("the dual value field is assembled for LogOU only")
    if mode not in (STATIONARY, TIME_VARYING):
        raise RangeError(f"unknown theta mode {mode!r}")
    if mode == TIME_VARYING:
        if not isinstance(theta, RiccatiPath):
            raise DimensionErrorFromType(theta)
        th0 = theta.terminal
        return YField(params=params, mode=mode, theta_path=theta,
                      degenerate=_degenerate_row(th0))
    if isinstance(theta, RiccatiPath):
        drift = np.max(np.abs(theta.Theta[-1] - theta.Theta[-2]))
        resid = np.max(np.abs(riccati_residual(filter_dyn, theta.Theta[-1])))
        if drift > stationarity_tol or resid > stationarity_tol:
            raise NotConvergedError(
                f"covariance path not stationary: drift {drift:.2e}, "
                f"residual {resid:.2e}"
            )
        th = theta.Theta[-1]
    else:
        th = np.asarray(theta, dtype=float)
    return YField(params=params, mode=STATIONARY, theta_const=th,
                  degenerate=_degenerate_row(th))


def _degenerate_row(th: np.ndarray) -> bool:
    return bool(th[0, 0] == 0.0 and th[0, 1] == 0.0)


def DimensionErrorFromType(obj):
    from .errors import DimensionError

    return DimensionError(f"time-varying mode needs a RiccatiPath, got {type(obj)!r}")


# ---------------------------------------------------------------------------
# Hamiltonian
# ---------------------------------------------------------------------------

def hamiltonian_power(
    y: Tuple[float, float],
    Q: np.ndarray,
    p: float,
    field: YField,
    t: Optional[float] = None,
) -> float:
    """Closed-form Hamiltonian of the power-utility dual PDE at (y, Q)."""
    v, m = y
    q = p / (p - 1.0)
    Q = np.asarray(Q, dtype=float)
    Sig = field.sigma_at(v, t)
    K1 = field.k1_at(v, t)
    K2 = field.k2_at(v, t)
    SS = Sig @ Sig.T
    G = (q / (q - 1.0)) * np.outer(K2, K2)
    F = field.gamma(v, m) - q * m * K1
    Psi = 0.5 * q * (q - 1.0) * m * m
    return float(0.5 * Q @ (SS - G) @ Q - Q @ F + Psi)


def hamiltonian_power_infimum(
    y: Tuple[float, float],
    Q: np.ndarray,
    p: float,
    field: YField,
    t: Optional[float] = None,
    nu_lo: float = -10.0,
    nu_hi: float = 10.0,
    nu_step: float = 1e-4,
) -> Tuple[float, float]:
    """Brute-force infimum form of the power Hamiltonian.

    Evaluates 0.5 Q'SS'Q - Q'Gamma + min over a nu grid of
    0.5 q (q-1) (m^2 + nu^2) + q (m K1' + nu K2') Q, returning the value and
    the minimizing nu.  Serves as the independent oracle for
    :func:`hamiltonian_power` and :func:`nu_star`.
    """
    v, m = y
    q = p / (p - 1.0)
    Q = np.asarray(Q, dtype=float)
    Sig = field.sigma_at(v, t)
    K1 = field.k1_at(v, t)
    K2 = field.k2_at(v, t)
    base = 0.5 * Q @ (Sig @ Sig.T) @ Q - Q @ field.gamma(v, m)
    k2q = float(K2 @ Q)
    nus = np.arange(nu_lo, nu_hi + nu_step, nu_step)
    vals = 0.5 * q * (q - 1.0) * (m * m + nus * nus) + q * (m * float(K1 @ Q) + nus * k2q)
    i = int(np.argmin(vals))
    return float(base + vals[i]), float(nus[i])


def hamiltonian_log(
    y: Tuple[float, float], Q: np.ndarray, field: YField, t: Optional[float] = None
) -> float:
    """Hamiltonian of the log-utility dual PDE: -Q'Gamma + m^2/2 (optimum nu = 0)."""
    v, m = y
    Q = np.asarray(Q, dtype=float)
    return float(-Q @ field.gamma(v, m) + 0.5 * m * m)


# ---------------------------------------------------------------------------
# Value coefficients
# ---------------------------------------------------------------------------

@dataclass
class ValueCoeffs:
    """Time series of the separated value coefficients on a grid.

    All five series vanish at T.  ``a_bar`` stays nonnegative for p in (0,1)
    (its terminal slope is -q(q-1)/2 < 0 backwards from zero).
    """

    grid: TimeGrid
    a_tilde: np.ndarray
    b_tilde: np.ndarray
    a_bar: np.ndarray
    b_bar: np.ndarray
    c_bar: np.ndarray
    p: float

    def __post_init__(self):
        t = self.grid.times()
        self._splines = {
            name: CubicSpline(t, getattr(self, name))
            for name in ("a_tilde", "b_tilde", "a_bar", "b_bar", "c_bar")
        }

    @property
    def q(self) -> float:
        return self.p / (self.p - 1.0)

    def at(self, t: float) -> Tuple[float, float, float, float, float]:
        return tuple(float(self._splines[n](t))
                     for n in ("a_tilde", "b_tilde", "a_bar", "b_bar", "c_bar"))


def _coeff_constants(params: ModelParams, q: float, th: np.ndarray):
    t11, t12 = th[0, 0], th[0, 1]
    qq = q / (q - 1.0)
    ct = params.sigma_V**2 * (1.0 - qq * (1.0 - params.rho**2))
    dt_ = params.rho * params.sigma_V * t11 \
        + params.rho_bar * params.sigma_V * t12 * (1.0 - qq)
    eb = t11 * t11 + t12 * t12 - qq * t12 * t12
    return t11, t12, ct, dt_, eb


def solve_value_coeffs_logou(
    params: ModelParams,
    p: float,
    field: YField,
    grid: TimeGrid,
    compat_printed: bool = False,
) -> ValueCoeffs:
    """Backward RK4 integration of the five coefficient ODEs.

    ``compat_printed`` switches the At/Bt equations to the variant printed in
    the source derivation (documentation only; it does not solve the PDE and
    fails the Monte Carlo duality checks whenever rho != 0).

    Raises
    ------
    IntegrationError on blow-up (the a_bar Riccati escaping before t0).
    """
    if params.kind != ModelKind.LOG_OU:
        raise KindError("value coefficients are solved for LogOU only")
    if not 0.0 < p < 1.0:
        raise RangeError(f"power exponent p={p} outside (0, 1)")
    q = p / (p - 1.0)
    T = grid.T
    lam_V, lam_mu = params.lambda_V, params.lambda_mu
    theta, theta_mu = params.theta, params.theta_mu
    rho, sv = params.rho, params.sigma_V

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        At, Bt, Ab, Bb, Cb = y
        tau = T - t
        t11, t12, ct, dt_, eb = _coeff_constants(params, q, field.theta_at(t))
        a = At - tau
        if compat_printed:
            dAt = lam_V * At - lam_V * tau
            dBt = 0.5 * ct * At * At - (ct + lam_V * theta) * At \
                + 0.5 * ct * tau * tau + lam_V * theta * tau
        else:
            dAt = lam_V * At - lam_V * tau - 1.0
            dBt = 0.5 * ct * a * a - lam_V * theta * a
        kap = lam_mu + q * t11
        dAb = -2.0 * eb * Ab * Ab + 2.0 * kap * Ab - 0.5 * q * (q - 1.0)
        dBb = (-2.0 * eb * Ab + kap) * Bb - q * rho * sv * a \
            + 2.0 * (dt_ * a - lam_mu * theta_mu) * Ab
        dCb = -(t11 * t11 + t12 * t12) * Ab - 0.5 * eb * Bb * Bb \
            + (dt_ * a - lam_mu * theta_mu) * Bb
        return np.array([dAt, dBt, dAb, dBb, dCb])

    n = grid.n_steps
    dt = grid.dt
    out = np.zeros((n + 1, 5))
    y = np.zeros(5)
    t = T
    for k in range(n, 0, -1):
        h = -dt
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = grid.t0 + (k - 1) * dt
        if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > 1e8:
            raise IntegrationError(f"coefficient blow-up integrating back to t={t}")
        out[k - 1] = y
    return ValueCoeffs(grid=grid, a_tilde=out[:, 0], b_tilde=out[:, 1],
                       a_bar=out[:, 2], b_bar=out[:, 3], c_bar=out[:, 4], p=p)


def phi_eval(
    coeffs: ValueCoeffs, t: float, v, m
) -> Tuple[np.ndarray, Tuple[np.ndarray, np.ndarray]]:
    """Evaluate the separated value field and its (v, m) gradient.

    Phi = At v + Bt - v (T - t) - Ab m^2 - Bb m - Cb;
    DPhi = (At - (T - t), -2 Ab m - Bb).  Accepts scalars or arrays in v, m.

    Raises
    ------
    RangeError for t outside [t0, T].
    """
    g = coeffs.grid
    if not g.t0 <= t <= g.T:
        raise RangeError(f"t={t} outside [{g.t0}, {g.T}]")
    At, Bt, Ab, Bb, Cb = coeffs.at(t)
    tau = g.T - t
    v = np.asarray(v, dtype=float)
    m = np.asarray(m, dtype=float)
    phi = At * v + Bt - v * tau - Ab * m * m - Bb * m - Cb
    dv = (At - tau) * np.ones_like(v)
    dm = -2.0 * Ab * m - Bb
    if phi.ndim == 0:
        return float(phi), (float(dv), float(dm))
    return phi, (dv, dm)


def nu_star(
    t: float,
    y: Tuple[float, float],
    p: Optional[float],
    coeffs: Optional[ValueCoeffs],
    field: YField,
) -> float:
    """Optimal dual volatility-risk control at (t, y).

    Log utility (p None) gives 0; power utility gives (1-p) K2' DPhi.
    """
    if p is None:
        return 0.0
    v, m = y
    _, (dv, dm) = phi_eval(coeffs, t, v, m)
    K2 = field.k2_at(v, t if field.mode == TIME_VARYING else None)
    return float((1.0 - p) * (K2[0] * dv + K2[1] * dm))


def pde_residual(
    phi: Union[ValueCoeffs, Callable[[float, float, float], float]],
    point: Tuple[float, float, float],
    h: float,
    p: Optional[float],
    field: YField,
) -> float:
    """Finite-difference residual of the dual PDE at an interior point.

    Central second-order differences in all three variables (so the
    differencing error scales as h^2).  ``phi`` is a ValueCoeffs or any
    callable (t, v, m) -> value; ``p`` selects the power Hamiltonian (float)
    or the log one (None).

    Raises
    ------
    RangeError if the time stencil leaves [t0, T].
    """
    t, v, m = point
    if isinstance(phi, ValueCoeffs):
        g = phi.grid
        coeffs = phi

        def f(tt, vv, mm):
            val, _ = phi_eval(coeffs, tt, vv, mm)
            return val
    else:
        f = phi
        g = field.theta_path.grid if field.mode == TIME_VARYING else None
    if g is not None and not (g.t0 + h <= t <= g.T - h):
        raise RangeError(f"t={t} is not interior at stencil width {h}")

    pt = (f(t + h, v, m) - f(t - h, v, m)) / (2.0 * h)
    pv = (f(t, v + h, m) - f(t, v - h, m)) / (2.0 * h)
    pm = (f(t, v, m + h) - f(t, v, m - h)) / (2.0 * h)
    pvv = (f(t, v + h, m) - 2.0 * f(t, v, m) + f(t, v - h, m)) / (h * h)
    pmm = (f(t, v, m + h) - 2.0 * f(t, v, m) + f(t, v, m - h)) / (h * h)
    pvm = (f(t, v + h, m + h) - f(t, v + h, m - h) - f(t, v - h, m + h)
           + f(t, v - h, m - h)) / (4.0 * h * h)
    tt = t if field.mode == TIME_VARYING else None
    Sig = field.sigma_at(v, tt)
    SS = Sig @ Sig.T
    tr = SS[0, 0] * pvv + 2.0 * SS[0, 1] * pvm + SS[1, 1] * pmm
    Q = np.array([pv, pm])
    if p is None:
        H = hamiltonian_log((v, m), Q, field, tt)
    else:
        H = hamiltonian_power((v, m), Q, p, field, tt)
    return float(-pt - 0.5 * tr + H)


# ---------------------------------------------------------------------------
# Log-utility value via the filter moment ODEs
# ---------------------------------------------------------------------------

def phi_log_logou(
    params: ModelParams,
    theta: RiccatiPath,
    grid: TimeGrid,
    t: float,
    y: Tuple[float, float],
) -> float:
    """Log-utility value field: Phi(t, y) = -0.5 * int_t^T E[m_s^2] ds.

    The drift estimate is an OU process driven by the innovations with
    time-varying diffusion (Theta11, Theta12), so E[m_s^2] = mean^2 + var
    with mean' = lambda_mu (theta_mu - mean), var' = -2 lambda_mu var
    + Theta11^2 + Theta12^2, integrated from (m, 0) at time t by RK4.
    """
    if params.kind != ModelKind.LOG_OU:
        raise KindError("log value field implemented for LogOU only")
    _, m0 = y
    if not grid.t0 <= t <= grid.T:
        raise RangeError(f"t={t} outside [{grid.t0}, {grid.T}]")
    lam, tm = params.lambda_mu, params.theta_mu

    def rhs(s, state):
        mean, var, acc = state
        th = theta.at(min(s, theta.grid.T))
        return np.array([
            lam * (tm - mean),
            -2.0 * lam * var + th[0, 0] ** 2 + th[0, 1] ** 2,
            mean * mean + var,
        ])

    n_sub = max(2, int(math.ceil((grid.T - t) / grid.dt)))
    hstep = (grid.T - t) / n_sub
    state = np.array([m0, 0.0, 0.0])
    s = t
    for _ in range(n_sub):
        k1 = rhs(s, state)
        k2 = rhs(s + 0.5 * hstep, state + 0.5 * hstep * k1)
        k3 = rhs(s + 0.5 * hstep, state + 0.5 * hstep * k2)
        k4 = rhs(s + hstep, state + hstep * k3)
        state = state + (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        s += hstep
    return -0.5 * float(state[2])


# ---------------------------------------------------------------------------
# Dual value and Lagrange multiplier
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DualValue:
    j_dual: float
    z_x: Optional[float]


def dual_value(
    z: float,
    x: Optional[float],
    utility: UtilitySpec,
    phi0: float,
) -> DualValue:
    """Dual objective at z and, given initial wealth x, its Lagrange multiplier.

    The dual of the homogeneous utilities factorizes: for log,
    J_dual(z) = -1 - Phi(0) - ln z with z_x = 1/x; for power,
    J_dual(z) = -(z^q/q) exp(-Phi(0)) with z_x = (x exp(Phi(0)))^(p-1).
    The returned multiplier satisfies the first-order condition of
    min_z [J_dual(z) + x z] to 1e-10 (1 + x).
    """
    if z <= 0.0:
        raise RangeError(f"need z > 0, got {z}")
    if utility.is_log:
        j = -1.0 - phi0 - math.log(z)
        z_x = None if x is None else 1.0 / x

        def obj_d(zz):
            return -1.0 / zz + (x if x is not None else 0.0)
    else:
        q = utility.q
        j = -(z**q / q) * math.exp(-phi0)
        z_x = None if x is None else (x * math.exp(phi0)) ** (utility.p - 1.0)

        def obj_d(zz):
            return -(zz ** (q - 1.0)) * math.exp(-phi0) + (x if x is not None else 0.0)

    if x is not None:
        foc = abs(obj_d(z_x))
        if foc > 1e-10 * (1.0 + x):
            raise ConvexityError(f"first-order condition violated: {foc:.2e}")
        eps = 1e-4 * z_x
        second = obj_d(z_x + eps) - obj_d(z_x - eps)
        if second <= 0.0:
            raise ConvexityError("dual objective is not locally convex at z_x")
    return DualValue(j_dual=j, z_x=z_x)


@dataclass
class DualReport:
    """Solved dual problem: value field origin, dual objective, control."""

    phi0: float
    j_dual: Callable[[float], float]
    nu: Callable[[float, float, float], float]


def make_dual_report(
    params: ModelParams,
    utility: UtilitySpec,
    field: YField,
    grid: TimeGrid,
    coeffs: Optional[ValueCoeffs] = None,
    theta: Optional[RiccatiPath] = None,
) -> DualReport:
    """Assemble phi0, the dual objective map, and the nu evaluator."""
    y0 = (params.V0, params.m0)
    if utility.is_log:
        if theta is None:
            raise RangeError("log dual report needs the covariance path")
        phi0 = phi_log_logou(params, theta, grid, grid.t0, y0)
        nu = lambda t, v, m: 0.0
    else:
        if coeffs is None:
            raise RangeError("power dual report needs solved value coefficients")
        phi_val, _ = phi_eval(coeffs, grid.t0, *y0)
        phi0 = phi_val
        nu = lambda t, v, m: nu_star(t, (v, m), utility.p, coeffs, field)
    return DualReport(
        phi0=phi0,
        j_dual=lambda z: dual_value(z, None, utility, phi0).j_dual,
        nu=nu,
    )


# ---------------------------------------------------------------------------
# CSV persistence: t, A_tilde, B_tilde, A_bar, B_bar, C_bar
# ---------------------------------------------------------------------------

VALUE_COLUMNS = "t,A_tilde,B_tilde,A_bar,B_bar,C_bar"


def write_value_coeffs_csv(coeffs: ValueCoeffs, fileobj_or_path) -> None:
    import os as _os

    own = isinstance(fileobj_or_path, (str, _os.PathLike))
    f = open(fileobj_or_path, "w", newline="") if own else fileobj_or_path
    try:
        f.write(VALUE_COLUMNS + "\n")
        for t, *vals in zip(coeffs.grid.times(), coeffs.a_tilde, coeffs.b_tilde,
                            coeffs.a_bar, coeffs.b_bar, coeffs.c_bar):
            f.write(",".join(repr(float(x)) for x in (t, *vals)) + "\n")
    finally:
        if own:
            f.close()
