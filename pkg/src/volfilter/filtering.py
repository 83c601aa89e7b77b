"""Estimation of the unobservable risk premia from the price filtration.

Signal-observation structure
----------------------------
The two risk premia X = (price risk, vol risk) follow an affine diffusion

    dX = (A X + b) dt + G dM + B dW,

where M = (W3, W4) is independent of the observation channels W = (W1, W2),
and the observation increments are dY = dW + X dt (sensor = identity, unit
observation noise).  Conditioning on V being observed, the LogOU and
GarchFactor markets both reduce to constant matrices:

LogOU (B couples the signal to the observation noise):

    A = [[-lm, 0], [r (lm - lv)/rb, -lv]]   b = (lm tm, -(r/rb) lm tm)
    G = [[sm, 0], [-(r/rb) sm, 0]]          B = [[0, 0], [-(r/rb) lv, -lv]]

GarchFactor (theta = 0; the observation coupling vanishes, B = 0):

    A = [[-lm, 0], [r (lb + lm)/rb, lb]]    b = (lm tm, -(r/rb) lm tm)
    G = [[sm, 0], [-(r/rb) sm, -sb/(rb sv)]]

with lm = lambda_mu, lv = lambda_V, lb = lambda_beta, tm = theta_mu,
sm = sigma_mu, sb = sigma_beta, sv = sigma_V, r = rho, rb = sqrt(1-rho^2).
(The GarchFactor diffusion printed in the source derivation is dimensionally
inconsistent with additive speed noise; the matrix above is the one obtained
by differentiating the risk map, and is what the symbolic test oracle checks.)

Exact filter (LogOU)
--------------------
The conditional mean follows

    d(mean) = (A mean + b) dt + (B + Theta_t) d(innovation),

with innovation increments = observation increments - mean dt, and Theta_t
the conditional covariance solving the matrix Riccati ODE

    Theta' = A Theta + Theta A^T + G G^T - Theta Theta^T - Theta B^T - B Theta^T.

We integrate the algebraically identical symmetric form
A Theta + Theta A^T + G G^T - (Theta+B)(Theta+B)^T + B B^T with fixed-step
RK4, symmetrizing after every step.

Particle filter
---------------
A weighted cloud discretizes the unnormalized conditional law: per step the
weights multiply by exp(h(X) . dY - 0.5 |h(X)|^2 dt) and normalize; particles
propagate conditionally on the observed increments, which for B != 0 means
the observation increments feed the B channel:

    dX_i = (A X_i + b) dt + B (dY - h(X_i) dt) + G dM_i.

Systematic resampling triggers when the effective sample size drops below
half the cloud.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import (
    DegeneracyError,
    DimensionError,
    IntegrationError,
    KindError,
    NotConvergedError,
)
from .models import ModelKind, ModelParams, validate_params
from .sde_sim import TimeGrid, path_rng


@dataclass(frozen=True)
class SignalDynamics:
    """Constant-coefficient affine signal model dX = (A X + b) dt + G dM + B dW."""

    A_mat: np.ndarray
    b_vec: np.ndarray
    G_mat: np.ndarray
    B_mat: np.ndarray
    kind: ModelKind
    affine: bool = True

    def __post_init__(self):
        for name in ("A_mat", "G_mat", "B_mat"):
            if getattr(self, name).shape != (2, 2):
                raise DimensionError(f"{name} must be 2x2")
        if self.b_vec.shape != (2,):
            raise DimensionError("b_vec must have shape (2,)")

    @property
    def correlated(self) -> bool:
        return bool(np.any(self.B_mat != 0.0))


def logou_filter_matrices(
    params: ModelParams, theta_coupled_to_mean: bool = False
) -> SignalDynamics:
    """Signal matrices for the LogOU risk pair.

    With ``theta_coupled_to_mean`` the volatility mean level tracks the
    latent drift (theta = mu_t); the drift matrix picks up the extra
    -lm*lv/(sv*rb) coupling and b and G change accordingly.  All entries are
    re-derivable from the risk definitions by Ito's formula, which the test
    suite does symbolically.

    Raises
    ------
    KindError for non-LogOU parameters.
    """
    validate_params(params)
    if params.kind != ModelKind.LOG_OU:
        raise KindError(f"LogOU filter matrices requested for {params.kind.value}")
    lm, lv = params.lambda_mu, params.lambda_V
    sm, sv = params.sigma_mu, params.sigma_V
    r, rb = params.rho, params.rho_bar
    tm = params.theta_mu
    A = np.array([[-lm, 0.0], [r * (lm - lv) / rb, -lv]])
    b = np.array([lm * tm, -(r / rb) * lm * tm])
    G = np.array([[sm, 0.0], [-(r / rb) * sm, 0.0]])
    B = np.array([[0.0, 0.0], [-(r / rb) * lv, -lv]])
    if theta_coupled_to_mean:
        A = A.copy()
        A[1, 0] -= lm * lv / (sv * rb)
        b = np.array([lm * tm, lm * tm * (lv / (sv * rb) - r / rb)])
        G = np.array([[sm, 0.0], [sm * (lv / (sv * rb) - r / rb), 0.0]])
    return SignalDynamics(A, b, G, B, kind=ModelKind.LOG_OU)


def garch_signal_dynamics(params: ModelParams) -> SignalDynamics:
    """Signal matrices for the GarchFactor risk pair (theta = 0, B = 0)."""
    validate_params(params)
    if params.kind != ModelKind.GARCH_FACTOR:
        raise KindError(f"Garch signal dynamics requested for {params.kind.value}")
    lm, lb = params.lambda_mu, params.lambda_beta
    sm, sb, sv = params.sigma_mu, params.sigma_beta, params.sigma_V
    r, rb = params.rho, params.rho_bar
    tm = params.theta_mu
    A = np.array([[-lm, 0.0], [r * (lb + lm) / rb, lb]])
    b = np.array([lm * tm, -(r / rb) * lm * tm])
    G = np.array([[sm, 0.0], [-(r / rb) * sm, -sb / (rb * sv)]])
    B = np.zeros((2, 2))
    return SignalDynamics(A, b, G, B, kind=ModelKind.GARCH_FACTOR)


def signal_dynamics_for(params: ModelParams) -> SignalDynamics:
    if params.kind == ModelKind.LOG_OU:
        return logou_filter_matrices(params)
    if params.kind == ModelKind.GARCH_FACTOR:
        return garch_signal_dynamics(params)
    raise KindError(f"no filter is available for {params.kind.value}")


def logou_prior(params: ModelParams) -> Tuple[np.ndarray, np.ndarray]:
    """Filter prior consistent with the observed initial volatility state.

    The drift prior is N(m0, sigma0); the vol risk is its affine image given
    V0, so the joint covariance is the rank-one matrix
    sigma0 * [[1, -r/rb], [-r/rb, r^2/rb^2]].
    """
    if params.kind != ModelKind.LOG_OU:
        raise KindError("LogOU prior requested for a different kind")
    r, rb = params.rho, params.rho_bar
    mean = np.array([
        params.m0,
        params.lambda_V * (params.theta - params.V0) / (params.sigma_V * rb)
        - (r / rb) * params.m0,
    ])
    u = np.array([1.0, -r / rb])
    return mean, params.sigma0 * np.outer(u, u)


def garch_prior_mean(params: ModelParams) -> np.ndarray:
    r, rb, sv = params.rho, params.rho_bar, params.sigma_V
    return np.array([params.m0, -params.m1 / (rb * sv) - (r / rb) * params.m0])


def garch_prior_sampler(params: ModelParams) -> Callable[[np.random.Generator, int], np.ndarray]:
    """Sampler of the GarchFactor risk prior: independent normals on (mu, beta)
    mapped through the risk definitions at theta = 0."""
    r, rb, sv = params.rho, params.rho_bar, params.sigma_V

    def sample(rng: np.random.Generator, n: int) -> np.ndarray:
        mu = params.m0 + math.sqrt(params.sigma0) * rng.standard_normal(n)
        beta = params.m1 + math.sqrt(params.sigma1) * rng.standard_normal(n)
        return np.column_stack([mu, -beta / (rb * sv) - (r / rb) * mu])

    return sample


def logou_prior_sampler(params: ModelParams) -> Callable[[np.random.Generator, int], np.ndarray]:
    """Sampler of the LogOU risk prior (rank-one: vol risk is affine in drift)."""
    mean, _ = logou_prior(params)
    r, rb = params.rho, params.rho_bar

    def sample(rng: np.random.Generator, n: int) -> np.ndarray:
        z = math.sqrt(params.sigma0) * rng.standard_normal(n)
        return np.column_stack([mean[0] + z, mean[1] - (r / rb) * z])

    return sample


# ---------------------------------------------------------------------------
# Riccati covariance
# ---------------------------------------------------------------------------

@dataclass
class RiccatiPath:
    """Conditional covariance on a time grid: Theta has shape (n_steps+1, 2, 2)."""

    grid: TimeGrid
    Theta: np.ndarray

    def __post_init__(self):
        if self.Theta.shape != (self.grid.n_steps + 1, 2, 2):
            raise DimensionError("Theta path shape does not match the grid")

    def at(self, t: float) -> np.ndarray:
        """Linear interpolation in t (the path is smooth; nodes are RK4-accurate)."""
        tt = np.clip((t - self.grid.t0) / self.grid.dt, 0, self.grid.n_steps)
        k = int(min(math.floor(tt), self.grid.n_steps - 1))
        w = tt - k
        return (1.0 - w) * self.Theta[k] + w * self.Theta[k + 1]

    @property
    def terminal(self) -> np.ndarray:
        return self.Theta[-1]


def riccati_residual(dyn: SignalDynamics, Theta: np.ndarray) -> np.ndarray:
    """Right-hand side A T + T A' + G G' - T T' - T B' - B T' at a covariance."""
    A, G, B = dyn.A_mat, dyn.G_mat, dyn.B_mat
    return (A @ Theta + Theta @ A.T + G @ G.T
            - Theta @ Theta.T - Theta @ B.T - B @ Theta.T)


def _riccati_rhs_sym(dyn: SignalDynamics, Theta: np.ndarray) -> np.ndarray:
    # symmetric form, identical to riccati_residual for symmetric Theta
    A, G, B = dyn.A_mat, dyn.G_mat, dyn.B_mat
    M = Theta + B
    return A @ Theta + Theta @ A.T + G @ G.T - M @ M.T + B @ B.T


def riccati_theta(
    dyn: SignalDynamics,
    Theta0: np.ndarray,
    grid: TimeGrid,
    psd_tol: float = 1e-10,
) -> RiccatiPath:
    """Integrate the covariance ODE forward with fixed-step RK4.

    The state is symmetrized after every step; each node is checked to be
    symmetric PSD (smallest eigenvalue >= -psd_tol).

    Raises
    ------
    IntegrationError
        On blow-up or loss of positive semidefiniteness beyond tolerance.
    """
    Theta0 = np.asarray(Theta0, dtype=float)
    if Theta0.shape != (2, 2):
        raise DimensionError("Theta0 must be 2x2")
    if not np.allclose(Theta0, Theta0.T, atol=1e-12):
        raise IntegrationError("Theta0 must be symmetric")
    dt = grid.dt
    out = np.empty((grid.n_steps + 1, 2, 2))
    Th = 0.5 * (Theta0 + Theta0.T)
    out[0] = Th
    for k in range(grid.n_steps):
        k1 = _riccati_rhs_sym(dyn, Th)
        k2 = _riccati_rhs_sym(dyn, Th + 0.5 * dt * k1)
        k3 = _riccati_rhs_sym(dyn, Th + 0.5 * dt * k2)
        k4 = _riccati_rhs_sym(dyn, Th + dt * k3)
        Th = Th + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        Th = 0.5 * (Th + Th.T)
        if not np.all(np.isfinite(Th)):
            raise IntegrationError(f"covariance blow-up at step {k + 1}")
        if np.linalg.eigvalsh(Th)[0] < -psd_tol:
            raise IntegrationError(
                f"covariance lost positive semidefiniteness at step {k + 1}"
            )
        out[k + 1] = Th
    return RiccatiPath(grid=grid, Theta=out)


def stationary_theta(
    dyn: SignalDynamics,
    Theta0: np.ndarray,
    horizon: float,
    n_steps: int = 2000,
    tol: float = 1e-8,
) -> np.ndarray:
    """Converged covariance: run the Riccati flow over a long horizon.

    Short-circuits when Theta0 is already a fixed point.  Raises
    NotConvergedError if the last two nodes differ by more than ``tol`` in
    max-norm or the algebraic residual exceeds ``tol``.
    """
    Theta0 = np.asarray(Theta0, dtype=float)
    if np.max(np.abs(riccati_residual(dyn, Theta0))) < tol:
        return Theta0.copy()
    path = riccati_theta(dyn, Theta0, TimeGrid(0.0, horizon, n_steps))
    drift = np.max(np.abs(path.Theta[-1] - path.Theta[-2]))
    resid = np.max(np.abs(riccati_residual(dyn, path.Theta[-1])))
    if drift > tol or resid > tol:
        raise NotConvergedError(
            f"Riccati flow not stationary after T={horizon}: "
            f"node drift {drift:.2e}, residual {resid:.2e}"
        )
    return path.Theta[-1]


def logou_stationary_theta(params: ModelParams, tol: float = 1e-8) -> np.ndarray:
    """Converged LogOU covariance from the V0-consistent prior."""
    dyn = logou_filter_matrices(params)
    _, Theta0 = logou_prior(params)
    rates = [r for r in (params.lambda_mu, params.lambda_V) if r > 0.0]
    if not rates:
        # no mean reversion: only a fixed-point prior can be stationary
        if np.max(np.abs(riccati_residual(dyn, Theta0))) < tol:
            return Theta0
        raise NotConvergedError("no positive rate and prior is not stationary")
    horizon = 50.0 / min(rates)
    return stationary_theta(dyn, Theta0, horizon, tol=tol)


# ---------------------------------------------------------------------------
# Kalman-Bucy filter
# ---------------------------------------------------------------------------

@dataclass
class FilterOutput:
    """Filter means, covariance path, and innovation increments.

    mu_bar / beta_bar have node shape (..., n_steps+1); dWbar1 / dWbar2 have
    step shape (..., n_steps).  The leading axis, when present, indexes paths.
    """

    grid: TimeGrid
    mu_bar: np.ndarray
    beta_bar: np.ndarray
    Theta: RiccatiPath
    dWbar1: np.ndarray
    dWbar2: np.ndarray


def _check_obs(obs, grid: TimeGrid) -> Tuple[np.ndarray, np.ndarray]:
    o1, o2 = (np.asarray(o, dtype=float) for o in obs)
    if o1.shape != o2.shape:
        raise DimensionError("observation increment arrays differ in shape")
    if o1.shape[-1] != grid.n_steps:
        raise DimensionError(
            f"observations have {o1.shape[-1]} steps, grid has {grid.n_steps}"
        )
    return o1, o2


def kalman_bucy_run(
    dyn: SignalDynamics,
    obs: Tuple[np.ndarray, np.ndarray],
    grid: TimeGrid,
    prior: Tuple[np.ndarray, np.ndarray],
    theta: Optional[RiccatiPath] = None,
) -> FilterOutput:
    """Run the correlated-noise Kalman-Bucy filter along observed increments.

    Parameters
    ----------
    obs : (dW1_obs, dW2_obs)
        Observation Brownian increments, each (n_steps,) or (P, n_steps).
    prior : (mean, Theta0)
        Prior mean 2-vector (or (P, 2) per-path means) and 2x2 covariance.
    theta : RiccatiPath, optional
        Precomputed covariance path on the same grid (reused across paths);
        computed here when omitted.

    The update per step, with coefficients at the left endpoint, is

        innovation = observation increment - mean dt
        mean      += (A mean + b) dt + (B + Theta_k) innovation
    """
    o1, o2 = _check_obs(obs, grid)
    single = o1.ndim == 1
    if single:
        o1, o2 = o1[None, :], o2[None, :]
    P, n = o1.shape
    dt = grid.dt
    mean, Theta0 = prior
    mean = np.asarray(mean, dtype=float)
    if theta is None:
        theta = riccati_theta(dyn, np.asarray(Theta0, dtype=float), grid)
    elif theta.grid != grid:
        raise DimensionError("covariance path grid does not match the filter grid")

    A, b, B = dyn.A_mat, dyn.b_vec, dyn.B_mat
    m = np.empty((P, n + 1))
    bb = np.empty((P, n + 1))
    i1 = np.empty((P, n))
    i2 = np.empty((P, n))
    x0 = np.broadcast_to(mean, (P, 2))
    x, y = x0[:, 0].copy(), x0[:, 1].copy()
    m[:, 0], bb[:, 0] = x, y
    a11, a12, a21, a22 = A[0, 0], A[0, 1], A[1, 0], A[1, 1]
    for k in range(n):
        K = B + theta.Theta[k]
        inn1 = o1[:, k] - x * dt
        inn2 = o2[:, k] - y * dt
        xn = x + (a11 * x + a12 * y + b[0]) * dt + K[0, 0] * inn1 + K[0, 1] * inn2
        yn = y + (a21 * x + a22 * y + b[1]) * dt + K[1, 0] * inn1 + K[1, 1] * inn2
        i1[:, k], i2[:, k] = inn1, inn2
        x, y = xn, yn
        m[:, k + 1], bb[:, k + 1] = x, y
    if single:
        m, bb, i1, i2 = m[0], bb[0], i1[0], i2[0]
    return FilterOutput(grid=grid, mu_bar=m, beta_bar=bb, Theta=theta,
                        dWbar1=i1, dWbar2=i2)


def innovations(
    filter_output: FilterOutput, obs: Tuple[np.ndarray, np.ndarray]
) -> Tuple[np.ndarray, np.ndarray]:
    """Innovation increments: observation increments minus (estimate * dt).

    Identical to the increments stored on the FilterOutput when ``obs`` is
    the series the filter consumed; exposed for reconstruction checks.
    """
    o1, o2 = _check_obs(obs, filter_output.grid)
    dt = filter_output.grid.dt
    left = (..., slice(None, -1))
    m = filter_output.mu_bar[left]
    bb = filter_output.beta_bar[left]
    if o1.shape != m.shape:
        raise DimensionError("observation/estimate shapes do not match")
    return o1 - m * dt, o2 - bb * dt


# ---------------------------------------------------------------------------
# Particle filter (weighted Zakai discretization, normalized per step)
# ---------------------------------------------------------------------------

@dataclass
class ParticleCloud:
    """Terminal particle states and normalized weights."""

    states: np.ndarray
    weights: np.ndarray
    resample_count: int = 0

    @property
    def ess(self) -> float:
        return 1.0 / float(np.sum(self.weights**2))


def _systematic_resample(weights: np.ndarray, u: float) -> np.ndarray:
    n = weights.size
    positions = (u + np.arange(n)) / n
    cumw = np.cumsum(weights)
    cumw[-1] = 1.0
    return np.minimum(np.searchsorted(cumw, positions), n - 1)


def particle_ks_run(
    dyn: SignalDynamics,
    obs: Tuple[np.ndarray, np.ndarray],
    grid: TimeGrid,
    prior_sampler: Callable[[np.random.Generator, int], np.ndarray],
    n_particles: int,
    seed: int,
    h_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    ess_fraction: float = 0.5,
    exact_reductions: bool = False,
) -> Tuple[FilterOutput, ParticleCloud]:
    """Weighted-particle filter for the conditional law of the risk pair.

    Per step k the weights multiply by exp(h(X).dY - 0.5 |h(X)|^2 dt)
    (normalized via a log-sum-exp shift) and the particles propagate
    conditionally on the observed increments; for correlated dynamics
    (B != 0) the observation increments drive the B channel.  Systematic
    resampling triggers when ESS < ess_fraction * N.

    Parameters
    ----------
    h_fn : callable, optional
        Sensor override mapping (N, 2) states to (N, 2) drifts; defaults to
        the identity.  Passing ``lambda x: np.zeros_like(x)`` decouples the
        weights from the observations entirely.
    exact_reductions : bool
        Use exact (fsum) reductions for weights and means so the estimate is
        bitwise invariant under particle permutation.  Slower; used by the
        exchangeability tests.

    Returns
    -------
    (FilterOutput, ParticleCloud)
        The FilterOutput's Theta path holds the weighted cloud covariance.

    Raises
    ------
    DegeneracyError
        If every unnormalized weight underflows to zero (or turns non-finite).
    """
    if n_particles < 1:
        raise DimensionError("need at least one particle")
    o1, o2 = _check_obs(obs, grid)
    if o1.ndim != 1:
        raise DimensionError("particle filter runs one observation path at a time")
    n = grid.n_steps
    dt = grid.dt
    sq = math.sqrt(dt)
    rng = path_rng(seed, 0)
    X = np.asarray(prior_sampler(rng, n_particles), dtype=float)
    if X.shape != (n_particles, 2):
        raise DimensionError("prior sampler must return (n_particles, 2) states")
    N = n_particles
    logw = np.full(N, -math.log(N))
    h = h_fn if h_fn is not None else (lambda x: x)

    if exact_reductions:
        def total(v):
            return math.fsum(v.tolist())
    else:
        def total(v):
            return float(np.sum(v))

    def normalized(lw):
        mx = np.max(lw)
        if not np.isfinite(mx):
            raise DegeneracyError("all particle weights underflowed or went non-finite")
        w = np.exp(lw - mx)
        s = total(w)
        if s <= 0.0 or not math.isfinite(s):
            raise DegeneracyError("particle weight normalization failed")
        return w / s

    def moments(w, X):
        m1 = total(w * X[:, 0])
        m2 = total(w * X[:, 1])
        d1, d2 = X[:, 0] - m1, X[:, 1] - m2
        c11 = total(w * d1 * d1)
        c12 = total(w * d1 * d2)
        c22 = total(w * d2 * d2)
        return m1, m2, np.array([[c11, c12], [c12, c22]])

    mu_bar = np.empty(n + 1)
    beta_bar = np.empty(n + 1)
    Theta = np.empty((n + 1, 2, 2))
    i1 = np.empty(n)
    i2 = np.empty(n)
    w = normalized(logw)
    mu_bar[0], beta_bar[0], Theta[0] = moments(w, X)
    A, b, G, B = dyn.A_mat, dyn.b_vec, dyn.G_mat, dyn.B_mat
    resamples = 0
    for k in range(n):
        dY = np.array([o1[k], o2[k]])
        i1[k] = o1[k] - mu_bar[k] * dt
        i2[k] = o2[k] - beta_bar[k] * dt
        hX = h(X)
        logw = np.log(w) + hX @ dY - 0.5 * np.sum(hX * hX, axis=1) * dt
        w = normalized(logw)
        dM = rng.standard_normal((N, 2)) * sq
        X = X + (X @ A.T + b) * dt + (dY - hX * dt) @ B.T + dM @ G.T
        mu_bar[k + 1], beta_bar[k + 1], Theta[k + 1] = moments(w, X)
        if 1.0 / total(w * w) < ess_fraction * N:
            idx = _systematic_resample(w, rng.random())
            X = X[idx]
            w = np.full(N, 1.0 / N)
            resamples += 1
    cloud = ParticleCloud(states=X, weights=w, resample_count=resamples)
    out = FilterOutput(
        grid=grid, mu_bar=mu_bar, beta_bar=beta_bar,
        Theta=RiccatiPath(grid=grid, Theta=Theta), dWbar1=i1, dWbar2=i2,
    )
    return out, cloud


# ---------------------------------------------------------------------------
# CSV persistence: t, mu_bar, beta_bar, theta11, theta12, theta22, dWbar1, dWbar2
# ---------------------------------------------------------------------------

FILTER_COLUMNS = "t,mu_bar,beta_bar,theta11,theta12,theta22,dWbar1,dWbar2"


def write_filter_csv(out: FilterOutput, fileobj_or_path) -> None:
    """Write one path's filter output with the declared schema.

    Innovation columns are NaN on the terminal row.
    """
    import os as _os

    if out.mu_bar.ndim != 1:
        raise DimensionError("write_filter_csv expects a single-path FilterOutput")
    own = isinstance(fileobj_or_path, (str, _os.PathLike))
    f = open(fileobj_or_path, "w", newline="") if own else fileobj_or_path
    try:
        f.write(FILTER_COLUMNS + "\n")
        times = out.grid.times()
        n = out.grid.n_steps
        for k in range(n + 1):
            th = out.Theta.Theta[k]
            incs = (out.dWbar1[k], out.dWbar2[k]) if k < n else (math.nan, math.nan)
            row = (times[k], out.mu_bar[k], out.beta_bar[k],
                   th[0, 0], th[0, 1], th[1, 1], *incs)
            f.write(",".join(repr(float(x)) for x in row) + "\n")
    finally:
        if own:
            f.close()
