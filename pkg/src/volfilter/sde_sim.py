"""Path simulation of the full-information market under the physical measure.

Discretization
--------------
The price is simulated in log space (exact positivity); the volatility state,
the latent drift, and the GarchFactor speed process use Euler-Maruyama with
coefficients frozen at the left endpoint of each step:

    dlog S = (price drift) dt - 0.5 g^2 dt + g dW1
    dV     = f dt + k (rho dW1 + rho_bar dW2)
    dmu    = lambda_mu (theta_mu - mu) dt + sigma_mu dW3
    dbeta  = lambda_beta beta dt + sigma_beta dW4

For Heston/GarchFactor the volatility state is fully truncated: the drift and
diffusion coefficients see max(V, 0); a path whose state is nonpositive on
more than 10% of its steps raises SimulationError.

Because the coefficients are frozen at the left endpoint, inverting the
simulated price/volatility through the measure change reproduces the driving
increments plus risk-premium drift *exactly* per step (a property of the
discretization, tested at machine precision):

    dW1_obs = (dlog S + 0.5 g^2 dt) / g            = dW1 + (price risk) dt
    dW2_obs = (dV - rho k dW1_obs) / (rho_bar k)   = dW2 + (vol risk) dt

RNG contract
------------
Path i of a run with seed s draws from a counter-based Philox stream keyed by
(s, first_path + i).  Per path the draw order is fixed: two prior normals
(drift, then speed), then the (n_steps, 4) increment matrix.  Results are
therefore bit-identical for any partition of paths across workers.
"""

from __future__ import annotations

import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DimensionError, DomainError, InsufficientData, SimulationError
from .models import ModelKind, ModelParams, model_coefficients, validate_params


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid on [t0, T] with n_steps intervals, both endpoints included."""

    t0: float
    T: float
    n_steps: int

    def __post_init__(self):
        if not self.T > self.t0:
            raise DimensionError(f"need T > t0, got [{self.t0}, {self.T}]")
        if self.n_steps < 1:
            raise DimensionError(f"need n_steps >= 1, got {self.n_steps}")

    @property
    def dt(self) -> float:
        return (self.T - self.t0) / self.n_steps

    def times(self) -> np.ndarray:
        return np.linspace(self.t0, self.T, self.n_steps + 1)

    def refined(self, factor: int) -> "TimeGrid":
        return TimeGrid(self.t0, self.T, self.n_steps * factor)


@dataclass
class MarketPath:
    """One discretized trajectory plus its driving Brownian increments.

    Node series (S, V, mu, beta) have length n_steps + 1; increment series
    dW1..dW4 have length n_steps.  beta is NaN for non-Garch kinds.
    """

    grid: TimeGrid
    S: np.ndarray
    V: np.ndarray
    mu: np.ndarray
    beta: np.ndarray
    dW1: np.ndarray
    dW2: np.ndarray
    dW3: np.ndarray
    dW4: np.ndarray
    path_id: int = 0


@dataclass
class PathSet:
    """A batch of paths stored as stacked (n_paths, .) arrays.

    Regenerating with the same (seed, params, grid, n_paths, first_path) is
    bit-identical regardless of worker count.
    """

    grid: TimeGrid
    params: ModelParams
    seed: int
    S: np.ndarray
    V: np.ndarray
    mu: np.ndarray
    beta: np.ndarray
    dW1: np.ndarray
    dW2: np.ndarray
    dW3: np.ndarray
    dW4: np.ndarray
    first_path: int = 0

    @property
    def n_paths(self) -> int:
        return self.S.shape[0]

    def path(self, i: int) -> MarketPath:
        return MarketPath(
            self.grid, self.S[i], self.V[i], self.mu[i], self.beta[i],
            self.dW1[i], self.dW2[i], self.dW3[i], self.dW4[i],
            path_id=self.first_path + i,
        )

    def paths(self) -> Iterator[MarketPath]:
        for i in range(self.n_paths):
            yield self.path(i)


def path_rng(seed: int, path_index: int) -> np.random.Generator:
    """Counter-based substream for one path: Philox keyed by (seed, index)."""
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, path_index & 0xFFFFFFFFFFFFFFFF],
                   dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def draw_path_normals(
    seed: int, path_index: int, n_steps: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Fixed-order draws for one path: (2 prior normals, (n_steps, 4) matrix)."""
    rng = path_rng(seed, path_index)
    z0 = rng.standard_normal(2)
    z = rng.standard_normal((n_steps, 4))
    return z0, z


def resolve_workers(n_workers: Optional[int]) -> int:
    """Worker count: explicit argument, else VOLFILTER_THREADS, else 1."""
    if n_workers is not None:
        return max(1, int(n_workers))
    env = os.environ.get("VOLFILTER_THREADS")
    return max(1, int(env)) if env else 1


def _price_drift(params: ModelParams, mu: np.ndarray, g: np.ndarray) -> np.ndarray:
    return mu * g if params.is_factor else mu


def _truncated_coeffs(params: ModelParams, v: np.ndarray):
    """Left-endpoint g, k with full truncation for the positive-state kinds."""
    kind = params.kind
    if kind == ModelKind.LOG_OU:
        return np.exp(v), np.full_like(v, params.sigma_V)
    if kind == ModelKind.HESTON:
        vp = np.maximum(v, 0.0)
        return np.sqrt(vp), params.sigma_V * np.sqrt(vp)
    if kind == ModelKind.GARCH_FACTOR:
        vp = np.maximum(v, 0.0)
        return np.sqrt(vp), params.sigma_V * vp
    return np.abs(v), np.full_like(v, params.sigma_V)


def _simulate_arrays(
    params: ModelParams, grid: TimeGrid, z0: np.ndarray, z: np.ndarray
) -> dict:
    """Core Euler recursion over a block of paths with pre-drawn normals.

    z0: (P, 2) prior draws; z: (P, n_steps, 4) standard normals.
    """
    P, n = z.shape[0], grid.n_steps
    dt = grid.dt
    sq = math.sqrt(dt)
    rho, rho_bar = params.rho, params.rho_bar
    positive_state = params.kind in (ModelKind.HESTON, ModelKind.GARCH_FACTOR)

    logS = np.empty((P, n + 1))
    V = np.empty((P, n + 1))
    mu = np.empty((P, n + 1))
    beta = np.full((P, n + 1), np.nan)
    logS[:, 0] = math.log(params.S0)
    V[:, 0] = params.V0
    mu[:, 0] = params.m0 + math.sqrt(params.sigma0) * z0[:, 0]
    is_garch = params.kind == ModelKind.GARCH_FACTOR
    if is_garch:
        beta[:, 0] = params.m1 + math.sqrt(params.sigma1) * z0[:, 1]

    dW = z * sq  # (P, n, 4)
    nonpos = np.zeros(P, dtype=np.int64)
    for k in range(n):
        vk = V[:, k]
        g, kk = _truncated_coeffs(params, vk)
        if positive_state:
            nonpos += vk <= 0.0
        muk = mu[:, k]
        drift = _price_drift(params, muk, g)
        logS[:, k + 1] = logS[:, k] + (drift - 0.5 * g * g) * dt + g * dW[:, k, 0]
        if is_garch:
            f = beta[:, k] * (params.theta - np.maximum(vk, 0.0))
        else:
            vv = np.maximum(vk, 0.0) if positive_state else vk
            f = params.lambda_V * (params.theta - vv)
        V[:, k + 1] = vk + f * dt + kk * (rho * dW[:, k, 0] + rho_bar * dW[:, k, 1])
        mu[:, k + 1] = muk + params.lambda_mu * (params.theta_mu - muk) * dt \
            + params.sigma_mu * dW[:, k, 2]
        if is_garch:
            beta[:, k + 1] = beta[:, k] + params.lambda_beta * beta[:, k] * dt \
                + params.sigma_beta * dW[:, k, 3]

    if positive_state:
        bad = np.nonzero(nonpos > 0.10 * n)[0]
        if bad.size:
            raise SimulationError(
                f"{params.kind.value} state nonpositive on more than 10% of steps "
                f"for {bad.size} path(s), first local index {bad[0]}"
            )
    return {
        "S": np.exp(logS - logS[:, :1]) * params.S0,
        "V": V, "mu": mu, "beta": beta,
        "dW1": dW[:, :, 0], "dW2": dW[:, :, 1],
        "dW3": dW[:, :, 2], "dW4": dW[:, :, 3],
    }


def simulate_paths(
    params: ModelParams,
    grid: TimeGrid,
    n_paths: int,
    seed: int,
    first_path: int = 0,
    n_workers: Optional[int] = None,
) -> PathSet:
    """Simulate a batch of market paths under the physical measure.

    Parameters
    ----------
    params : ModelParams
        Validated model parameters (re-validated here).
    grid : TimeGrid
    n_paths : int
    seed : int
        Run seed; path i uses the substream keyed by (seed, first_path + i).
    first_path : int
        Global index of the first path (for block-wise generation).
    n_workers : int, optional
        Thread count; defaults to VOLFILTER_THREADS or 1.  Has no effect on
        the values produced.
    """
    validate_params(params)
    if n_paths < 1:
        raise DimensionError(f"need n_paths >= 1, got {n_paths}")
    n = grid.n_steps
    out = {
        name: np.empty((n_paths, n + 1) if node else (n_paths, n))
        for name, node in [("S", True), ("V", True), ("mu", True), ("beta", True),
                           ("dW1", False), ("dW2", False), ("dW3", False), ("dW4", False)]
    }

    def run_chunk(lo: int, hi: int):
        z0 = np.empty((hi - lo, 2))
        z = np.empty((hi - lo, n, 4))
        for i in range(lo, hi):
            z0[i - lo], z[i - lo] = draw_path_normals(seed, first_path + i, n)
        res = _simulate_arrays(params, grid, z0, z)
        for name in out:
            out[name][lo:hi] = res[name]

    workers = resolve_workers(n_workers)
    if workers == 1 or n_paths < 2 * workers:
        run_chunk(0, n_paths)
    else:
        bounds = np.linspace(0, n_paths, workers + 1, dtype=int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_chunk, bounds[j], bounds[j + 1])
                       for j in range(workers) if bounds[j] < bounds[j + 1]]
            for f in futures:
                f.result()

    return PathSet(grid=grid, params=params, seed=seed, first_path=first_path, **out)


def observed_brownians(
    path: Union[MarketPath, PathSet], params: ModelParams
) -> Tuple[np.ndarray, np.ndarray]:
    """Reconstruct the observation Brownian increments from a path.

    Inverts the driftless price/volatility dynamics under the measure change,
    with g, k frozen at each step's left endpoint.  Returns per-step arrays
    shaped like the path's increment series.

    Raises
    ------
    DomainError
        If g or k vanishes (or the state leaves the admissible domain) at
        any node used as a left endpoint.
    """
    S, V = path.S, path.V
    dt = path.grid.dt
    left = (slice(None), slice(None, -1)) if S.ndim == 2 else slice(None, -1)
    g, k = model_coefficients(params, V[left])
    if np.any(np.asarray(g) == 0.0) or np.any(np.asarray(k) == 0.0):
        raise DomainError("g or k vanishes at a step's left endpoint")
    dlogS = np.diff(np.log(S), axis=-1)
    dW1_obs = (dlogS + 0.5 * g * g * dt) / g
    dV = np.diff(V, axis=-1)
    dW2_obs = (dV - params.rho * k * dW1_obs) / (params.rho_bar * k)
    return dW1_obs, dW2_obs


def realized_vol_estimate(
    log_s: np.ndarray,
    window: int,
    dt: float,
    params: Optional[ModelParams] = None,
) -> np.ndarray:
    """Rolling quadratic-variation estimate of the price volatility g(V).

    For each node i >= window, the estimate over the trailing window is
    sqrt( sum of squared log-price increments / (window dt) ).  With params
    given, the estimate is inverted through the model's g to a V estimate.

    Returns
    -------
    ndarray of length n_steps + 1 - window (aligned to nodes window..n_steps).

    Raises
    ------
    InsufficientData
        If the series has fewer than ``window`` increments.
    DomainError
        If a zero estimate is inverted through g.
    """
    if window < 2:
        raise InsufficientData(f"need window >= 2, got {window}")
    inc = np.diff(np.asarray(log_s, dtype=float))
    if inc.size < window:
        raise InsufficientData(
            f"series has {inc.size} increments, window is {window}"
        )
    csum = np.concatenate([[0.0], np.cumsum(inc * inc)])
    rv = (csum[window:] - csum[:-window]) / (window * dt)
    g_est = np.sqrt(rv)
    if params is None:
        return g_est
    if np.any(g_est == 0.0):
        raise DomainError("zero realized volatility cannot be inverted through g")
    kind = params.kind
    if kind == ModelKind.LOG_OU:
        return np.log(g_est)
    if kind in (ModelKind.HESTON, ModelKind.GARCH_FACTOR):
        return g_est * g_est
    return g_est  # SteinStein: |v| = g, positive root


# ---------------------------------------------------------------------------
# CSV persistence: path_id, t, S, V, mu, beta, dW1, dW2, dW3, dW4
# ---------------------------------------------------------------------------

PATHSET_COLUMNS = "path_id,t,S,V,mu,beta,dW1,dW2,dW3,dW4"


def _fmt(x: float) -> str:
    # repr gives the shortest decimal string that round-trips the float64
    return repr(float(x))


def write_pathset_csv(pathset: PathSet, fileobj_or_path) -> None:
    """Write a PathSet with the declared schema; one row per (path, node).

    Increment columns are NaN on each path's terminal row; beta is NaN for
    non-Garch kinds.
    """
    own = isinstance(fileobj_or_path, (str, os.PathLike))
    f = open(fileobj_or_path, "w", newline="") if own else fileobj_or_path
    try:
        f.write(PATHSET_COLUMNS + "\n")
        times = pathset.grid.times()
        n = pathset.grid.n_steps
        for i in range(pathset.n_paths):
            pid = pathset.first_path + i
            for k in range(n + 1):
                incs = (
                    (pathset.dW1[i, k], pathset.dW2[i, k],
                     pathset.dW3[i, k], pathset.dW4[i, k])
                    if k < n else (math.nan,) * 4
                )
                row = (pid, times[k], pathset.S[i, k], pathset.V[i, k],
                       pathset.mu[i, k], pathset.beta[i, k], *incs)
                f.write(str(pid) + "," + ",".join(_fmt(x) for x in row[1:]) + "\n")
    finally:
        if own:
            f.close()


def read_pathset_csv(fileobj_or_path, params: ModelParams, seed: int = -1) -> PathSet:
    """Read a PathSet written by :func:`write_pathset_csv`."""
    own = isinstance(fileobj_or_path, (str, os.PathLike))
    f = open(fileobj_or_path, "r", newline="") if own else fileobj_or_path
    try:
        header = f.readline().strip()
        if header != PATHSET_COLUMNS:
            raise DimensionError(f"unexpected header {header!r}")
        raw = np.loadtxt(f, delimiter=",", ndmin=2)
    finally:
        if own:
            f.close()
    pids = np.unique(raw[:, 0]).astype(int)
    rows_per = raw.shape[0] // pids.size
    n = rows_per - 1
    t = raw[:rows_per, 1]
    grid = TimeGrid(float(t[0]), float(t[-1]), n)
    data = raw.reshape(pids.size, rows_per, raw.shape[1])
    return PathSet(
        grid=grid, params=params, seed=seed, first_path=int(pids[0]),
        S=data[:, :, 2].copy(), V=data[:, :, 3].copy(),
        mu=data[:, :, 4].copy(), beta=data[:, :, 5].copy(),
        dW1=data[:, :n, 6].copy(), dW2=data[:, :n, 7].copy(),
        dW3=data[:, :n, 8].copy(), dW4=data[:, :n, 9].copy(),
    )
