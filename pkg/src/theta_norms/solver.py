"""Accelerated proximal gradient (FISTA) for completion and multitask problems.

Losses expose ``value_and_grad`` plus a Lipschitz bound; regularizers expose
``value`` and ``prox`` with the step size folded in.  Swapping regularizers
never changes the iteration code path.  The centered variants optimize over
the pair ``(V, z)`` with ``W = V + z 1^T``: the prox acts on ``V`` only and
leaves ``z`` untouched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import KSupportParams
from .errors import DivergenceError, InvalidParamsError
from .observations import TRAIN, ObservationSet
from .spectral import (
    ClusterParams,
    SpectralOperand,
    prox_spectral_elastic_net,
    prox_trace,
    spectral_ksupport_norm,
    spectral_prox,
    spectral_theta_norm,
)

__all__ = [
    "SolverConfig",
    "SolverState",
    "CompletionProblem",
    "MultitaskProblem",
    "REGULARIZERS",
    "loss_masked_sq",
    "fista",
    "solve_centered",
    "solve",
    "prox_gradient_residual",
]

REGULARIZERS = (
    "trace",
    "elastic-net",
    "spectral-ksupport",
    "spectral-box",
    "cluster",
    "centered-cluster",
    "centered-ksupport",
)


@dataclass
class SolverConfig:
    """Iteration budget, relative objective-change tolerance, and step control."""

    max_iterations: int = 2000
    tolerance: float = 1e-5
    step_size: float | None = None  # None: 1/L from the loss
    record_trace: bool = True

    def __post_init__(self):
        if self.max_iterations < 1:
            raise InvalidParamsError("max_iterations must be >= 1")
        if self.tolerance <= 0.0:
            raise InvalidParamsError("tolerance must be positive")


@dataclass
class SolverState:
    """FISTA bookkeeping: iterate pair, momentum, objective trace."""

    iterate: object
    extrapolated: object
    momentum: float
    objective_trace: list
    iterations_run: int
    converged: bool


# ---------------------------------------------------------------------------
# losses


class MaskedSquaredLoss:
    """(1/2) sum over observed train entries of (W_ij - y_ij)^2; Lipschitz 1."""

    def __init__(self, obs: ObservationSet):
        m = obs.split == TRAIN
        self.rows = obs.row_idx[m]
        self.cols = obs.col_idx[m]
        self.vals = obs.values[m]
        self.shape = (obs.rows, obs.cols)
        self.lipschitz = 1.0

    def value_and_grad(self, W):
        r = W[self.rows, self.cols] - self.vals
        grad = np.zeros(self.shape)
        grad[self.rows, self.cols] = r
        return 0.5 * float(r @ r), grad

    def value(self, W):
        r = W[self.rows, self.cols] - self.vals
        return 0.5 * float(r @ r)


class MultitaskSquaredLoss:
    """(1/2) sum_t ||X_t w_t - y_t||^2 with one column of W per task."""

    def __init__(self, xs, ys):
        if len(xs) != len(ys) or not xs:
            raise InvalidParamsError("need one design matrix and target per task")
        self.xs = [np.asarray(x, dtype=float) for x in xs]
        self.ys = [np.asarray(y, dtype=float) for y in ys]
        d = self.xs[0].shape[1]
        if any(x.shape[1] != d for x in self.xs):
            raise InvalidParamsError("tasks must share the feature dimension")
        self.shape = (d, len(xs))
        self.lipschitz = max(
            float(np.linalg.norm(x, ord=2)) ** 2 for x in self.xs
        )

    def value_and_grad(self, W):
        grad = np.empty(self.shape)
        val = 0.0
        for t, (x, y) in enumerate(zip(self.xs, self.ys)):
            r = x @ W[:, t] - y
            val += 0.5 * float(r @ r)
            grad[:, t] = x.T @ r
        return val, grad

    def value(self, W):
        return sum(
            0.5 * float(np.sum((x @ W[:, t] - y) ** 2))
            for t, (x, y) in enumerate(zip(self.xs, self.ys))
        )


def loss_masked_sq(W, obs: ObservationSet):
    """Masked squared loss value and gradient at W (train entries)."""
    return MaskedSquaredLoss(obs).value_and_grad(np.asarray(W, dtype=float))


# ---------------------------------------------------------------------------
# regularizers


class _TraceReg:
    def __init__(self, lam):
        self.lam = lam

    def value(self, W):
        return self.lam * float(SpectralOperand(W).sigma.sum())

    def prox(self, V, step):
        return prox_trace(V, step * self.lam)


class _ElasticNetReg:
    def __init__(self, lam, mu):
        self.lam = lam
        self.mu = mu

    def value(self, W):
        return self.lam * float(SpectralOperand(W).sigma.sum()) + 0.5 * self.mu * float(
            np.sum(W * W)
        )

    def prox(self, V, step):
        return prox_spectral_elastic_net(V, step * self.lam, step * self.mu)


class _SquaredSpectralReg:
    """(lam/2) * spectral norm squared, for box/k-support/cluster parameters."""

    def __init__(self, lam, params):
        self.lam = lam
        self.params = params

    def value(self, W):
        if isinstance(self.params, KSupportParams):
            n = spectral_ksupport_norm(W, self.params.k)
        elif isinstance(self.params, ClusterParams):
            p = self.params.box_params(np.asarray(W).shape[1])
            n = spectral_theta_norm(W, p)
        else:
            n = spectral_theta_norm(W, self.params)
        return 0.5 * self.lam * n * n

    def prox(self, V, step):
        return spectral_prox(V, step * self.lam, self.params)


class _ZeroReg:
    """No-op regularizer (1-task centered problems: the centered norm vanishes)."""

    def value(self, W):
        return 0.0

    def prox(self, V, step):
        return V


# ---------------------------------------------------------------------------
# problems


@dataclass
class CompletionProblem:
    """Matrix completion instance: observations, regularizer choice, parameters.

    ``regularizer`` is one of :data:`REGULARIZERS`.  ``k`` parameterizes the
    k-support/cluster families, ``(a, b)`` the box families (budget
    ``c = (b - a) k + m a`` on the column dimension), ``mu`` the elastic net,
    ``eps_mean`` the mean-penalty weight of the centered loss.
    """

    observations: ObservationSet
    regularizer: str
    lam: float
    k: int = 1
    a: float = 0.01
    b: float = 1.0
    mu: float = 1.0
    eps_mean: float = 0.0

    def __post_init__(self):
        if self.regularizer not in REGULARIZERS:
            raise InvalidParamsError(f"unknown regularizer {self.regularizer!r}")
        if self.lam <= 0.0:
            raise InvalidParamsError("lam must be positive")

    @property
    def shape(self):
        return (self.observations.rows, self.observations.cols)

    @property
    def is_centered(self):
        return self.regularizer.startswith("centered-")

    def loss(self):
        return MaskedSquaredLoss(self.observations)

    def make_regularizer(self):
        return _build_regularizer(self)


@dataclass
class MultitaskProblem:
    """Per-task regression instance: one design matrix and target per column."""

    xs: list
    ys: list
    regularizer: str
    lam: float
    k: int = 1
    a: float = 0.01
    b: float = 1.0
    mu: float = 1.0
    eps_mean: float = 0.0

    def __post_init__(self):
        if self.regularizer not in REGULARIZERS:
            raise InvalidParamsError(f"unknown regularizer {self.regularizer!r}")
        if self.lam <= 0.0:
            raise InvalidParamsError("lam must be positive")

    @property
    def shape(self):
        return (np.asarray(self.xs[0]).shape[1], len(self.xs))

    @property
    def is_centered(self):
        return self.regularizer.startswith("centered-")

    def loss(self):
        return MultitaskSquaredLoss(self.xs, self.ys)

    def make_regularizer(self):
        return _build_regularizer(self)


def _build_regularizer(problem):
    name = problem.regularizer
    m = problem.shape[1]
    if name == "trace":
        return _TraceReg(problem.lam)
    if name == "elastic-net":
        return _ElasticNetReg(problem.lam, problem.mu)
    if name == "spectral-ksupport" or name == "centered-ksupport":
        if name == "centered-ksupport" and m < 2:
            return _ZeroReg()
        return _SquaredSpectralReg(problem.lam, KSupportParams(k=problem.k))
    # box / cluster / centered-cluster share the (a, b, k) parameterization
    if m < 2:
        if name == "centered-cluster":
            return _ZeroReg()
        raise InvalidParamsError(f"{name} regularizer needs at least 2 columns")
    cp = ClusterParams(a=problem.a, b=problem.b, k=problem.k)
    if name == "spectral-box" or name == "cluster":
        return _SquaredSpectralReg(problem.lam, cp.box_params(m))
    return _SquaredSpectralReg(problem.lam, cp)  # centered-cluster


# ---------------------------------------------------------------------------
# iteration


def _check_divergence(obj, initial):
    if obj > 1e3 * initial + 1e-9:
        raise DivergenceError(
            f"objective {obj:.3e} exceeds 1000x its initial value {initial:.3e}; "
            "try a smaller step size"
        )


def fista(problem, config: SolverConfig = None):
    """Proximal gradient with Nesterov momentum on a (non-centered) problem.

    Stops when the relative objective change drops below ``config.tolerance``
    or at ``max_iterations``.  Returns the final iterate and solver state.
    """
    config = config or SolverConfig()
    if problem.is_centered:
        raise InvalidParamsError("centered regularizers are handled by solve_centered")
    loss = problem.loss()
    reg = problem.make_regularizer()
    step = config.step_size if config.step_size else 1.0 / loss.lipschitz

    x = np.zeros(problem.shape)
    y = x
    t = 1.0
    f_prev = loss.value(x) + reg.value(x)
    initial = f_prev
    trace = []
    converged = False
    iterations = 0
    for _ in range(config.max_iterations):
        _, grad = loss.value_and_grad(y)
        x_new = reg.prox(y - step * grad, step)
        obj = loss.value(x_new) + reg.value(x_new)
        iterations += 1
        if config.record_trace:
            trace.append(obj)
        _check_divergence(obj, initial)
        t_new = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
        y = x_new + ((t - 1.0) / t_new) * (x_new - x)
        x, t = x_new, t_new
        if abs(obj - f_prev) < config.tolerance * max(abs(f_prev), 1e-30):
            converged = True
            f_prev = obj
            break
        f_prev = obj
    state = SolverState(
        iterate=x,
        extrapolated=y,
        momentum=t,
        objective_trace=trace,
        iterations_run=iterations,
        converged=converged,
    )
    return x, state


def solve_centered(problem, config: SolverConfig = None):
    """FISTA on the joint (V, z) formulation of a centered problem.

    ``W = [v_1 + z, ..., v_m + z]``; the loss optionally penalizes the task
    mean with weight ``eps_mean``, and the prox applies to V only (the prox
    of the composite leaves z untouched).  Returns ``(W, z, state)``.
    """
    config = config or SolverConfig()
    if not problem.is_centered:
        raise InvalidParamsError("solve_centered expects a centered regularizer")
    loss = problem.loss()
    reg = problem.make_regularizer()
    d, m = problem.shape
    eps_m = problem.eps_mean
    lam = problem.lam
    # gradient steps run in (V, zt) with zt = sqrt(m) z, which bounds the joint
    # curvature by 2 L_loss + 4 lam eps_m independently of m
    root_m = math.sqrt(m)
    lip = 2.0 * loss.lipschitz + 4.0 * lam * eps_m
    step = config.step_size if config.step_size else 1.0 / lip

    def objective_parts(V, zt):
        W = V + (zt / root_m)[:, None]
        base = loss.value(W)
        if eps_m:
            wbar = W.mean(axis=1)
            base += lam * eps_m * m * float(wbar @ wbar)
        return base + reg.value(V)

    def grads(V, zt):
        W = V + (zt / root_m)[:, None]
        _, G = loss.value_and_grad(W)
        gV = G.copy()
        gz = G.sum(axis=1) / root_m
        if eps_m:
            wbar = W.mean(axis=1)
            gV += (2.0 * lam * eps_m) * wbar[:, None]
            gz += (2.0 * lam * eps_m * root_m) * wbar
        return gV, gz

    V = np.zeros((d, m))
    zt = np.zeros(d)
    Vy, zy = V, zt
    t = 1.0
    f_prev = objective_parts(V, zt)
    initial = f_prev
    trace = []
    converged = False
    iterations = 0
    for _ in range(config.max_iterations):
        gV, gz = grads(Vy, zy)
        V_new = reg.prox(Vy - step * gV, step)
        z_new = zy - step * gz
        obj = objective_parts(V_new, z_new)
        iterations += 1
        if config.record_trace:
            trace.append(obj)
        _check_divergence(obj, initial)
        t_new = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
        Vy = V_new + ((t - 1.0) / t_new) * (V_new - V)
        zy = z_new + ((t - 1.0) / t_new) * (z_new - zt)
        V, zt, t = V_new, z_new, t_new
        if abs(obj - f_prev) < config.tolerance * max(abs(f_prev), 1e-30):
            converged = True
            f_prev = obj
            break
        f_prev = obj
    z = zt / root_m
    W = V + z[:, None]
    state = SolverState(
        iterate=(V, z),
        extrapolated=(Vy, zy),
        momentum=t,
        objective_trace=trace,
        iterations_run=iterations,
        converged=converged,
    )
    return W, z, state


def solve(problem, config: SolverConfig = None):
    """Dispatch to fista or solve_centered; always returns (W, state)."""
    if problem.is_centered:
        W, _, state = solve_centered(problem, config)
        return W, state
    return fista(problem, config)


def prox_gradient_residual(problem, W) -> float:
    """Scaled fixed-point residual ||W - prox(W - step * grad)|| / (1 + ||W||)."""
    loss = problem.loss()
    reg = problem.make_regularizer()
    step = 1.0 / loss.lipschitz
    _, grad = loss.value_and_grad(W)
    p = reg.prox(W - step * grad, step)
    return float(np.linalg.norm(W - p) / (1.0 + np.linalg.norm(W)))
