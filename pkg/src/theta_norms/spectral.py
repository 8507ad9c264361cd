"""Orthogonally invariant extensions: norms and proxes on singular values.

A permutation- and sign-invariant vector norm applied to the spectrum gives
an orthogonally invariant matrix norm; its prox is obtained by applying the
vector prox to the singular values and reassembling with the same singular
vectors.  The cluster norm (a trace-form infimum over bounded-spectrum
covariance matrices) coincides with the box theta-norm of the spectrum, with
the theta vector living on the column/task dimension ``m``; singular values
are zero-padded to length ``m`` and padded entries take ``theta = a``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import BoxParams, KSupportParams, ksupport_norm, theta_norm
from .errors import InvalidInputError, InvalidParamsError, NumericalError
from .prox import ProxRequest, prox_sq_ksupport, prox_sq_theta

__all__ = [
    "SpectralOperand",
    "ClusterParams",
    "spectral_theta_norm",
    "spectral_ksupport_norm",
    "cluster_norm",
    "spectral_prox",
    "prox_trace",
    "prox_spectral_elastic_net",
    "centering",
    "centered_cluster_norm",
    "numerical_rank",
]

_RANK_RTOL = 1e-10


@dataclass
class SpectralOperand:
    """Dense matrix with its thin SVD cached at construction.

    Sign convention: each left singular vector's largest-magnitude entry is
    made positive, so factors are deterministic.  Operands are immutable
    after construction and safe to share across threads.
    """

    matrix: np.ndarray
    u: np.ndarray = field(init=False, repr=False)
    sigma: np.ndarray = field(init=False, repr=False)
    v: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.size == 0:
            raise InvalidInputError(f"expected a non-empty 2-d matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidInputError("matrix contains non-finite entries")
        self.matrix = m
        try:
            u, s, vt = np.linalg.svd(m, full_matrices=False)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"SVD failed on {m.shape} matrix: {exc}") from exc
        flip = np.sign(u[np.argmax(np.abs(u), axis=0), np.arange(u.shape[1])])
        flip[flip == 0.0] = 1.0
        self.u = u * flip
        self.sigma = s
        self.v = vt.T * flip

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def padded_sigma(self) -> np.ndarray:
        """Singular values zero-padded to the column dimension m."""
        m = self.matrix.shape[1]
        out = np.zeros(m)
        out[: self.sigma.size] = self.sigma
        return out


@dataclass(frozen=True)
class ClusterParams:
    """Cluster-norm parameters: within/between-cluster scales and k (k+1 clusters).

    Induces the budget ``c = (b - a) k + m a`` at task dimension ``m``.
    """

    a: float
    b: float
    k: int

    def __post_init__(self):
        if not 0.0 < self.a < self.b:
            raise InvalidParamsError(f"need 0 < a < b, got a={self.a}, b={self.b}")
        if int(self.k) != self.k or self.k < 1:
            raise InvalidParamsError(f"k must be a positive integer, got {self.k}")

    def box_params(self, m: int) -> BoxParams:
        if not 1 <= self.k <= m - 1:
            raise InvalidParamsError(f"k={self.k} out of range for m={m} tasks")
        return BoxParams(a=self.a, b=self.b, c=(self.b - self.a) * self.k + m * self.a)


def _operand(W) -> SpectralOperand:
    return W if isinstance(W, SpectralOperand) else SpectralOperand(np.asarray(W, dtype=float))


def spectral_theta_norm(W, p: BoxParams) -> float:
    """Box theta-norm of the spectrum, with theta on the m (column) side."""
    op = _operand(W)
    value, _ = theta_norm(op.padded_sigma(), p)
    return value

def spectral_ksupport_norm(W, k: int) -> float:
    """k-support norm of the singular values."""
    op = _operand(W)
    return ksupport_norm(op.padded_sigma(), k)


def cluster_norm(W, cp: ClusterParams) -> float:
    """Trace-form cluster norm, evaluated as the spectral box norm."""
    op = _operand(W)
    m = op.shape[1]
    if m < 2:
        raise InvalidParamsError(f"cluster norm needs at least 2 columns, got m={m}")
    return spectral_theta_norm(op, cp.box_params(m))


def spectral_prox(W, lam: float, params: BoxParams | KSupportParams | ClusterParams):
    """Prox of half the squared spectral norm: vector prox on the spectrum.

    Returns ``U diag(prox(sigma)) V^T``; the output's singular values are the
    vector-prox outputs.
    """
    op = _operand(W)
    m = op.shape[1]
    sig = op.padded_sigma()
    if isinstance(params, ClusterParams):
        params = params.box_params(m)
    if isinstance(params, BoxParams):
        x = prox_sq_theta(ProxRequest(w=sig, lam=lam, params=params))
    elif isinstance(params, KSupportParams):
        x = prox_sq_ksupport(ProxRequest(w=sig, lam=lam, params=params))
    else:
        raise InvalidParamsError(f"unsupported parameter type {type(params)!r}")
    r = op.sigma.size
    return (op.u * x[:r]) @ op.v.T


def prox_trace(W, lam: float):
    """Prox of ``lam * ||.||_tr``: soft-threshold the singular values."""
    if lam < 0.0:
        raise InvalidParamsError(f"lam must be non-negative, got {lam}")
    op = _operand(W)
    s = np.maximum(op.sigma - lam, 0.0)
    return (op.u * s) @ op.v.T


def prox_spectral_elastic_net(W, lam: float, mu: float):
    """Prox of ``lam * ||.||_tr + (mu/2) ||.||_F^2``: threshold then shrink."""
    if lam < 0.0 or mu < 0.0:
        raise InvalidParamsError(f"need lam >= 0 and mu >= 0, got lam={lam}, mu={mu}")
    op = _operand(W)
    s = np.maximum(op.sigma - lam, 0.0) / (1.0 + mu)
    return (op.u * s) @ op.v.T


def centering(W) -> np.ndarray:
    """Remove the column mean: ``W Pi`` with ``Pi = I - 11^T/m``. Idempotent."""
    W = np.asarray(W, dtype=float)
    if W.ndim != 2 or W.size == 0:
        raise InvalidInputError(f"expected a non-empty 2-d matrix, got shape {W.shape}")
    return W - W.mean(axis=1, keepdims=True)


def centered_cluster_norm(W, cp: ClusterParams) -> float:
    """Cluster norm of the column-centered matrix.

    Equals the minimum over z of the cluster norm of ``[w_1 - z, ...,
    w_m - z]``, attained at the column mean.
    """
    W = W.matrix if isinstance(W, SpectralOperand) else np.asarray(W, dtype=float)
    return cluster_norm(centering(W), cp)


def numerical_rank(W, rtol: float = _RANK_RTOL) -> int:
    """Count singular values above ``rtol * sigma_max`` (reporting only)."""
    op = _operand(W)
    if op.sigma.size == 0 or op.sigma[0] <= 0.0:
        return 0
    return int(np.count_nonzero(op.sigma > rtol * op.sigma[0]))
