"""Proximity operators of the squared box theta-norm and squared k-support norm.

``prox_{(lam/2) ||.||^2}(w)`` has the closed form ``x_i = theta_i w_i /
(theta_i + lam)`` where ``theta_i = clamp(alpha |w_i| - lam, [a, b])`` and
``alpha`` solves the budget equation — the same O(d log d) root finding that
evaluates the norm, with shifted breakpoints.  The prior-art k-support
routine (a scan over boundary-pair candidates, O(d (k + log d))) is kept as a
benchmark baseline and cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import BoxParams, KSupportParams, _as_vector, _solve_alpha_raw, sort_abs
from .errors import InvalidParamsError

__all__ = [
    "ProxRequest",
    "prox_sq_theta",
    "prox_sq_ksupport",
    "prox_sq_ksupport_baseline",
]


@dataclass(frozen=True)
class ProxRequest:
    """Prox point, regularization scale, and norm parameters.

    The operator applied is the prox of ``(lam/2) * norm(.)^2``.
    """

    w: np.ndarray
    lam: float
    params: BoxParams | KSupportParams

    def __post_init__(self):
        if self.lam <= 0.0:
            raise InvalidParamsError(f"lam must be positive, got {self.lam}")
        object.__setattr__(self, "w", _as_vector(self.w))


def _prox_from_box(w, lam, a, b, c):
    """Shared clamp-and-scale path; a = 0 is legal because division is by theta + lam."""
    sa = sort_abs(w)
    z = sa.values
    d = z.size
    nnz = int(np.count_nonzero(z))
    # zero components output 0 regardless of theta; park them at the floor and
    # free the corresponding budget
    c_red = c - (d - nnz) * a
    if nnz == 0:
        return np.zeros(d)
    theta = np.zeros(nnz)
    if c_red >= nnz * b - 1e-9 * max(1.0, nnz * b):
        theta[:] = b
    else:
        _, theta, _, _ = _solve_alpha_raw(z[:nnz], a, b, c_red, lam)
    x_sorted = np.zeros(d)
    x_sorted[:nnz] = theta * z[:nnz] / (theta + lam)
    return sa.restore(x_sorted)


def prox_sq_theta(req: ProxRequest) -> np.ndarray:
    """Prox of half the squared box theta-norm, scaled by ``req.lam``. O(d log d)."""
    p = req.params
    if not isinstance(p, BoxParams):
        raise InvalidParamsError("prox_sq_theta expects BoxParams")
    p.validate_for_dim(req.w.size)
    return _prox_from_box(req.w, req.lam, p.a, p.b, p.c)


def prox_sq_ksupport(req: ProxRequest) -> np.ndarray:
    """Prox of half the squared k-support norm, scaled by ``req.lam``.

    The box limit a = 0, b = 1, c = k; components with theta = 0 are zeroed
    exactly. O(d log d).
    """
    p = req.params
    if not isinstance(p, KSupportParams):
        raise InvalidParamsError("prox_sq_ksupport expects KSupportParams")
    p.validate_for_dim(req.w.size)
    return _prox_from_box(req.w, req.lam, 0.0, 1.0, float(p.k))


def prox_sq_ksupport_baseline(req: ProxRequest) -> np.ndarray:
    """Prior-art k-support prox: scan boundary-pair candidates (r, l).

    With magnitudes ``z`` sorted non-increasing, the solution has ``r``
    leading components shrunk by ``1/(1+lam)``, a middle block soft-thresholded
    by ``lam/alpha`` with ``alpha = (k - r + (l - r) lam) / sum_{r<i<=l} z_i``,
    and zeros beyond ``l``.  The scan over ``l in {k..d}`` and ``r in
    {0..k-1}`` with prefix sums costs O(d (k + log d)).  Kept only for the
    benchmark and as a cross-check of :func:`prox_sq_ksupport`.
    """
    p = req.params
    if not isinstance(p, KSupportParams):
        raise InvalidParamsError("prox_sq_ksupport_baseline expects KSupportParams")
    d = req.w.size
    p.validate_for_dim(d)
    k = p.k
    lam = req.lam

    sa = sort_abs(req.w)
    z = sa.values
    eps = 1e-12 * max(1.0, float(z[0]))

    # empty-middle candidate: top k shrunk, rest zero (always valid at k = d)
    z_next = z[k] if k < d else 0.0
    if (1.0 + lam) * z_next <= lam * z[k - 1] + eps:
        x = np.zeros(d)
        x[:k] = z[:k] / (1.0 + lam)
        return sa.restore(x)

    prefix = np.concatenate(([0.0], np.cumsum(z)))  # prefix[i] = z_0 + ... + z_{i-1}
    zs = z.tolist()
    for l in range(k, d + 1):
        z_out = zs[l] if l < d else 0.0
        for r in range(0, k):
            T = prefix[l] - prefix[r]
            if T <= 0.0:
                continue
            alpha = (k - r + (l - r) * lam) / T
            if r >= 1 and zs[r - 1] * alpha < 1.0 + lam - eps:
                continue
            if zs[r] * alpha >= 1.0 + lam + eps:
                continue
            if zs[l - 1] * alpha <= lam - eps:
                continue
            if z_out * alpha > lam + eps:
                continue
            x = np.zeros(d)
            x[:r] = z[:r] / (1.0 + lam)
            x[r:l] = z[r:l] - lam / alpha
            return sa.restore(x)
    raise InvalidParamsError("baseline prox scan found no valid boundary pair")
