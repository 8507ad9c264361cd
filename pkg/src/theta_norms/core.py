"""Box theta-norm family on vectors.

The primal norm is ``||w|| = sqrt(min_theta sum_i w_i^2 / theta_i)`` where
theta ranges over the box-with-budget set ``{a <= theta_i <= b,
sum_i theta_i <= c}``.  The minimizer has a water-filling structure
``theta_i = clamp(alpha * |w_i| - lam, [a, b])`` whose scalar multiplier
``alpha`` is pinned by the budget function ``S(alpha) = sum_i theta_i(alpha)``,
a non-decreasing piecewise-linear function with at most ``2d`` breakpoints.
Root finding on ``S`` costs O(d log d) and is shared between norm evaluation
(``lam = 0``) and the proximity operator (``lam > 0``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleBudgetError, InvalidInputError, InvalidParamsError

__all__ = [
    "BoxParams",
    "KSupportParams",
    "SortedAbs",
    "ThetaAssignment",
    "sort_abs",
    "s_alpha",
    "solve_alpha",
    "theta_norm",
    "theta_dual_norm",
    "ksupport_norm",
]

# Relative slack used when testing the budget against its attainable range.
_FEAS_RTOL = 1e-9


@dataclass(frozen=True)
class BoxParams:
    """Parameters (a, b, c) of the box constraint set.

    ``a`` and ``b`` bound each component, ``c`` bounds the sum.  Feasibility
    of ``c`` depends on the dimension, so it is checked at call sites via
    :meth:`validate_for_dim`.
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and math.isfinite(self.c)):
            raise InvalidParamsError("box parameters must be finite")
        if not 0.0 < self.a < self.b:
            raise InvalidParamsError(f"need 0 < a < b, got a={self.a}, b={self.b}")
        if self.c <= 0.0:
            raise InvalidParamsError(f"budget c must be positive, got c={self.c}")

    def validate_for_dim(self, d: int) -> None:
        lo, hi = d * self.a, d * self.b
        tol = _FEAS_RTOL * max(1.0, hi)
        if not (lo - tol <= self.c <= hi + tol):
            raise InvalidParamsError(
                f"budget c={self.c} outside feasible range [{lo}, {hi}] for d={d}"
            )

    def rho(self, d: int) -> float:
        """Effective number of components above the floor, in [0, d]."""
        self.validate_for_dim(d)
        r = (self.c - d * self.a) / (self.b - self.a)
        return min(max(r, 0.0), float(d))


@dataclass(frozen=True)
class KSupportParams:
    """Cardinality parameter of the k-support norm (box limit a -> 0, b = 1, c = k)."""

    k: int

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise InvalidParamsError(f"k must be a positive integer, got {self.k}")

    def validate_for_dim(self, d: int) -> None:
        if not 1 <= self.k <= d:
            raise InvalidParamsError(f"k={self.k} out of range for dimension d={d}")


@dataclass(frozen=True)
class SortedAbs:
    """A vector rearranged so its magnitudes are non-increasing.

    ``values[i] == |w[permutation[i]]|`` and ``signs[i]`` carries the original
    sign, so :meth:`restore` maps any vector defined on the sorted slots back
    to the original order.  Ties keep original index order (stable sort).
    """

    values: np.ndarray
    permutation: np.ndarray
    signs: np.ndarray

    def restore(self, sorted_values: np.ndarray) -> np.ndarray:
        out = np.empty_like(np.asarray(sorted_values, dtype=float))
        out[self.permutation] = self.signs * sorted_values
        return out


@dataclass(frozen=True)
class ThetaAssignment:
    """Optimal theta vector with its certificate.

    ``theta`` is aligned with the vector the operation received (so it is
    non-increasing whenever the input magnitudes were).  ``q`` counts the
    components clamped at ``b``, ``ell`` those clamped at ``a``, and ``alpha``
    is the water-filling multiplier (reciprocal square root of the Lagrange
    multiplier of the budget constraint).
    """

    theta: np.ndarray
    q: int
    ell: int
    alpha: float


def _as_vector(w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise InvalidInputError(f"expected a non-empty 1-d vector, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise InvalidInputError("vector contains non-finite entries")
    return w


def sort_abs(w) -> SortedAbs:
    """Sort a vector by absolute value, non-increasing, with a stable tie order."""
    w = _as_vector(w)
    perm = np.argsort(-np.abs(w), kind="stable")
    return SortedAbs(values=np.abs(w[perm]), permutation=perm, signs=np.sign(w[perm]))


def s_alpha(alpha: float, absw: SortedAbs, p: BoxParams, lam: float = 0.0) -> float:
    """Budget function S(alpha) = sum_i clamp(alpha*|w_i| - lam, [a, b]).

    ``lam = 0`` is the norm case, ``lam > 0`` the prox case.  Non-decreasing
    in ``alpha``.
    """
    if alpha <= 0.0:
        raise InvalidInputError(f"alpha must be positive, got {alpha}")
    if lam < 0.0:
        raise InvalidInputError(f"lam must be non-negative, got {lam}")
    return float(np.clip(alpha * absw.values - lam, p.a, p.b).sum())


def _solve_alpha_raw(z, a, b, c, lam):
    """Water-filling root finder on sorted positive magnitudes.

    Sorts the 2n breakpoints, accumulates S at every breakpoint with one
    event scan, binary-searches the bracketing pair, and interpolates; two
    direct evaluations of S pin the bracket against accumulation rounding.
    Returns ``(alpha, theta, q, ell)`` with ``sum(theta) = c`` up to rounding.
    ``a = 0`` is allowed when ``lam > 0`` (k-support prox mode).  Assumes
    ``n*a <= c <= n*b`` up to the caller's tolerance.
    """
    n = z.size
    tol = _FEAS_RTOL * max(1.0, abs(c))
    breakpoints = np.sort(np.concatenate(((a + lam) / z, (b + lam) / z)))

    if c <= n * a + tol:
        return breakpoints[0], np.full(n, float(a)), 0, n
    if c >= n * b - tol:
        return breakpoints[-1], np.full(n, float(b)), n, 0

    # z is sorted non-increasing, so at any alpha the capped/interior/floored
    # components form contiguous index ranges; with prefix sums each S probe
    # costs two O(log n) searches instead of an O(n) pass
    z_asc = z[::-1]
    z_cum = np.concatenate(([0.0], np.cumsum(z)))

    def s_of(alpha):
        cap = n - int(np.searchsorted(z_asc, (b + lam) / alpha, side="left"))
        grown = n - int(np.searchsorted(z_asc, (a + lam) / alpha, side="right"))
        mid = z_cum[grown] - z_cum[cap]
        return b * cap + alpha * mid - lam * (grown - cap) + a * (n - grown)

    lo, hi = 0, 2 * n - 1
    # largest breakpoint index with S <= c; S(bp[0]) = n*a < c <= n*b = S(bp[-1])
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if s_of(breakpoints[mid]) <= c:
            lo = mid
        else:
            hi = mid
    s_lo = s_of(breakpoints[lo])
    s_hi = s_of(breakpoints[hi])
    if s_hi <= s_lo or s_lo >= c:
        # flat segment (ties in |w|): any alpha in the bracket yields the same
        # theta after clamping; take the left endpoint
        alpha = breakpoints[lo]
    else:
        alpha = breakpoints[lo] + (c - s_lo) * (breakpoints[hi] - breakpoints[lo]) / (s_hi - s_lo)

    raw = alpha * z - lam
    theta = np.clip(raw, a, b)
    q = int(np.count_nonzero(raw >= b))
    ell = int(np.count_nonzero(raw <= a))
    return float(alpha), theta, q, ell


def solve_alpha(absw: SortedAbs, p: BoxParams, lam: float = 0.0) -> tuple[float, ThetaAssignment]:
    """Find alpha with S(alpha) = c and the corresponding theta assignment.

    Cost is O(d log d): sort the 2d breakpoints ``(a+lam)/|w_i|`` and
    ``(b+lam)/|w_i|``, binary-search the bracketing pair, interpolate
    linearly.  All magnitudes must be strictly positive (zero components are
    stripped by callers, which assign them theta = a and reduce the budget).
    """
    if lam < 0.0:
        raise InvalidInputError(f"lam must be non-negative, got {lam}")
    z = absw.values
    n = z.size
    if n == 0 or z[-1] <= 0.0:
        raise InvalidInputError("solve_alpha requires strictly positive magnitudes")
    tol = _FEAS_RTOL * max(1.0, n * p.b)
    if not (n * p.a - tol <= p.c <= n * p.b + tol):
        raise InfeasibleBudgetError(
            f"budget c={p.c} outside [{n * p.a}, {n * p.b}] for {n} components"
        )
    alpha, theta, q, ell = _solve_alpha_raw(z, p.a, p.b, p.c, lam)
    return alpha, ThetaAssignment(theta=theta, q=q, ell=ell, alpha=alpha)


def _closed_form_value(z, q, ell, a, b, c):
    """Norm value from the (q, ell) partition of the sorted magnitudes.

    ``value^2 = ||w_Q||^2 / b + ||w_I||_1^2 / p + ||w_L||^2 / a`` with
    ``p = c - q*b - ell*a`` (the middle term is skipped when the interior
    block is empty).
    """
    d = z.size
    val_sq = float(z[:q] @ z[:q]) / b
    if ell > 0:
        tail = z[d - ell:]
        val_sq += float(tail @ tail) / a
    if q + ell < d:
        p_val = c - q * b - ell * a
        l1 = float(z[q:d - ell].sum())
        val_sq += l1 * l1 / p_val
    return math.sqrt(val_sq)


def theta_norm(w, p: BoxParams) -> tuple[float, ThetaAssignment]:
    """Evaluate the box theta-norm and return the optimal theta assignment.

    Zero components receive ``theta = a`` and the remaining problem is solved
    with the budget reduced by ``a`` per zero; if the reduced budget already
    exceeds what the nonzero block can absorb, those components clamp at
    ``b``.  O(d log d).
    """
    w = _as_vector(w)
    d = w.size
    p.validate_for_dim(d)
    sa = sort_abs(w)
    z = sa.values
    nnz = int(np.count_nonzero(z))

    theta_sorted = np.full(d, p.a)
    if nnz == 0:
        return 0.0, ThetaAssignment(theta=theta_sorted, q=0, ell=d, alpha=1.0)

    c_red = p.c - (d - nnz) * p.a
    slack_tol = _FEAS_RTOL * max(1.0, nnz * p.b)
    if c_red >= nnz * p.b - slack_tol:
        # budget slack: every nonzero component sits at the upper bound
        theta_sorted[:nnz] = p.b
        q, ell = nnz, d - nnz
        alpha = float((p.b) / z[nnz - 1])
    else:
        alpha, theta_nz, q, ell_nz = _solve_alpha_raw(z[:nnz], p.a, p.b, c_red, 0.0)
        theta_sorted[:nnz] = theta_nz
        ell = ell_nz + (d - nnz)

    value = _closed_form_value(z, q, ell, p.a, p.b, p.c)
    theta = np.empty(d)
    theta[sa.permutation] = theta_sorted
    return value, ThetaAssignment(theta=theta, q=q, ell=ell, alpha=alpha)


def theta_dual_norm(u, p: BoxParams) -> float:
    """Dual norm: sqrt of the maximum of ``sum_i theta_i u_i^2`` over the box set.

    Closed form ``a ||u||^2 + (b - a) [sum_{j<=k} (|u|_j^down)^2
    + (rho - k) (|u|_{k+1}^down)^2]`` with ``rho = (c - d a)/(b - a)`` and
    ``k = floor(rho)``.
    """
    u = _as_vector(u)
    d = u.size
    rho = p.rho(d)
    k = int(math.floor(rho))
    frac = rho - k
    z2 = np.sort(np.abs(u))[::-1] ** 2
    val_sq = p.a * float(z2.sum()) + (p.b - p.a) * float(z2[:k].sum())
    if k < d and frac > 0.0:
        val_sq += (p.b - p.a) * frac * float(z2[k])
    return math.sqrt(val_sq)


def ksupport_norm(w, k: int) -> float:
    """k-support norm: exact l1 at k = 1 and exact l2 at k = d.

    Uses the partition characterization: with magnitudes ``z`` sorted
    non-increasing, find the unique ``q`` in ``{0, ..., k-1}`` with
    ``z_q >= (1/(k-q)) sum_{j>q} z_j > z_{q+1}``, then
    ``value^2 = sum_{j<=q} z_j^2 + (sum_{j>q} z_j)^2 / (k - q)``.
    """
    w = _as_vector(w)
    d = w.size
    KSupportParams(k=k).validate_for_dim(d)
    z = np.sort(np.abs(w))[::-1]
    # suffix sums: tail[q] = sum_{j >= q} z_j (0-based)
    tail = np.concatenate((np.cumsum(z[::-1])[::-1], [0.0]))

    def value_at(q):
        head_sq = float(z[:q] @ z[:q])
        return math.sqrt(head_sq + tail[q] ** 2 / (k - q))

    chosen = None
    for q in range(k):
        t = tail[q] / (k - q)
        left = z[q - 1] if q >= 1 else math.inf
        if left >= t > z[q]:
            chosen = q
            break
    if chosen is None:
        for q in range(k):
            t = tail[q] / (k - q)
            left = z[q - 1] if q >= 1 else math.inf
            if left >= t >= z[q]:
                chosen = q
                break
    if chosen is None:  # float knife-edge; the last candidate is the clamp limit
        chosen = k - 1
    return value_at(chosen)
