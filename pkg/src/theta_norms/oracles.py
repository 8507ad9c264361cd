"""Brute-force oracles used to validate the closed-form norms.

These are deliberately independent of the fast code paths: the dual oracle
enumerates extreme points of the constraint set, the infimal-convolution
oracle solves the group decomposition as a second-order cone program.  Both
are guarded to small dimensions.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from .core import BoxParams, KSupportParams, _as_vector
from .errors import InvalidParamsError, TestScaleExceededError

__all__ = ["dual_norm_oracle", "infconv_oracle"]

_DUAL_MAX_DIM = 12
_INFCONV_MAX_DIM = 6


def dual_norm_oracle(u, p: BoxParams) -> float:
    """Maximize ``sum_i theta_i u_i^2`` by direct search over extreme points.

    Extreme points of ``{theta in [a, b]^d : sum theta <= c}`` put each
    coordinate at ``a`` or ``b``, except possibly one fractional coordinate
    where the budget binds.  Test-scale only (d <= 12).
    """
    u = _as_vector(u)
    d = u.size
    if d > _DUAL_MAX_DIM:
        raise TestScaleExceededError(f"dual_norm_oracle is limited to d <= {_DUAL_MAX_DIM}")
    p.validate_for_dim(d)
    a, b, c = p.a, p.b, p.c
    u2 = u * u

    masks = ((np.arange(2 ** d)[:, None] >> np.arange(d)) & 1).astype(float)
    n_up = masks.sum(axis=1)
    vertex_sum = n_up * b + (d - n_up) * a
    vertex_val = a * u2.sum() + (b - a) * (masks @ u2)

    tol = 1e-12 * max(1.0, d * b)
    feasible = vertex_sum <= c + tol
    best = float(vertex_val[feasible].max())

    # one coordinate promoted from a to the fractional value t that makes the
    # budget tight; only the largest u_j^2 off the upper block can win
    t = c - vertex_sum + a
    off_max = np.where(masks == 0.0, u2, -np.inf).max(axis=1)
    frac_ok = (t > a) & (t < b) & (n_up < d)
    if np.any(frac_ok):
        frac_val = vertex_val[frac_ok] + (t[frac_ok] - a) * off_max[frac_ok]
        best = max(best, float(frac_val.max()))
    return math.sqrt(best)


def infconv_oracle(w, params) -> float:
    """Group-decomposition value of the norm, solved numerically.

    Minimizes ``sum_g ||D_g v_g||_2`` subject to ``sum_g v_g = w`` over all
    groups ``g`` of cardinality ``k``, where ``D_g`` weights in-group
    coordinates by ``1/sqrt(b)`` and out-of-group ones by ``1/sqrt(a)``
    (support constraints in the k-support limit ``a -> 0``).  The group
    enumeration is combinatorial, so d <= 6.
    """
    import cvxpy as cp

    w = _as_vector(w)
    d = w.size
    if d > _INFCONV_MAX_DIM:
        raise TestScaleExceededError(f"infconv_oracle is limited to d <= {_INFCONV_MAX_DIM}")

    if isinstance(params, KSupportParams):
        params.validate_for_dim(d)
        k = params.k
        ksupport = True
    elif isinstance(params, BoxParams):
        params.validate_for_dim(d)
        k_float = (params.c - d * params.a) / (params.b - params.a)
        k = int(round(k_float))
        if not (1 <= k <= d) or abs(k_float - k) > 1e-9 * d:
            raise InvalidParamsError(
                "infconv_oracle needs c = (b - a) k + d a for an integer k"
            )
        ksupport = False
    else:
        raise InvalidParamsError(f"unsupported parameter type {type(params)!r}")

    groups = list(combinations(range(d), k))
    terms = []
    total = 0
    if ksupport:
        vs = [cp.Variable(k) for _ in groups]
        for g, v in zip(groups, vs):
            e = np.zeros((d, k))
            e[list(g), range(k)] = 1.0
            total = total + e @ v
            terms.append(cp.norm(v, 2))
    else:
        scale = np.full(d, 1.0 / math.sqrt(params.a))
        vs = [cp.Variable(d) for _ in groups]
        for g, v in zip(groups, vs):
            wgt = scale.copy()
            wgt[list(g)] = 1.0 / math.sqrt(params.b)
            total = total + v
            terms.append(cp.norm(cp.multiply(wgt, v), 2))
    problem = cp.Problem(cp.Minimize(cp.sum(cp.hstack(terms))), [total == w])
    problem.solve(solver=cp.CLARABEL)
    if problem.status not in ("optimal", "optimal_inaccurate"):
        raise InvalidParamsError(f"infimal convolution solve failed: {problem.status}")
    return float(problem.value)
