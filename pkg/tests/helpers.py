"""Shared test oracles: independent routes to the same quantities.

The convex-program oracles go through cvxpy (interior point), the grid
oracles through literal enumeration; neither shares code with the fast
package paths they validate.
"""

import itertools

import numpy as np

from theta_norms import BoxParams


def random_box_params(rng, d, a_lo=0.01, a_hi=0.5):
    """Feasible (a, b, c) for dimension d with the budget strictly interior."""
    a = rng.uniform(a_lo, a_hi)
    b = a + rng.uniform(0.05, 2.0)
    t = rng.uniform(0.02, 0.98)
    return BoxParams(a=a, b=b, c=d * a + t * d * (b - a))


def random_orthogonal(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


class ReducedThetaOracle:
    """min over phi in [a+lam, b+lam]^d, sum(phi) <= c + d*lam of sum w_i^2/phi_i.

    With lam = 0 this is the squared norm; with lam > 0 it is (2/lam) times
    the prox objective minimum.  Solved as a DPP-parameterized cone program,
    compiled once per dimension.
    """

    def __init__(self):
        self._cache = {}

    def _compiled(self, d):
        import cvxpy as cp

        if d not in self._cache:
            phi = cp.Variable(d)
            w2 = cp.Parameter(d, nonneg=True)
            lo = cp.Parameter()
            hi = cp.Parameter()
            budget = cp.Parameter()
            problem = cp.Problem(
                cp.Minimize(w2 @ cp.inv_pos(phi)),
                [phi >= lo, phi <= hi, cp.sum(phi) <= budget],
            )
            self._cache[d] = (problem, phi, w2, lo, hi, budget)
        return self._cache[d]

    def minimum(self, w, p, lam=0.0):
        import warnings

        import cvxpy as cp

        w = np.asarray(w, dtype=float)
        d = w.size
        problem, phi, w2, lo, hi, budget = self._compiled(d)
        w2.value = w * w
        lo.value = p.a + lam
        hi.value = p.b + lam
        budget.value = p.c + d * lam
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            problem.solve(
                solver=cp.CLARABEL,
                tol_gap_abs=1e-12,
                tol_gap_rel=1e-12,
                tol_feas=1e-12,
            )
        assert problem.status in ("optimal", "optimal_inaccurate"), problem.status
        return float(problem.value)

    def norm(self, w, p):
        return float(np.sqrt(max(self.minimum(w, p, 0.0), 0.0)))

    def prox_objective_min(self, w, p, lam):
        return 0.5 * lam * self.minimum(w, p, lam)


def grid_theta_norm(w, p, points=60, refinements=4):
    """Literal fine-grid minimization of sum w_i^2/theta_i over the box set (d <= 3)."""
    w = np.asarray(w, dtype=float)
    d = w.size
    assert d <= 3
    lo = np.full(d, p.a)
    hi = np.full(d, p.b)
    best = np.inf
    best_theta = None
    for _ in range(refinements):
        axes = [np.linspace(lo[i], hi[i], points) for i in range(d)]
        for theta in itertools.product(*axes):
            theta = np.array(theta)
            if theta.sum() > p.c + 1e-12:
                continue
            val = float(np.sum(w * w / theta))
            if val < best:
                best = val
                best_theta = theta
        span = (hi - lo) / (points - 1)
        lo = np.maximum(best_theta - 2 * span, p.a)
        hi = np.minimum(best_theta + 2 * span, p.b)
    return float(np.sqrt(best))


def cluster_oracle_2x2(W, a, b, k, n_grid=400, refinements=3):
    """Direct minimization of tr(W Sigma^-1 W^T) over Sigma = R(phi) diag(theta) R(phi)^T.

    2x2 only: theta_2 = c - theta_1 with both in [a, b]; phi and theta_1 are
    gridded and refined around the best cell.
    """
    W = np.asarray(W, dtype=float)
    c = (b - a) * k + 2 * a
    lo, hi = max(a, c - b), min(b, c - a)
    phi_lo, phi_hi = 0.0, np.pi
    best = np.inf
    best_pt = None
    for _ in range(refinements):
        phis = np.linspace(phi_lo, phi_hi, n_grid)
        th1s = np.linspace(lo, hi, n_grid)
        cos, sin = np.cos(phis), np.sin(phis)
        # columns of W R(phi): r1 = c*w1 + s*w2, r2 = -s*w1 + c*w2
        w1, w2 = W[:, 0], W[:, 1]
        q1 = (np.outer(w1, cos) + np.outer(w2, sin))
        q2 = (-np.outer(w1, sin) + np.outer(w2, cos))
        s1 = np.sum(q1 * q1, axis=0)  # ||W r1||^2 per phi
        s2 = np.sum(q2 * q2, axis=0)
        th2s = c - th1s
        vals = s1[:, None] / th1s[None, :] + s2[:, None] / th2s[None, :]
        i, j = np.unravel_index(np.argmin(vals), vals.shape)
        if vals[i, j] < best:
            best = float(vals[i, j])
            best_pt = (phis[i], th1s[j])
        dphi = (phi_hi - phi_lo) / (n_grid - 1)
        dth = (hi - lo) / (n_grid - 1)
        phi_lo, phi_hi = best_pt[0] - 2 * dphi, best_pt[0] + 2 * dphi
        lo, hi = max(max(a, c - b), best_pt[1] - 2 * dth), min(min(b, c - a), best_pt[1] + 2 * dth)
    return float(np.sqrt(best))


def cluster_oracle_3x3(W, a, b, k, n_starts=10, seed=0):
    """Direct minimization of the trace form over rotations and spectra (3x3)."""
    from scipy.optimize import minimize
    from scipy.spatial.transform import Rotation

    W = np.asarray(W, dtype=float)
    c = (b - a) * k + 3 * a

    def objective(x):
        q = Rotation.from_euler("zyx", x[:3]).as_matrix()
        th = np.array([x[3], x[4], c - x[3] - x[4]])
        wq = W @ q
        return float(np.sum(np.sum(wq * wq, axis=0) / th))

    cons = (
        {"type": "ineq", "fun": lambda x: (c - x[3] - x[4]) - a},
        {"type": "ineq", "fun": lambda x: b - (c - x[3] - x[4])},
    )
    bounds = [(-np.pi, np.pi)] * 3 + [(a, b), (a, b)]
    rng = np.random.default_rng(seed)
    best = np.inf
    for _ in range(n_starts):
        x0 = np.concatenate(
            [rng.uniform(-np.pi, np.pi, 3), rng.uniform(max(a, (c - b) / 2), min(b, c / 2), 2)]
        )
        if not (a <= c - x0[3] - x0[4] <= b):
            x0[3] = x0[4] = c / 3
        res = minimize(objective, x0, method="SLSQP", bounds=bounds, constraints=cons,
                       options={"maxiter": 300, "ftol": 1e-14})
        if res.fun < best:
            best = float(res.fun)
    return float(np.sqrt(best))


def grid_prox_objective(w, p, lam, points=40, refinements=4):
    """Literal fine-grid minimization of the reduced prox objective (d <= 3)."""
    w = np.asarray(w, dtype=float)
    d = w.size
    assert d <= 3
    lo = np.full(d, p.a)
    hi = np.full(d, p.b)
    best = np.inf
    best_theta = None
    for _ in range(refinements):
        axes = [np.linspace(lo[i], hi[i], points) for i in range(d)]
        for theta in itertools.product(*axes):
            theta = np.array(theta)
            if theta.sum() > p.c + 1e-12:
                continue
            val = 0.5 * lam * float(np.sum(w * w / (theta + lam)))
            if val < best:
                best = val
                best_theta = theta
        span = (hi - lo) / (points - 1)
        lo = np.maximum(best_theta - 2 * span, p.a)
        hi = np.minimum(best_theta + 2 * span, p.b)
    return best
