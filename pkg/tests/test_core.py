import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from theta_norms import (
    BoxParams,
    InfeasibleBudgetError,
    InvalidInputError,
    InvalidParamsError,
    ksupport_norm,
    s_alpha,
    solve_alpha,
    sort_abs,
    theta_dual_norm,
    theta_norm,
)

from helpers import ReducedThetaOracle, grid_theta_norm, random_box_params

ORACLE = ReducedThetaOracle()


class TestSortAbs:
    def test_signs_and_order(self):
        sa = sort_abs([-3.0, 1.0, 2.0])
        assert np.array_equal(sa.values, [3.0, 2.0, 1.0])
        assert np.array_equal(sa.signs, [-1.0, 1.0, 1.0])

    def test_zero_vector(self):
        sa = sort_abs([0.0, 0.0])
        assert np.array_equal(sa.values, [0.0, 0.0])

    def test_stable_ties(self):
        sa = sort_abs([5.0, 5.0])
        assert np.array_equal(sa.permutation, [0, 1])

    def test_restore_roundtrip(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            w = rng.standard_normal(rng.integers(1, 30))
            sa = sort_abs(w)
            assert np.array_equal(sa.restore(sa.values), w)

    def test_nonfinite_rejected(self):
        with pytest.raises(InvalidInputError):
            sort_abs([1.0, np.nan])
        with pytest.raises(InvalidInputError):
            sort_abs([np.inf, 0.0])


class TestSAlpha:
    def test_all_clamped_low(self):
        p = BoxParams(0.1, 1.0, 1.1)
        sa = sort_abs([2.0, 1.0])
        alpha = 0.9 * (p.a / 2.0)  # below every breakpoint (a + lam)/|w_i|
        assert s_alpha(alpha, sa, p) == pytest.approx(2 * p.a)

    def test_all_clamped_high(self):
        p = BoxParams(0.1, 1.0, 1.1)
        sa = sort_abs([2.0, 1.0])
        alpha = 1.1 * (p.b / 1.0)
        assert s_alpha(alpha, sa, p) == pytest.approx(2 * p.b)

    def test_interior_value(self):
        p = BoxParams(0.1, 1.0, 2.0)
        sa = sort_abs([2.0, 1.0])
        assert s_alpha(0.4, sa, p, lam=0.0) == pytest.approx(1.2)

    def test_nondecreasing(self):
        rng = np.random.default_rng(1)
        for _ in range(30):
            d = rng.integers(1, 20)
            sa = sort_abs(rng.standard_normal(d))
            p = random_box_params(rng, d)
            lam = float(rng.choice([0.0, rng.uniform(0.01, 5.0)]))
            alphas = np.sort(rng.uniform(1e-3, 50.0, size=12))
            vals = [s_alpha(al, sa, p, lam) for al in alphas]
            assert all(v2 >= v1 - 1e-12 for v1, v2 in zip(vals, vals[1:]))


class TestSolveAlpha:
    def test_symmetric(self):
        p = BoxParams(0.5, 1.0, 1.5)
        alpha, asg = solve_alpha(sort_abs([1.0, 1.0]), p)
        assert alpha == pytest.approx(0.75)
        assert asg.theta == pytest.approx([0.75, 0.75])

    def test_interior_norm_case(self):
        p = BoxParams(0.1, 1.0, 1.1)
        alpha, asg = solve_alpha(sort_abs([2.0, 1.0]), p)
        assert alpha == pytest.approx(1.1 / 3)
        assert asg.theta == pytest.approx([2.2 / 3, 1.1 / 3])
        assert (asg.q, asg.ell) == (0, 0)

    def test_prox_case(self):
        p = BoxParams(0.1, 1.0, 1.1)
        alpha, asg = solve_alpha(sort_abs([2.0, 1.0]), p, lam=0.5)
        assert alpha == pytest.approx(0.7)
        assert asg.theta == pytest.approx([0.9, 0.2])

    def test_budget_met(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            d = int(rng.integers(1, 40))
            z = np.abs(rng.standard_normal(d)) + 1e-6
            p = random_box_params(rng, d)
            lam = float(rng.choice([0.0, rng.uniform(0.01, 5.0)]))
            _, asg = solve_alpha(sort_abs(z), p, lam=lam)
            assert asg.theta.sum() == pytest.approx(p.c, rel=1e-12)
            assert np.all(asg.theta >= p.a - 1e-15)
            assert np.all(asg.theta <= p.b + 1e-15)

    def test_flat_segments_from_ties(self):
        # many equal magnitudes create flat stretches of S(alpha)
        p = BoxParams(0.2, 1.0, 2.0)
        z = np.array([3.0, 3.0, 3.0, 1.0, 1.0])
        _, asg = solve_alpha(sort_abs(z), p)
        assert asg.theta.sum() == pytest.approx(p.c, rel=1e-12)

    def test_infeasible_budget(self):
        with pytest.raises(InfeasibleBudgetError):
            solve_alpha(sort_abs([1.0, 2.0]), BoxParams(0.1, 1.0, 2.9), lam=0.0)

    def test_rejects_zeros(self):
        with pytest.raises(InvalidInputError):
            solve_alpha(sort_abs([1.0, 0.0]), BoxParams(0.1, 1.0, 1.1))


class TestThetaNorm:
    def test_upper_bounds_bind(self):
        value, asg = theta_norm([3.0, 4.0], BoxParams(0.5, 1.0, 2.0))
        assert value == pytest.approx(5.0)
        assert asg.theta == pytest.approx([1.0, 1.0])

    def test_symmetric(self):
        value, _ = theta_norm([1.0, 1.0], BoxParams(0.5, 1.0, 1.5))
        assert value == pytest.approx(math.sqrt(8 / 3))

    def test_interior(self):
        value, asg = theta_norm([2.0, 1.0], BoxParams(0.1, 1.0, 1.1))
        assert value == pytest.approx(math.sqrt(9 / 1.1))
        assert (asg.q, asg.ell) == (0, 0)

    def test_slack_budget_uses_sqrt_b(self):
        # with theta = b across the board the objective is ||w||^2 / b
        w = np.array([3.0, 4.0])
        value, _ = theta_norm(w, BoxParams(0.25, 0.5, 1.0))
        assert value == pytest.approx(np.linalg.norm(w) / math.sqrt(0.5), rel=1e-12)

    def test_zero_vector(self):
        value, asg = theta_norm([0.0, 0.0, 0.0], BoxParams(0.1, 1.0, 1.5))
        assert value == 0.0
        assert asg.theta == pytest.approx([0.1, 0.1, 0.1])

    def test_zero_components_reduction(self):
        # zeros take theta = a and free up budget for the rest
        rng = np.random.default_rng(3)
        for _ in range(50):
            d = int(rng.integers(3, 12))
            w = rng.standard_normal(d)
            w[rng.integers(0, d)] = 0.0
            p = random_box_params(rng, d)
            value, asg = theta_norm(w, p)
            direct = math.sqrt(np.sum(w[w != 0] ** 2 / asg.theta[w != 0]))
            assert value == pytest.approx(direct, rel=1e-11)
            assert np.all(asg.theta[w == 0.0] == p.a)

    def test_infeasible_params(self):
        with pytest.raises(InvalidParamsError):
            theta_norm([1.0, 2.0], BoxParams(0.5, 1.0, 5.0))
        with pytest.raises(InvalidParamsError):
            theta_norm([1.0, 2.0], BoxParams(0.5, 1.0, 0.6))

    def test_two_method_agreement(self):
        # closed form vs direct substitution of the assignment from solve_alpha
        rng = np.random.default_rng(4)
        for _ in range(200):
            d = int(rng.integers(1, 30))
            w = rng.standard_normal(d) * rng.choice([0.1, 1.0, 10.0])
            p = random_box_params(rng, d)
            value, asg = theta_norm(w, p)
            direct = math.sqrt(float(np.sum(w * w / asg.theta)))
            assert value == pytest.approx(direct, rel=1e-12)

    def test_certificate_chains(self):
        rng = np.random.default_rng(5)
        checked = 0
        for _ in range(200):
            d = int(rng.integers(2, 15))
            w = rng.standard_normal(d)
            p = random_box_params(rng, d)
            _, asg = theta_norm(w, p)
            q, ell = asg.q, asg.ell
            if q + ell >= d:
                continue
            z = np.sort(np.abs(w))[::-1]
            p_val = p.c - q * p.b - ell * p.a
            ratio = float(z[q : d - ell].sum()) / p_val
            eps = 1e-9 * max(1.0, ratio)
            left_q = z[q - 1] / p.b if q >= 1 else math.inf
            right_q = z[q] / p.b
            assert left_q >= ratio - eps and ratio >= right_q - eps
            left_l = z[d - ell - 1] / p.a
            right_l = z[d - ell] / p.a if ell >= 1 else 0.0
            assert left_l >= ratio - eps and ratio >= right_l - eps
            checked += 1
        assert checked > 50

    def test_ordering_follows_magnitudes(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            d = int(rng.integers(2, 20))
            w = rng.standard_normal(d)
            p = random_box_params(rng, d)
            _, asg = theta_norm(w, p)
            order = np.argsort(-np.abs(w), kind="stable")
            th = asg.theta[order]
            assert np.all(th[:-1] >= th[1:] - 1e-12)

    def test_grid_oracle_small_d(self):
        rng = np.random.default_rng(7)
        for _ in range(8):
            d = int(rng.integers(1, 4))
            w = rng.standard_normal(d)
            p = random_box_params(rng, d)
            value, _ = theta_norm(w, p)
            assert value == pytest.approx(grid_theta_norm(w, p), rel=1e-5)

    def test_convex_program_oracle(self):
        rng = np.random.default_rng(8)
        for _ in range(25):
            d = int(rng.integers(1, 13))
            w = rng.standard_normal(d)
            p = random_box_params(rng, d)
            value, _ = theta_norm(w, p)
            assert value == pytest.approx(ORACLE.norm(w, p), rel=1e-7)


class TestDualNorm:
    def test_zero(self):
        assert theta_dual_norm([0.0, 0.0], BoxParams(0.5, 1.0, 1.5)) == 0.0

    def test_unit_vector(self):
        assert theta_dual_norm([1.0, 0.0], BoxParams(0.5, 1.0, 1.5)) == pytest.approx(1.0)

    def test_two_ones(self):
        assert theta_dual_norm([1.0, 1.0], BoxParams(0.5, 1.0, 1.5)) == pytest.approx(
            math.sqrt(1.5)
        )

    def test_fractional_rho(self):
        # rho = 1, k = 1 at these parameters
        val = theta_dual_norm([1.0, 1.0, 1.0], BoxParams(0.1, 1.0, 1.2))
        assert val == pytest.approx(math.sqrt(1.2))

    def test_cauchy_schwarz_and_equality_pair(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            d = int(rng.integers(1, 15))
            w = rng.standard_normal(d)
            u = rng.standard_normal(d)
            p = random_box_params(rng, d)
            nw, asg = theta_norm(w, p)
            nu = theta_dual_norm(u, p)
            assert abs(float(w @ u)) <= nw * nu * (1 + 1e-10) + 1e-12
            if nw > 1e-9:
                u_star = w / asg.theta
                lhs = float(w @ u_star)
                rhs = nw * theta_dual_norm(u_star, p)
                assert lhs == pytest.approx(rhs, rel=1e-8)


class TestKSupport:
    def test_k1_is_l1(self):
        rng = np.random.default_rng(10)
        for _ in range(50):
            w = rng.standard_normal(int(rng.integers(1, 40)))
            assert ksupport_norm(w, 1) == pytest.approx(np.abs(w).sum(), rel=1e-12)

    def test_kd_is_l2(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            w = rng.standard_normal(int(rng.integers(1, 40)))
            assert ksupport_norm(w, w.size) == pytest.approx(
                np.linalg.norm(w), rel=1e-12
            )

    def test_three_two_one(self):
        assert ksupport_norm([3.0, 2.0, 1.0], 2) == pytest.approx(math.sqrt(18))

    def test_sparse_support(self):
        assert ksupport_norm([5.0, 0.0, 0.0], 2) == pytest.approx(5.0)

    def test_k_out_of_range(self):
        with pytest.raises(InvalidParamsError):
            ksupport_norm([1.0, 2.0], 0)
        with pytest.raises(InvalidParamsError):
            ksupport_norm([1.0, 2.0], 3)

    def test_box_limit_matches(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            d = int(rng.integers(2, 25))
            w = rng.standard_normal(d)
            k = int(rng.integers(1, d + 1))
            box, _ = theta_norm(w, BoxParams(1e-8, 1.0, float(k)))
            assert box == pytest.approx(ksupport_norm(w, k), rel=1e-4)

    def test_c_equal_db_matches_l2_over_sqrt_b(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            d = int(rng.integers(1, 20))
            w = rng.standard_normal(d)
            b = float(rng.uniform(0.3, 2.0))
            value, _ = theta_norm(w, BoxParams(b / 10, b, d * b))
            assert value == pytest.approx(np.linalg.norm(w) / math.sqrt(b), rel=1e-12)


# ---------------------------------------------------------------------------
# hypothesis property tests

# components are zero or bounded away from the underflow regime
finite_vectors = st.lists(
    st.one_of(st.just(0.0), st.floats(1e-6, 1e3), st.floats(-1e3, -1e-6)),
    min_size=1,
    max_size=16,
)


@st.composite
def vector_and_params(draw):
    w = np.array(draw(finite_vectors))
    d = w.size
    a = draw(st.floats(0.01, 0.5))
    b = a + draw(st.floats(0.05, 2.0))
    t = draw(st.floats(0.02, 0.98))
    return w, BoxParams(a=a, b=b, c=d * a + t * d * (b - a))


@settings(max_examples=80, deadline=None)
@given(vector_and_params())
def test_norm_zero_iff_zero(wp):
    w, p = wp
    value, _ = theta_norm(w, p)
    if np.any(w != 0.0):
        assert value > 0.0
    else:
        assert value == 0.0


@settings(max_examples=80, deadline=None)
@given(vector_and_params(), st.floats(-100, 100))
def test_norm_homogeneity(wp, t):
    w, p = wp
    base, _ = theta_norm(w, p)
    scaled, _ = theta_norm(t * w, p)
    assert scaled == pytest.approx(abs(t) * base, rel=1e-10, abs=1e-12)


@settings(max_examples=80, deadline=None)
@given(vector_and_params(), st.integers(0, 2**31 - 1))
def test_norm_triangle_inequality(wp, seed):
    u, p = wp
    v = np.random.default_rng(seed).standard_normal(u.size)
    nu, _ = theta_norm(u, p)
    nv, _ = theta_norm(v, p)
    nuv, _ = theta_norm(u + v, p)
    assert nuv <= nu + nv + 1e-10


@settings(max_examples=80, deadline=None)
@given(vector_and_params(), st.integers(0, 2**31 - 1))
def test_sign_and_permutation_invariance(wp, seed):
    w, p = wp
    rng = np.random.default_rng(seed)
    perm = rng.permutation(w.size)
    signs = rng.choice([-1.0, 1.0], size=w.size)
    base, _ = theta_norm(w, p)
    transformed, _ = theta_norm(signs * w[perm], p)
    assert transformed == base  # exact: the algorithm sorts magnitudes
