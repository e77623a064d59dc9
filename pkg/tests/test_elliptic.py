import mpmath
import numpy as np
import pytest

from ellbeta import elliptic as E
from ellbeta import rootsys as R
from ellbeta.qseries import qpoch_inf, theta


def direct_pq(z, p, q, n=80, dps=40):
    with mpmath.workdps(dps):
        out = mpmath.mpc(1)
        for j in range(n):
            for k in range(n):
                out *= 1 - mpmath.mpc(p) ** j * mpmath.mpc(q) ** k * mpmath.mpc(z)
        return complex(out)


def balanced(rng, n, total, hi=0.85, lo=0.25):
    for _ in range(1000):
        t = E.sample_params(np.full(n, np.log(hi)), np.log(abs(total)), rng)
        t = E.solve_balancing(t, total)
        if np.all(np.abs(t) >= lo) and np.all(np.abs(t) < hi + 1e-12):
            return t
    raise RuntimeError


def test_pq_poch_trivial_and_degenerate():
    assert E.pq_poch(0, 0.2, 0.3) == 1
    assert abs(E.pq_poch(0.4, 0, 0.3) - qpoch_inf(0.4, 0.3)) < 1e-15


def test_pq_poch_against_double_product():
    assert abs(E.pq_poch(0.3, 0.2, 0.35) - direct_pq(0.3, 0.2, 0.35)) < 1e-14


def test_gamma_reflection_and_difference_equations():
    rng = np.random.default_rng(0)
    p, q = 0.15, 0.2 + 0.05j
    g = lambda z: E.elliptic_gamma(z, p, q)
    for _ in range(100):
        z = np.exp(rng.uniform(-1.5, 1.5) + 1j * rng.uniform(-np.pi, np.pi))
        assert abs(g(z) * g(p * q / z) - 1) < 1e-12
        assert abs(g(q * z) / (g(z) * theta(z, p)) - 1) < 1e-12
        assert abs(g(p * z) / (g(z) * theta(z, q)) - 1) < 1e-12


def test_gamma_fixed_point():
    p, q = 0.2, 0.3
    assert abs(E.elliptic_gamma(np.sqrt(p * q), p, q) - 1) < 1e-14


def test_gamma_pole_raises():
    with pytest.raises(ZeroDivisionError):
        E.elliptic_gamma(1.0, 0.2, 0.3)


def test_e0_evaluation():
    rng = np.random.default_rng(1)
    p, q = 0.15, 0.2
    for _ in range(5):
        t = balanced(rng, 6, p * q, 0.8, 0.3)
        lhs = E.elliptic_beta_integral(0, t, p, q)
        rhs = E.e0_evaluation_rhs(t, p, q)
        assert abs(lhs - rhs) / abs(rhs) < 1e-10


def test_e0_rhs_sign_invariance():
    t = np.array([0.3, 0.4, 0.5j, 0.6, -0.7, 0.2 + 0.1j])
    assert abs(E.e0_evaluation_rhs(t, 0.1, 0.2) - E.e0_evaluation_rhs(-t, 0.1, 0.2)) < 1e-15


def test_e1_against_finer_quadrature():
    rng = np.random.default_rng(2)
    p, q = 0.15, 0.2
    t = balanced(rng, 8, (p * q) ** 2)
    a = E.elliptic_beta_integral(1, t, p, q)
    b = E.elliptic_beta_integral(1, t, p, q, n_init=4 * 64, tol=1e-15)
    assert abs(a - b) / abs(b) < 1e-10


def test_contour_and_balancing_checks():
    p, q = 0.15, 0.2
    t = np.full(6, (p * q) ** (1 / 6))
    k = 1.2 / abs(t[0])
    t[0], t[1] = t[0] * k, t[1] / k
    with pytest.raises(E.ContourError):
        E.elliptic_beta_integral(0, t, p, q)
    with pytest.raises(ValueError):
        E.elliptic_beta_integral(0, np.full(6, 0.5), p, q)
    with pytest.raises(ValueError):
        E.elliptic_beta_integral(1, np.full(6, 0.5), p, q)


def test_continued_contour_matches_evaluation():
    # moving one parameter outside the unit circle, the evaluation still holds
    p, q = 0.15, 0.2
    t = np.array([1.3 * np.exp(0.4j), 0.5, 0.45j, 0.6, 0.55, 0.5], dtype=complex)
    t = E.solve_balancing(t, p * q)
    lhs = E.elliptic_beta_integral(0, t, p, q, continued=True)
    rhs = E.e0_evaluation_rhs(t, p, q)
    assert abs(lhs - rhs) / abs(rhs) < 1e-9


def test_w_e7_invariance_transposition_and_half_root():
    rng = np.random.default_rng(3)
    p, q = 0.15, 0.2
    swap = [R.sub(R.unit(2), R.unit(5))]
    half = [R.sub(R.rho(), R.e_sum([0, 1, 2, 3]))]
    pq = p * q
    t = None
    for _ in range(200):
        t = balanced(rng, 8, pq ** 2, 0.9, 0.2)
        if np.all(np.abs(R.weyl_act_param(half, t, pq)) < 0.95):
            break
    assert E.w_e7_invariance_residual(t, swap, p, q) < 1e-10
    assert E.w_e7_invariance_residual(t, half, p, q) < 1e-8
    assert E.w_e7_invariance_residual(t, half + half, p, q) < 1e-10


def test_p_contiguous_base_triangle():
    p, q = 0.15, 0.2
    rng = np.random.default_rng(4)
    tri = (R.sub(R.unit(1), R.unit(0)), R.sub(R.unit(2), R.unit(0)), R.sub(R.unit(3), R.unit(0)))
    upper = [np.log(0.95) + min(float(x[r]) for x in tri) * abs(np.log(p)) for r in range(8)]
    t = E.solve_balancing(E.sample_params(upper, 2 * np.log(p * q), rng), (p * q) ** 2)
    assert E.p_contiguous_residual(t, tri, p, q) < 1e-8


def test_p_contiguous_rejects_non_triangle():
    tri = (R.sub(R.unit(1), R.unit(0)), R.sub(R.unit(0), R.unit(1)), R.sub(R.unit(3), R.unit(0)))
    with pytest.raises(ValueError):
        E.p_contiguous_terms(np.full(8, 0.5), tri, 0.1, 0.2)


def test_sampler_respects_bounds():
    rng = np.random.default_rng(5)
    up = np.log(np.linspace(0.5, 0.9, 8))
    t = E.sample_params(up, 2 * np.log(0.03), rng)
    assert np.all(np.log(np.abs(t)) <= up + 1e-12)
    assert abs(np.prod(t) - 0.03 ** 2) < 1e-14
    with pytest.raises(ValueError):
        E.sample_params(np.full(8, -2.0), 0.0, rng)
