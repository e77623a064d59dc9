from fractions import Fraction as Q
from itertools import product

import numpy as np
import pytest

from ellbeta import rootsys as R

H = Q(1, 2)


def brute_force(system):
    # norm-2 vectors of Z^8 have entries in {-1,0,1}; those of Z^8+rho are all +-1/2
    out = []
    for v in product((-1, 0, 1), repeat=8):
        if sum(x * x for x in v) == 2 and sum(v) % 2 == 0:
            out.append(tuple(Q(x) for x in v))
    for v in product((-H, H), repeat=8):
        if sum(v) % 2 == 0:
            out.append(v)
    if system == "E7":
        return {v for v in out if R.dot(v, R.rho()) == 0}
    if system == "S":
        return {v for v in out if R.dot(v, R.rho()) == 1}
    return set(out)


@pytest.mark.parametrize("system,count", [("E8", 240), ("E7", 126), ("S", 56)])
def test_root_counts(system, count):
    roots = R.enumerate_roots(system)
    assert len(roots) == count
    assert all(R.dot(r, r) == 2 for r in roots)


@pytest.mark.parametrize("system", ["E7", "S"])
def test_enumeration_matches_independent_filter(system):
    # E7 and S do not depend on the parity convention for E8
    assert set(R.enumerate_roots(system)) == brute_force(system)


def test_reflection_examples():
    e0, e1 = R.unit(0), R.unit(1)
    assert R.reflect(R.sub(e0, e1), e0) == e1
    a = R.sub(R.rho(), R.e_sum([0, 1, 2, 3]))
    v = (Q(1), Q(0), Q(0), Q(0), Q(0), Q(0), Q(0), Q(0))
    w = R.reflect(a, v)
    # a.e0 = -1/2, so s_a(e0) = e0 + a/2
    assert w == tuple(x + H * y for x, y in zip(v, a))
    assert R.dot(w, w) == R.dot(v, v)
    assert R.reflect(a, w) == v


def test_reflection_fixes_orthogonal_vectors():
    a = R.sub(R.unit(2), R.unit(5))
    v = R.e_sum([0, 1])
    assert R.reflect(a, v) == v


def test_reflection_rejects_non_root():
    with pytest.raises(ValueError):
        R.reflect(R.e_sum([0, 1, 2]), R.unit(0))


def test_param_action_transposition():
    u = np.exp(np.arange(8) * 0.1 + 0.3j)
    u = u * (0.3 ** 2 / np.prod(u)) ** (1 / 8)
    w = R.weyl_act_param([R.sub(R.unit(3), R.unit(4))], u, 0.3, canonical=False)
    expect = u.copy()
    expect[[3, 4]] = u[[4, 3]]
    assert np.allclose(w, expect)


def test_param_action_half_root_matches_explicit_formula():
    q = 0.3
    rng = np.random.default_rng(1)
    u = 0.6 * np.exp(1j * rng.uniform(-1, 1, 8))
    u[-1] = q ** 2 / np.prod(u[:-1])
    a = R.sub(R.rho(), R.e_sum([0, 3, 4, 7]))
    w = R.weyl_act_param([a], u, q, canonical=False)
    s = np.sqrt(u[0] * u[3] * u[4] * u[7] / q)
    expect = np.array([u[0] / s, u[1] * s, u[2] * s, u[3] / s, u[4] / s, u[5] * s, u[6] * s, u[7] / s])
    assert R.same_up_to_sign(w, expect)
    assert abs(np.prod(w) - q ** 2) < 1e-12


def test_param_action_involution():
    q = 0.25
    u = 0.5 * np.exp(1j * np.linspace(-1, 1, 8))
    u[-1] = q ** 2 / np.prod(u[:-1])
    a = R.sub(R.rho(), R.e_sum([1, 2, 5, 6]))
    w = R.weyl_act_param([a, a], u, q)
    assert R.same_up_to_sign(w, u)


def test_param_action_needs_balancing():
    with pytest.raises(ValueError):
        R.weyl_act_param([R.sub(R.unit(0), R.unit(1))], np.full(8, 0.5), 0.3)


def test_stabilizer_examples():
    assert R.stabilizer_roots(R.enumerate_roots("S")) == ()
    v67 = R.e_sum([6, 7])
    brute = [a for a in R.enumerate_roots("E7") if R.dot(a, v67) == 0]
    assert len(R.stabilizer_roots([v67])) == len(brute)


@pytest.mark.parametrize("type_string,order", [("1", 1), ("A2xA1", 12), ("A3xA1", 48),
                                               ("D5", 1920), ("E6", 51840), ("E7", 2903040)])
def test_weyl_orders(type_string, order):
    assert R.weyl_order(type_string) == order


def test_coxeter_type_of_full_e7():
    assert R.coxeter_type(R.enumerate_roots("E7")) == "E7"
    assert R.coxeter_type(()) == "1"


def test_coxeter_type_of_permutation_subsystems():
    # roots e_i - e_j inside a block of k+1 coordinates form A_k
    roots = [R.sub(R.unit(i), R.unit(j)) for i in range(4) for j in range(4) if i != j]
    assert R.coxeter_type(roots) == "A3"
    roots += [R.sub(R.unit(6), R.unit(7)), R.sub(R.unit(7), R.unit(6))]
    assert R.coxeter_type(roots) == "A3xA1"


def test_positive_roots_are_half_of_e7():
    pos = R.positive_e7_roots()
    assert len(pos) == 63
    assert {R.neg(a) for a in pos}.isdisjoint(pos)
