"""Two-base objects: (z;p,q), the elliptic gamma function, E^m and its identities."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from itertools import combinations
from typing import Sequence

import numpy as np

from . import rootsys
from .qseries import qpoch_inf, theta
from .quadrature import N_INIT, N_MAX, circle_integral

EPS_PROD = 1e-18
POLE_TOL = 1e-14


class ContourError(ValueError):
    """Parameters do not allow the unit circle as integration contour."""


@dataclass(frozen=True)
class EllipticBase:
    p: complex
    q: complex

    def __post_init__(self):
        if not (abs(self.p) < 1 and abs(self.q) < 1):
            raise ValueError("need |p| < 1 and |q| < 1")


def _grid(p: complex, q: complex, amax: float, eps: float = EPS_PROD) -> np.ndarray:
    """All p^j q^k with |p^j q^k| * amax above eps."""
    ap, aq = abs(p), abs(q)
    out = []
    pj = 1.0 + 0j
    j = 0
    while True:
        if abs(pj) * amax < eps or (ap == 0 and j > 0):
            break
        qk = pj
        while abs(qk) * amax >= eps:
            out.append(qk)
            if aq == 0:
                break
            qk = qk * q
        pj = pj * p
        j += 1
    return np.array(out, dtype=complex)


def pq_poch(z, p, q, eps: float = EPS_PROD):
    """(z;p,q) = prod_{j,k>=0} (1 - p^j q^k z), vectorized over z."""
    z = np.asarray(z, dtype=complex)
    flat = z.reshape(-1)
    amax = float(np.max(np.abs(flat))) if flat.size else 0.0
    if amax == 0.0:
        out = np.ones_like(flat)
    else:
        g = _grid(p, q, amax, eps)
        out = np.empty_like(flat)
        chunk = max(1, 2 ** 20 // max(1, g.size))
        for s in range(0, flat.size, chunk):
            block = flat[s:s + chunk]
            out[s:s + chunk] = np.prod(1 - np.outer(block, g), axis=1)
    out = out.reshape(z.shape)
    return out[()] if out.ndim == 0 else out


def elliptic_gamma(z, p, q):
    """Gamma(z;p,q) = (pq/z;p,q)/(z;p,q)."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise ValueError("elliptic gamma needs z != 0")
    den = pq_poch(z, p, q)
    if np.any(np.abs(den) < POLE_TOL):
        raise ZeroDivisionError("elliptic gamma evaluated at a pole")
    res = pq_poch(p * q / z, p, q) / den
    return res[()] if np.ndim(res) == 0 else res


def solve_balancing(t: Sequence[complex], target: complex) -> np.ndarray:
    """Replace the last entry so that prod(t) == target."""
    t = np.array(t, dtype=complex)
    t[-1] = target / np.prod(t[:-1])
    return t


def sample_log_moduli(upper: Sequence[float], total: float, rng: np.random.Generator,
                      concentration: float = 4.0) -> np.ndarray:
    """Random logs l_r < upper_r with sum l_r == total (Dirichlet-distributed gaps)."""
    upper = np.asarray(upper, dtype=float)
    slack = float(np.sum(upper) - total)
    if slack <= 0:
        raise ValueError("no point satisfies the bounds and the balancing condition")
    gaps = rng.dirichlet(np.full(upper.size, concentration)) * slack
    return upper - gaps


def sample_params(upper_log: Sequence[float], total_log: float, rng: np.random.Generator,
                  phases: bool = True) -> np.ndarray:
    """Complex parameters with prescribed modulus bounds and product exp(total_log).

    Phases are random but sum to zero, so the product is a positive real.
    """
    lm = sample_log_moduli(upper_log, total_log, rng)
    n = lm.size
    if phases:
        ph = rng.uniform(-np.pi, np.pi, n)
        ph -= ph.mean()
    else:
        ph = np.zeros(n)
    return np.exp(lm + 1j * ph)


def _check_contour(t: np.ndarray, margin: float) -> None:
    bad = np.abs(t) >= 1 - margin
    if np.any(bad):
        raise ContourError(
            f"|t_r| >= 1 - margin for r in {np.flatnonzero(bad).tolist()}; "
            "the unit circle does not separate the pole sequences"
        )


def elliptic_beta_integral(m: int, t: Sequence[complex], p, q, *, margin: float = 0.0,
                           balance_tol: float = 1e-10, n_init: int = N_INIT,
                           n_max: int = N_MAX, tol: float = 1e-14,
                           return_info: bool = False, continued: bool = False):
    """E^m(t) for prod t = (pq)^(m+1).

    By default the contour is the unit circle and all |t_r| < 1 is required.
    With ``continued=True`` parameters outside the unit disc are allowed:
    inner-sequence poles that escaped the unit circle are picked up by
    small loops (the analytic continuation in t).
    """
    t = np.asarray(t, dtype=complex)
    if t.size != 2 * m + 6:
        raise ValueError(f"E^{m} needs {2 * m + 6} parameters, got {t.size}")
    target = (p * q) ** (m + 1)
    if abs(np.prod(t) - target) > balance_tol * abs(target):
        raise ValueError("balancing condition prod t = (pq)^(m+1) violated")
    if not continued:
        _check_contour(t, margin)
    pref = 1.0 + 0j
    for r, s in combinations(range(t.size), 2):
        pref *= pq_poch(t[r] * t[s], p, q)
    pref *= qpoch_inf(p, p) * qpoch_inf(q, q) / 2

    def integrand(z):
        args = np.concatenate([np.outer(t, z), np.outer(t, 1 / z)])
        g = elliptic_gamma(args, p, q)
        # 1/Gamma(z^{+-2}) = theta(z^-2;p) theta(z^2;q)
        return np.prod(g, axis=0) * theta(z ** -2, p) * theta(z ** 2, q)

    res = circle_integral(integrand, 1.0, n_init, n_max, tol)
    total = res.value
    if not continued:
        return (pref * total, res) if return_info else pref * total
    for pole, rad in _escaped_poles(t, p, q):
        # twice the small-circle integral: the mirrored pole inside the unit
        # circle contributes the same amount by z -> 1/z symmetry
        loop = circle_integral(lambda w, c=pole: integrand(c + w) * w / (c + w),
                               rad, n_init, n_max, tol)
        total += 2 * loop.value
    val = pref * total
    return (val, res) if return_info else val


def _escaped_poles(t: np.ndarray, p, q) -> list:
    """Inner-sequence poles t_r p^j q^k outside the unit circle, with safe loop radii."""
    inner, outer = [], []
    ap, aq = abs(p), abs(q)
    for tr in t:
        j = 0
        while abs(tr) * ap ** j >= 1e-3:
            k = 0
            while abs(tr) * ap ** j * aq ** k >= 1e-3:
                z = tr * p ** j * q ** k
                inner.append(z)
                outer.append(1 / z)
                k += 1
            j += 1
    esc = [z for z in inner if abs(z) > 1]
    if not esc:
        return []
    sing = np.array(inner + outer, dtype=complex)
    out = []
    for z in esc:
        d = np.abs(sing - z)
        others = d[d > 1e-12 * abs(z)]
        near = min(float(others.min()) if others.size else abs(z), abs(z) - 1, abs(z))
        if np.any(d <= 1e-12 * abs(z)) and np.sum(d <= 1e-12 * abs(z)) > 1:
            raise ContourError("colliding poles; the continued integral is singular here")
        if near < 1e-9 * abs(z):
            raise ContourError("pole too close to another singularity or to the unit circle")
        out.append((z, 0.4 * near))
    return out


def e0_evaluation_rhs(t: Sequence[complex], p, q) -> complex:
    """prod_{r<s} (pq/t_r t_s; p,q) for six parameters."""
    t = np.asarray(t, dtype=complex)
    if t.size != 6:
        raise ValueError("the E^0 evaluation needs six parameters")
    out = 1.0 + 0j
    for r, s in combinations(range(6), 2):
        out *= pq_poch(p * q / (t[r] * t[s]), p, q)
    return out


def w_e7_invariance_residual(t, word, p, q, **kw) -> float:
    """|E^1(t) - E^1(w t)| / |E^1(t)| for a Weyl word acting at level pq."""
    t = np.asarray(t, dtype=complex)
    wt = rootsys.weyl_act_param(word, t, p * q, m=1)
    a = elliptic_beta_integral(1, t, p, q, **kw)
    b = elliptic_beta_integral(1, wt, p, q, **kw)
    return abs(a - b) / abs(a)


# ------------------------------------------------------- p-contiguous relation

def _sqrt_roots(t: np.ndarray, level: complex) -> np.ndarray:
    """Square roots of t_j with prod sqrt(t_j) == level (fixes the sign choice)."""
    s = np.sqrt(t.astype(complex))
    if abs(np.prod(s) - level) > abs(np.prod(s) + level):
        s[0] = -s[0]
    return s


def monomial(t: np.ndarray, sq: np.ndarray, v: Sequence[Q]) -> complex:
    """t^v for v in Z^n or Z^n + rho, using the fixed square roots ``sq``."""
    out = 1.0 + 0j
    for tj, sj, vj in zip(t, sq, v):
        k = int(2 * vj)
        out *= sj ** k
    return out


def shift(t: np.ndarray, p, v: Sequence[Q]) -> np.ndarray:
    """t . p^v with p^(1/2) the principal root."""
    sp = np.sqrt(complex(p))
    return np.array([tj * sp ** int(2 * vj) for tj, vj in zip(t, v)], dtype=complex)


def is_triangle(a, b, c) -> bool:
    d = rootsys.dot
    return d(a, b) == 1 and d(a, c) == 1 and d(b, c) == 1


def p_contiguous_terms(t, tri, p, q, **kw) -> list[complex]:
    """The three summands of the p-contiguous relation for the root triangle ``tri``."""
    a, b, c = tri
    if not is_triangle(a, b, c):
        raise ValueError("roots must have pairwise inner product 1")
    t = np.asarray(t, dtype=complex)
    sq = _sqrt_roots(t, p * q)
    S = rootsys.enumerate_roots("S")
    d = rootsys.dot
    terms = []
    for x, y, zz in ((a, b, c), (b, c, a), (c, a, b)):
        xy = rootsys.sub(x, y)
        xz = rootsys.sub(x, zz)
        coef = 1.0 + 0j
        for delta in S:
            if d(delta, xy) == 1 and d(delta, xz) == 1:
                coef *= qpoch_inf(monomial(t, sq, delta) * _ppow(p, d(delta, y)), q)
        coef *= monomial(t, sq, zz) * theta(monomial(t, sq, rootsys.sub(y, zz)), q)
        terms.append(coef * elliptic_beta_integral(1, shift(t, p, x), p, q, **kw))
    return terms


def _ppow(p, k: Q) -> complex:
    return complex(np.sqrt(complex(p))) ** int(2 * k)


def p_contiguous_residual(t, tri, p, q, **kw) -> float:
    terms = p_contiguous_terms(t, tri, p, q, **kw)
    return abs(sum(terms)) / max(abs(x) for x in terms)
