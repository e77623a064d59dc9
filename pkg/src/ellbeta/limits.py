"""p -> 0 limits of E^m(u p^alpha): face dispatch, explicit evaluation, numerical checks.

Coordinates are first permuted so that alpha is sorted ascending (ties by
index); the permutation is stored in ``LimitFormula.sigma`` and applied to
u before any formula is evaluated.  Roles are therefore always expressed
with the smallest coordinate in position 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Q
from itertools import combinations
from typing import Sequence

import numpy as np

from . import polytope as P
from . import rootsys as R
from .elliptic import ContourError, elliptic_beta_integral
from .qseries import SeriesParams, VWPParams, phi_series, qpoch_inf, theta
from .quadrature import circle_integral

HALF = Q(1, 2)
QUAD_TOL = 1e-13

VARIANTS = ("TrivialIntegral", "SymBroken3", "SymBroken2", "SymBroken1", "SumIntegralW",
            "PairedVWP", "SingleVWP", "PairedPhi", "SinglePhi", "ProductOnly", "One")


class ConstraintError(ValueError):
    """Runtime condition of a limit formula fails for the given parameters."""


@dataclass(frozen=True)
class LimitFormula:
    variant: str
    sigma: tuple                 # role k <- coordinate sigma[k]
    alpha: tuple                 # alpha permuted into role order
    m: int
    roles: dict = field(default_factory=dict, compare=False, hash=False)
    constraints: tuple = ()
    tag: str = ""

    def permute(self, u: Sequence[complex]) -> np.ndarray:
        u = np.asarray(u, dtype=complex)
        return u[list(self.sigma)]


# ---------------------------------------------------------------- helpers

def _ones_in_span(vectors: Sequence[Sequence[int]], n: int) -> bool:
    """Whether (1,...,1) is a rational combination of the given exponent vectors."""
    M = np.array([list(v) for v in vectors] or [[0] * n], dtype=float)
    r1 = np.linalg.matrix_rank(M)
    r2 = np.linalg.matrix_rank(np.vstack([M, np.ones(n)]))
    return r1 == r2


def _ev(n: int, plus=(), minus=(), twice=()) -> tuple:
    v = [0] * n
    for i in plus:
        v[i] += 1
    for i in minus:
        v[i] -= 1
    for i in twice:
        v[i] += 2
    return tuple(v)


def _order(alpha: Sequence[Q]) -> tuple:
    return tuple(sorted(range(len(alpha)), key=lambda r: (alpha[r], r)))


def _pairs_zero(a: Sequence[Q], start: int = 1) -> list:
    n = len(a)
    return [(r, s) for r, s in combinations(range(start, n), 2) if a[r] + a[s] == 0]


# ---------------------------------------------------------------- dispatch

def _pii_formula(a: tuple, sigma: tuple, m: int) -> LimitFormula | None:
    n = len(a)
    a0 = a[0]
    if not (a0 < 0 and P._in_pii(a, 0, m)):
        return None
    a1 = a[1]
    neg_sum = sum((a[r] + a0 for r in range(1, n) if a[r] + a0 < 0), Q(0))
    minus = [r for r in range(1, n) if a[r] == -a0]
    plus1 = [r for r in range(1, n) if a[r] == 1 + a0]
    pairs = _pairs_zero(a)
    extra = []
    if a1 + a[2] == 0:
        extra.append("|u1 u2| < 1")
    if a0 == -HALF and a1 == -HALF:
        bs = list(range(1, n))
        vecs = [_ev(n, twice=[0])] + [_ev(n, plus=[0, r]) for r in bs]
        vecs += [_ev(n, twice=[1])] + [_ev(n, plus=[1, r]) for r in range(n) if r != 1]
        mark = "(qb)" if _ones_in_span(vecs, n) else "(q)"
        k = len(bs)
        tag = f"{k + 3}W{k + 2}{mark}+''"
        return LimitFormula("PairedVWP", sigma, a, m, {"b": bs}, ("series at z=q",), tag)
    if a0 == -HALF:
        half = [r for r in range(1, n) if a[r] == HALF]
        low = [r for r in range(1, n) if a[r] < HALF]
        nn = 1 + len(low) - 3
        zv = [0] * n
        zv[0] += nn
        for r in low:
            zv[r] += 1
        vecs = [_ev(n, twice=[0])] + [_ev(n, plus=[0, r]) for r in half] + [tuple(zv)]
        k = len(half)
        tag = f"{k + 3}W{k + 2}" + (f"^({nn})" if nn else "")
        tag += "(b)" if _ones_in_span(vecs, n) else ""
        roles = {"half": half, "low": low, "n": nn, "pairs": pairs}
        return LimitFormula("SingleVWP", sigma, a, m, roles, tuple(extra), tag)
    if a0 == a1:
        nn = len(minus) - len(plus1) - 2
        vecs = []
        for i, j in ((0, 1), (1, 0)):
            vecs += [_ev(n, plus=[i, r]) for r in minus]
            vecs += [_ev(n, plus=[i], minus=[j])] + [_ev(n, plus=[i], minus=[r]) for r in plus1]
        mark = "(qb)" if _ones_in_span(vecs, n) else "(q)"
        tag = f"{len(minus)}phi{len(plus1) + 1}" + (f"^({nn})" if nn else "") + mark + "+''"
        roles = {"minus": minus, "plus1": plus1, "n": nn}
        return LimitFormula("PairedPhi", sigma, a, m, roles, ("series at z=q",), tag)
    if 2 * a0 == neg_sum:
        below = [r for r in range(1, n) if a[r] < -a0]
        nn = 1 + len(below) - 4 - len(plus1) + len(minus)
        zv = [0] * n
        zv[0] = -2 + len(below)
        for r in below:
            zv[r] += 1
        vecs = [_ev(n, plus=[0, r]) for r in minus] + [_ev(n, plus=[0], minus=[r]) for r in plus1]
        vecs.append(tuple(zv))
        tag = f"{len(minus)}phi{len(plus1)}" + (f"^({nn})" if nn else "")
        tag += "(b)" if _ones_in_span(vecs, n) else ""
        roles = {"minus": minus, "plus1": plus1, "below": below, "n": nn, "pairs": pairs}
        return LimitFormula("SinglePhi", sigma, a, m, roles, tuple(extra), tag)
    roles = {"plus1": plus1, "pairs": pairs}
    tag = "product" if (plus1 or pairs) else "1"
    return LimitFormula("ProductOnly" if tag == "product" else "One", sigma, a, m, roles, (), tag)


def _piii_formula(a: tuple, sigma: tuple, m: int, prefer_integral: bool = False):
    n = len(a)
    if not P._in_piii(a, (0, 1, 2)):
        return None
    b = a[0] + a[1] + a[2]
    if b == 0:
        # then a0 = a1 = a2 = 0: the point is in P_I and the rewritten
        # integral does not reproduce the limit there
        return None
    if a[0] == a[1] == -a[2]:
        minus = [r for r in range(3, n) if a[r] == -a[0]]
        plus1 = [r for r in range(3, n) if a[r] == 1 + a[0]]
        return LimitFormula("SymBroken1", sigma, a, m, {"minus": minus, "plus1": plus1},
                            ("unit circle separates pole sequences",), "SB1")
    if a[0] < a[1] == -a[2]:
        minus = [r for r in range(3, n) if a[r] == -a[0]]
        plus1 = [r for r in range(3, n) if a[r] == 1 + a[0]]
        return LimitFormula("SymBroken2", sigma, a, m, {"minus": minus, "plus1": plus1},
                            ("unit circle separates pole sequences",), "SB2")
    minus = [r for r in range(3, n) if a[r] == -b]
    plus1 = [r for r in range(3, n) if a[r] == 1 + b]
    if b == -HALF:
        tag = f"SBhat_{len(minus)}^{len(plus1)}"
    else:
        vecs = [_ev(n, plus=[0, 1, 2])] + [_ev(n, plus=[r]) for r in set(minus) | set(plus1)]
        tag = f"SB_{len(minus)}^{len(plus1)}" + ("(b)" if _ones_in_span(vecs, n) else "")
    return LimitFormula("SymBroken3", sigma, a, m, {"minus": minus, "plus1": plus1, "beta": b},
                        ("contour inside all poles",), tag)


def formula_for_point(alpha: Sequence, m: int = 1) -> LimitFormula:
    """Dispatch alpha in P^(m) to its explicit limit formula.

    Order: P_I (integral), P_II (series, product or 1), P_III (symmetry
    broken integral).  Points of P_III that also lie in P_II are served by
    the P_II series.
    """
    alpha = tuple(Q(x) for x in alpha)
    n = P.n_coords(m)
    if len(alpha) != n or sum(alpha) != m + 1:
        raise ValueError("alpha must have 2m+6 coordinates summing to m+1")
    if not P.satisfies(alpha, P.bounding_inequalities("P", m)):
        raise P.OutsideError(P.classify_point(alpha, "P", m).violated)
    sigma = _order(alpha)
    a = tuple(alpha[i] for i in sigma)
    if a[0] >= 0:
        zeros = [r for r in range(n) if a[r] == 0]
        ones = [r for r in range(n) if a[r] == 1]
        mark = "(b)" if len(zeros) + len(ones) == n else ""
        return LimitFormula("TrivialIntegral", sigma, a, m, {"zeros": zeros, "ones": ones},
                            ("|u_r| < 1 for alpha_r = 0",), f"NR_{len(zeros)}^{len(ones)}{mark}")
    f = _pii_formula(a, sigma, m)
    if f is not None:
        return f
    f = _piii_formula(a, sigma, m)
    if f is not None:
        return f
    raise RuntimeError(f"no limit formula for {R.fmt_vec(alpha)}")


def _quad_facet(face: P.FaceDescriptor):
    """Index set I when the face is the facet sum_{i in I} alpha_i = 0, |I| = 4."""
    if face.polytope_id != "P" or face.dim != P.n_coords(face.m) - 2:
        return None
    zero = [i for i, x in enumerate(face.centroid()) if x == 0]
    if len(zero) != 4:
        return None
    if all(sum(v[i] for i in zero) == 0 for v in face.vertices):
        return zero
    return None


def formula_for_face(face: P.FaceDescriptor) -> LimitFormula:
    """Face-level dispatch: the interior gives 1, the four-sum facets a single product."""
    n = P.n_coords(face.m)
    if face.polytope_id == "P" and face.is_interior:
        return LimitFormula("One", tuple(range(n)), face.centroid(), face.m, {}, (), "1")
    quad = _quad_facet(face)
    if quad is not None:
        c = face.centroid()
        sigma = _order(c)
        roles = {"plus1": [], "pairs": [], "quad": [0, 1, 2, 3]}
        return LimitFormula("ProductOnly", sigma, tuple(c[i] for i in sigma), face.m, roles,
                            (), "product")
    return formula_for_point(face.centroid(), face.m)


def symbreak_formula(alpha: Sequence, m: int = 1) -> LimitFormula:
    """The symmetry-broken integral form, even where dispatch prefers a series."""
    alpha = tuple(Q(x) for x in alpha)
    sigma = _order(alpha)
    a = tuple(alpha[i] for i in sigma)
    f = _piii_formula(a, sigma, m)
    if f is None:
        raise ValueError("alpha is not in the symmetry-broken region")
    return f


# ---------------------------------------------------------------- evaluation

def _check_balance(u: np.ndarray, q, m: int, tol: float = 1e-9) -> None:
    target = complex(q) ** (m + 1)
    if abs(np.prod(u) - target) > tol * abs(target):
        raise ValueError("balancing condition prod u = q^(m+1) violated")


def _qp(x, q):
    return qpoch_inf(x, q)


def _unit_integral(f, radius: float = 1.0, tol: float = QUAD_TOL) -> complex:
    return circle_integral(f, radius, tol=tol).value


def _need_inside(vals, what: str, margin: float) -> None:
    for v in vals:
        if abs(v) >= 1 - margin:
            raise ContourError(f"{what}: |{v:.4g}| >= 1 - margin")


def _eval_trivial(F: LimitFormula, u: np.ndarray, q, margin: float) -> complex:
    Z, O = F.roles["zeros"], F.roles["ones"]
    _need_inside(u[Z], "pole parameter", margin)
    pref = (_qp(q, q) / 2) * np.prod([_qp(u[r] * u[s], q) for r, s in combinations(Z, 2)] or [1])

    def f(z):
        out = _qp(z ** 2, q) * _qp(z ** -2, q)
        for r in O:
            out = out * _qp(q / (u[r] * z), q) * _qp(q * z / u[r], q)
        for r in Z:
            out = out / (_qp(u[r] * z, q) * _qp(u[r] / z, q))
        return out

    return pref * _unit_integral(f)


def _pair_factor(F, u, q) -> complex:
    return complex(np.prod([_qp(u[r] * u[s], q) for r, s in F.roles.get("pairs", ())] or [1]))


def _eval_paired_vwp(F, u, q, dps=None) -> complex:
    n = len(u)
    total = 0j
    for i, j in ((0, 1), (1, 0)):
        others = [r for r in range(n) if r not in (i, j)]
        num = np.prod([_qp(u[r] * u[j], q) * _qp(q * u[i] / u[r], q) for r in others])
        den = _qp(q * u[i] ** 2, q) * _qp(u[j] / u[i], q)
        bs = [u[i] * u[j]] + [u[i] * u[r] for r in others]
        total += num / den * phi_series(VWPParams(u[i] ** 2, tuple(bs), 0, q, q).expand(), dps=dps)
    return total


def _eval_single_vwp(F, u, q, dps=None) -> complex:
    half, low, nn = F.roles["half"], F.roles["low"], F.roles["n"]
    if any(c.startswith("|u1 u2|") for c in F.constraints) and abs(u[1] * u[2]) >= 1:
        raise ConstraintError("|u1 u2| < 1 required")
    pref = np.prod([_qp(q * u[0] / u[r], q) for r in half] or [1]) / _qp(q * u[0] ** 2, q)
    z = u[0] ** nn * np.prod([u[r] for r in low] or [1])
    par = VWPParams(u[0] ** 2, tuple(u[0] * u[r] for r in half), nn, q, z)
    return pref * _pair_factor(F, u, q) * phi_series(par.expand(), dps=dps)


def _eval_paired_phi(F, u, q, dps=None) -> complex:
    minus, plus1, nn = F.roles["minus"], F.roles["plus1"], F.roles["n"]
    total = 0j
    for i, j in ((0, 1), (1, 0)):
        pref = np.prod([_qp(u[j] * u[r], q) for r in minus] or [1])
        pref *= np.prod([_qp(q * u[i] / u[r], q) for r in plus1] or [1])
        pref /= _qp(u[j] / u[i], q)
        up = tuple(u[i] * u[r] for r in minus)
        lo = (q * u[i] / u[j],) + tuple(q * u[i] / u[r] for r in plus1)
        total += pref * phi_series(SeriesParams(up, lo, nn, q, q), dps=dps)
    return total


def _eval_single_phi(F, u, q, dps=None) -> complex:
    minus, plus1, below, nn = (F.roles[k] for k in ("minus", "plus1", "below", "n"))
    if any(c.startswith("|u1 u2|") for c in F.constraints) and abs(u[1] * u[2]) >= 1:
        raise ConstraintError("|u1 u2| < 1 required")
    pref = np.prod([_qp(q * u[0] / u[r], q) for r in plus1] or [1])
    z = u[0] ** -2 * np.prod([u[r] * u[0] for r in below] or [1])
    up = tuple(u[0] * u[r] for r in minus)
    lo = tuple(q * u[0] / u[r] for r in plus1)
    return pref * _pair_factor(F, u, q) * phi_series(SeriesParams(up, lo, nn, q, z), dps=dps)


def _eval_product(F, u, q) -> complex:
    out = np.prod([_qp(q * u[0] / u[r], q) for r in F.roles.get("plus1", ())] or [1])
    if "quad" in F.roles:
        out = out * _qp(np.prod(u[F.roles["quad"]]), q)
    return complex(out * _pair_factor(F, u, q))


def _sb3_radius(u, minus) -> float:
    if not minus:
        return 1.0
    return 0.5 * min(1 / abs(u[r]) for r in minus)


def _eval_sb3(F, u, q) -> complex:
    minus, plus1, b = F.roles["minus"], F.roles["plus1"], F.roles["beta"]
    c = u[0] * u[1] * u[2]
    hat = b == -HALF

    def f(z):
        out = theta(c / z, q)
        for r in plus1:
            out = out * _qp(q * z / u[r], q)
        for r in minus:
            out = out / _qp(u[r] * z, q)
        if hat:
            out = out * (1 - z ** 2)
        return out

    return _qp(q, q) * _unit_integral(f, _sb3_radius(u, minus))


def sb3_series(F: LimitFormula, u: Sequence[complex], q, kmax: int = 400) -> complex:
    """Series form of the third symmetry-broken integral (residue-free oracle).

    (q;q) theta(c/z;q) = sum_k (-1)^k q^C(k,2) c^k z^-k, so the integral is
    sum_k (-1)^k q^C(k,2) c^k f_k with f_k the Taylor coefficients of the
    remaining factor, obtained from the q-binomial expansions.
    """
    u = F.permute(u)
    minus, plus1, b = F.roles["minus"], F.roles["plus1"], F.roles["beta"]
    coef = np.zeros(kmax, dtype=complex)
    coef[0] = 1
    qk = np.array([complex(q) ** k for k in range(kmax)])
    qfac = np.cumprod(np.concatenate([[1], 1 - qk[1:]]))  # (q;q)_k
    binom = np.array([(-1) ** k * complex(q) ** (k * (k - 1) // 2) for k in range(kmax)])
    for r in plus1:
        x = q / u[r]
        ser = binom * x ** np.arange(kmax) / qfac
        coef = np.convolve(coef, ser)[:kmax]
    for r in minus:
        ser = u[r] ** np.arange(kmax) / qfac
        coef = np.convolve(coef, ser)[:kmax]
    if b == -HALF:
        coef = coef - np.concatenate([[0, 0], coef[:-2]])
    c = u[0] * u[1] * u[2]
    return complex(np.sum(binom * c ** np.arange(kmax) * coef))


def _eval_sb12(F, u, q, margin) -> complex:
    minus, plus1 = F.roles["minus"], F.roles["plus1"]
    hat = F.alpha[0] == -HALF
    one = F.variant == "SymBroken1"
    c = u[0] * u[1] * u[2]
    inner = [u[0]] + ([u[1]] if one else [])
    _need_inside(inner + [u[r] for r in minus], "downward/upward separation", margin)
    if hat:
        _need_inside(inner, "upward poles", margin)
    if one:
        pref = np.prod([_qp(u[r] * u[0], q) * _qp(u[r] * u[1], q) for r in minus] or [1])
        pref /= _qp(q / (u[0] * u[2]), q) * _qp(q / (u[1] * u[2]), q)
        if hat:
            pref *= _qp(u[0] * u[1], q)
    else:
        pref = np.prod([_qp(u[r] * u[0], q) for r in minus] or [1]) / _qp(q / (u[1] * u[2]), q)

    def f(z):
        out = theta(c / z, q)
        if one:
            out = out * _qp(q / (u[2] * z), q) / (_qp(u[0] / z, q) * _qp(u[1] / z, q))
        else:
            out = out / _qp(u[0] / z, q)
        for r in plus1:
            out = out * _qp(q * z / u[r], q)
        for r in minus:
            out = out / _qp(u[r] * z, q)
        if hat:
            if one:
                out = out * (1 - z ** 2) * _qp(q * z / u[2], q) / (_qp(u[0] * z, q) * _qp(u[1] * z, q))
            else:
                out = out * (1 - z ** 2) / _qp(u[0] * z, q)
        return out

    return pref * _qp(q, q) * _unit_integral(f)


def evaluate(F: LimitFormula, u: Sequence[complex], q, *, margin: float = 0.0,
             dps: int | None = None, check_balance: bool = True) -> complex:
    """Value of the limit formula at parameters u (given in original coordinates)."""
    u = np.asarray(u, dtype=complex)
    if check_balance:
        _check_balance(u, q, F.m)
    uu = F.permute(u)
    v = F.variant
    if v == "One":
        return 1.0 + 0j
    if v == "TrivialIntegral":
        return _eval_trivial(F, uu, q, margin)
    if v == "PairedVWP":
        return _eval_paired_vwp(F, uu, q, dps)
    if v == "SingleVWP":
        return _eval_single_vwp(F, uu, q, dps)
    if v == "PairedPhi":
        return _eval_paired_phi(F, uu, q, dps)
    if v == "SinglePhi":
        return _eval_single_phi(F, uu, q, dps)
    if v == "ProductOnly":
        return _eval_product(F, uu, q)
    if v == "SymBroken3":
        return _eval_sb3(F, uu, q)
    if v in ("SymBroken1", "SymBroken2"):
        return _eval_sb12(F, uu, q, margin)
    raise ValueError(f"unknown variant {v}")


def eval_B(alpha: Sequence, u: Sequence[complex], q, m: int = 1, **kw) -> complex:
    """B^m_alpha(u) via the face dispatch."""
    alpha = tuple(Q(x) for x in alpha)
    face = P.classify_point(alpha, "P", m)
    if not face:
        raise P.OutsideError(face.violated)
    F = formula_for_face(face) if (face.is_interior or _quad_facet(face)) else formula_for_point(alpha, m)
    return evaluate(F, u, q, **kw)


def eval_B_sum_integral(alpha: Sequence, u: Sequence[complex], q, w: complex, m: int = 1,
                        margin: float = 0.0) -> complex:
    """The w-dependent integral representation (value independent of w)."""
    alpha = tuple(Q(x) for x in alpha)
    sigma = _order(alpha)
    a = tuple(alpha[i] for i in sigma)
    n = len(a)
    if not (-HALF <= a[0] == a[1] < 0 and a[2] >= -a[0] and a[-1] <= 1 + a[0]):
        raise ValueError("alpha outside the region of the w-integral")
    u = np.asarray(u, dtype=complex)
    _check_balance(u, q, m)
    u = u[list(sigma)]
    minus = [r for r in range(2, n) if a[r] == -a[0]]
    plus1 = [r for r in range(2, n) if a[r] == 1 + a[0]]
    hat = a[0] == -HALF
    _need_inside([u[0], u[1]] + [u[r] for r in minus], "pole separation", margin)
    den = theta(u[0] * w, q) * theta(u[1] * w, q)
    if abs(den) < 1e-14:
        raise ZeroDivisionError("w hits a zero of theta(u_0 w) theta(u_1 w)")
    pref = np.prod([_qp(u[0] * u[r], q) * _qp(u[1] * u[r], q) for r in minus] or [1]) * _qp(q, q)
    if hat:
        pref = pref * _qp(u[0] * u[1], q)

    def f(z):
        out = theta(u[0] * u[1] * w / z, q) * theta(w * z, q) / den
        for r in plus1:
            out = out * _qp(q * z / u[r], q)
        for r in minus:
            out = out / _qp(u[r] * z, q)
        out = out / (_qp(u[0] / z, q) * _qp(u[1] / z, q))
        if hat:
            out = out * (1 - z ** 2) / (_qp(u[0] * z, q) * _qp(u[1] * z, q))
        return out

    return pref * _unit_integral(f)


# ------------------------------------------------------------ numerical limits

@dataclass
class ConvergenceReport:
    p_values: list
    errors: list
    verdict: str
    target: complex = 0j
    values: list = field(default_factory=list)


def scaled_params(u: Sequence[complex], alpha: Sequence, p: float) -> np.ndarray:
    """t = u * p^alpha with real positive p."""
    u = np.asarray(u, dtype=complex)
    return u * np.array([float(p) ** float(a) for a in alpha])


def verify_limit(alpha: Sequence, u: Sequence[complex], q, m: int = 1,
                 p_schedule: Sequence[float] = (0.2, 0.1, 0.05, 0.025),
                 tol_limit: float = 1e-3, margin: float = 0.0) -> ConvergenceReport:
    """Errors |E^m(u p^alpha) - B_alpha(u)| along a decreasing p schedule."""
    ps = list(p_schedule)
    if any(b >= a for a, b in zip(ps, ps[1:])) or min(ps) <= 0:
        raise ValueError("p schedule must be positive and strictly decreasing")
    target = eval_B(alpha, u, q, m)
    errs, vals = [], []
    for p in ps:
        t = scaled_params(u, alpha, p)
        val = elliptic_beta_integral(m, t, p, q, margin=margin, balance_tol=1e-8)
        vals.append(val)
        errs.append(abs(val - target))
    mono = all(b < a for a, b in zip(errs, errs[1:]))
    verdict = "converging" if mono and errs[-1] < tol_limit else (
        "inconclusive" if errs[-1] < errs[0] else "failed")
    return ConvergenceReport(ps, errs, verdict, target, vals)


def face_constancy_check(alpha: Sequence, beta: Sequence, u, q, m: int = 1) -> float:
    fa = P.classify_point(alpha, "P", m)
    fb = P.classify_point(beta, "P", m)
    if not fa or not fb or fa.mask != fb.mask:
        raise ValueError("points lie in different faces")
    return abs(eval_B(alpha, u, q, m) - eval_B(beta, u, q, m))


def power_shift(u: Sequence[complex], x: complex, v: Sequence) -> np.ndarray:
    """u * x^v with x^v = exp(v log x), principal log; product is preserved when sum v = 0."""
    lx = np.log(complex(x))
    return np.asarray(u, dtype=complex) * np.exp(np.array([float(c) for c in v]) * lx)


def orthogonal_dependence_check(alpha, beta, u, q, x: complex, m: int = 1) -> float:
    fa = P.classify_point(alpha, "P", m)
    fb = P.classify_point(beta, "P", m)
    if not fa or not fb or fa.mask != fb.mask:
        raise ValueError("points lie in different faces")
    v = R.sub(tuple(Q(c) for c in alpha), tuple(Q(c) for c in beta))
    return abs(eval_B(alpha, u, q, m) - eval_B(alpha, power_shift(u, x, v), q, m))


def iterated_limit_errors(alpha, beta, u, q, xs: Sequence[float], m: int = 1) -> list:
    """|B_alpha(u x^(beta - alpha)) - B_mid(u)| along xs -> 0."""
    a = tuple(Q(c) for c in alpha)
    b = tuple(Q(c) for c in beta)
    mid = tuple((x + y) / 2 for x, y in zip(a, b))
    target = eval_B(mid, u, q, m)
    v = R.sub(b, a)
    return [abs(eval_B(a, power_shift(u, x, v), q, m) - target) for x in xs]


def evaluation_limit_m0(alpha: Sequence, u: Sequence[complex], q) -> complex:
    """Limit of prod_{r<s} (pq/t_r t_s; p,q) at t = u p^alpha for alpha in P_ext."""
    alpha = tuple(Q(x) for x in alpha)
    if len(alpha) != 6 or sum(alpha) != 1:
        raise ValueError("alpha must have six coordinates summing to 1")
    if not P.satisfies(alpha, P.bounding_inequalities("Pext", 0)):
        raise P.OutsideError(P.classify_point(alpha, "Pext", 0).violated)
    u = np.asarray(u, dtype=complex)
    out = 1.0 + 0j
    for r, s in combinations(range(6), 2):
        if alpha[r] + alpha[s] == 1:
            out *= _qp(q / (u[r] * u[s]), q)
    return out
