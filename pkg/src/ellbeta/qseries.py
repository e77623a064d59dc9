"""Single-base q-series building blocks.

q-shifted factorials, theta functions, the confluent series
phi^(n) (an extra factor ((-1)^k q^C(k,2))^(n+s+1-r) in the k-th term)
and the very-well-poised W^(n) series built on top of it.

All functions accept plain Python/numpy complex numbers.  Passing
``dps=<digits>`` to the scalar routines switches to mpmath arithmetic at
that working precision; the interface and return type (a Python complex)
stay the same, which is what the oracle tests rely on.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import mpmath
import numpy as np

EPS_PROD = 1e-18
EPS_TAIL = 1e-16
SERIES_CAP = 100_000
_TERMINATE_TOL = 1e-13


class SeriesError(ArithmeticError):
    """Divergent regime or a vanishing denominator."""


def _check_q(q) -> None:
    if abs(q) >= 1:
        raise ValueError(f"|q| must be < 1, got {q!r}")


# ---------------------------------------------------------------- products

def qpoch_inf(x, q, eps: float = EPS_PROD, dps: int | None = None):
    """(x;q)_inf.  ``x`` may be a scalar or a numpy array."""
    _check_q(q)
    if dps is not None:
        with mpmath.workdps(dps):
            xm, qm = mpmath.mpc(x), mpmath.mpc(q)
            res, t = mpmath.mpc(1), xm
            tiny = mpmath.mpf(10) ** (-dps - 5)
            while abs(t) > tiny:
                res *= 1 - t
                t *= qm
            return complex(res)
    x = np.asarray(x, dtype=complex)
    aq = abs(q)
    amax = float(np.max(np.abs(x))) if x.size else 0.0
    if amax == 0.0 or aq == 0.0:
        return (1 - x) if aq == 0.0 else np.ones_like(x)[()]
    # first j with |x| |q|^j < eps; the remaining tail differs from 1 by
    # at most eps/(1-|q|)
    nterms = max(1, int(np.ceil((np.log(eps) - np.log(amax)) / np.log(aq))) + 1)
    res = np.ones_like(x)
    t = x.copy()
    for _ in range(nterms):
        res = res * (1 - t)
        t = t * q
    return res[()] if res.ndim == 0 else res


def qpoch(xs: Sequence, q):
    """(x_1, ..., x_n; q)_inf as a product."""
    out = 1.0 + 0j
    for x in xs:
        out = out * qpoch_inf(x, q)
    return out


def qpoch_k(x, q, k: int):
    """(x;q)_k for any integer k, with (x;q)_k = (x;q)_inf / (x q^k;q)_inf."""
    _check_q(q)
    x = complex(x)
    if k >= 0:
        out = 1.0 + 0j
        t = x
        for _ in range(k):
            out *= 1 - t
            t *= q
        return out
    # (x;q)_{-n} = 1 / prod_{j=1..n} (1 - x q^{-j})
    den = 1.0 + 0j
    for j in range(1, -k + 1):
        den *= 1 - x * q ** (-j)
    if abs(den) < 1e-300:
        raise SeriesError(f"(x;q)_{k} has a pole at x={x!r}")
    return 1 / den


def theta(x, q, dps: int | None = None):
    """theta(x;q) = (x, q/x; q)_inf."""
    if np.any(np.asarray(x) == 0):
        raise ValueError("theta(x;q) needs x != 0")
    if dps is not None:
        with mpmath.workdps(dps + 5):
            qm, xm = mpmath.mpc(q), mpmath.mpc(x)
            qx = complex(qm / xm)
        return complex(
            mpmath.mpc(qpoch_inf(x, q, dps=dps)) * mpmath.mpc(qpoch_inf(qx, q, dps=dps))
        )
    x = np.asarray(x, dtype=complex)
    res = qpoch_inf(x, q) * qpoch_inf(q / x, q)
    return res[()] if np.ndim(res) == 0 else res


# ------------------------------------------------------------------ series

@dataclass(frozen=True)
class SeriesParams:
    upper: tuple = ()
    lower: tuple = ()
    n: int = 0
    q: complex = 0.5
    z: complex = 0.0

    @property
    def confluence(self) -> int:
        return self.n + len(self.lower) + 1 - len(self.upper)


@dataclass(frozen=True)
class VWPParams:
    a: complex
    b: tuple = ()
    n: int = 0
    q: complex = 0.5
    z: complex = 0.0

    def expand(self) -> SeriesParams:
        """The phi^(n) parameters a, +-q sqrt(a), b_i ; +-sqrt(a), aq/b_i."""
        sa = complex(np.sqrt(complex(self.a)))
        q = self.q
        upper = (self.a, q * sa, -q * sa) + tuple(self.b)
        lower = (sa, -sa) + tuple(self.a * q / bi for bi in self.b)
        return SeriesParams(upper, lower, self.n, q, self.z)


@dataclass
class SeriesResult:
    value: complex
    terms: int
    terminated: bool = False
    trace: list = field(default_factory=list)


def _phi_sum(p: SeriesParams, tol: float, cap: int, dps: int | None) -> SeriesResult:
    _check_q(p.q)
    e = p.confluence
    num = mpmath.mpc if dps is not None else complex
    one = num(1)
    q = num(p.q)
    z = num(p.z)
    ups = [num(a) for a in p.upper]
    lows = [num(b) for b in p.lower]
    term = one
    total = one
    qk = one  # q^k
    small = 0
    for k in range(cap):
        ratio = one
        for a in ups:
            f = 1 - a * qk
            if abs(f) < _TERMINATE_TOL:
                return SeriesResult(complex(total), k + 1, True)
            ratio *= f
        den = 1 - qk * q
        for b in lows:
            f = 1 - b * qk
            if abs(f) < _TERMINATE_TOL:
                raise SeriesError("lower parameter in q^(-N) before termination")
            den *= f
        ratio = ratio / den * z
        if e:
            ratio *= (-qk) ** e
        term = term * ratio
        total = total + term
        if abs(term) <= tol * abs(total):
            small += 1
            if small >= 3:
                return SeriesResult(complex(total), k + 2)
        else:
            small = 0
        qk = qk * q
        if not np.isfinite(complex(term)):
            raise SeriesError("series overflowed")
    raise SeriesError(f"series did not converge within {cap} terms")


def phi_series(params: SeriesParams | None = None, *, upper=(), lower=(), n: int = 0,
               q=None, z=None, tol: float = EPS_TAIL, cap: int = SERIES_CAP,
               dps: int | None = None) -> complex:
    """The confluent series phi^(n)(upper; lower; q, z).

    Raises SeriesError when the parameters are in a divergent regime
    (negative confluence exponent, or zero exponent with |z| >= 1) and no
    upper parameter makes the series terminate.
    """
    if params is None:
        params = SeriesParams(tuple(upper), tuple(lower), n, q, z)
    if params.z == 0:
        return 1.0 + 0j
    e = params.confluence
    terminating = any(_terminates(a, params.q) for a in params.upper)
    if not terminating:
        if e < 0:
            raise SeriesError("negative confluence exponent: divergent series")
        if e == 0 and abs(params.z) >= 1:
            raise SeriesError("|z| >= 1 with zero confluence exponent")
    if dps is not None:
        with mpmath.workdps(dps):
            return _phi_sum(params, mpmath.mpf(10) ** (-dps), cap, dps).value
    return _phi_sum(params, tol, cap, None).value


def _terminates(a, q, kmax: int = 2000) -> bool:
    """True when a = q^(-N) for some N >= 0 (numerically)."""
    a = complex(a)
    if a == 0:
        return False
    x = np.log(a) / np.log(complex(q))
    nn = -round(x.real)
    return nn >= 0 and nn <= kmax and abs(a * complex(q) ** nn - 1) < _TERMINATE_TOL


def vwp_series(params: VWPParams | None = None, *, a=None, b=(), n: int = 0, q=None,
               z=None, **kw) -> complex:
    """Very-well-poised W^(n)(a; b_1..b_k; q, z) via its phi^(n) expansion."""
    if params is None:
        params = VWPParams(a, tuple(b), n, q, z)
    return phi_series(params.expand(), **kw)
