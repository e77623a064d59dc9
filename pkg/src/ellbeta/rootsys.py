"""E7/E8 root data, reflections and the multiplicative W(E7) action.

Vectors are tuples of ``Fraction``.  Weyl group elements are words of
reflecting roots; nothing here builds a matrix.
"""
from __future__ import annotations

from fractions import Fraction as Q
from functools import lru_cache
from itertools import combinations, product
from math import factorial
from typing import Iterable, Sequence

import numpy as np

Vec = tuple

HALF = Q(1, 2)


def vec(*xs) -> Vec:
    return tuple(Q(x) for x in xs)


def rho(n: int = 8) -> Vec:
    return (HALF,) * n


def unit(i: int, n: int = 8) -> Vec:
    return tuple(Q(int(j == i)) for j in range(n))


def dot(a: Sequence, b: Sequence) -> Q:
    return sum((x * y for x, y in zip(a, b)), Q(0))


def add(a: Sequence, b: Sequence) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def scale(c, a: Sequence) -> Vec:
    return tuple(Q(c) * x for x in a)


def neg(a: Sequence) -> Vec:
    return tuple(-x for x in a)


def e_sum(idx: Iterable[int], n: int = 8) -> Vec:
    """Sum of unit vectors e_i over ``idx`` (repetitions add up)."""
    out = [Q(0)] * n
    for i in idx:
        out[i] += 1
    return tuple(out)


def parse_vec(s: str) -> Vec:
    """'-1/4,0,1/2' -> exact vector."""
    return tuple(Q(x.strip()) for x in s.split(",") if x.strip())


def fmt_vec(v: Sequence) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


# ------------------------------------------------------------- enumeration

@lru_cache(maxsize=None)
def _e8() -> tuple:
    roots = []
    # integer part: v.v = 2 forces two entries of +-1
    for c in product((-1, 0, 1), repeat=8):
        if sum(x * x for x in c) == 2:
            roots.append(tuple(Q(x) for x in c))
    # half-integer part: all entries +-1/2; keep the even lattice (D8 + rho)
    for signs in product((-1, 1), repeat=8):
        if signs.count(-1) % 2 == 0:
            roots.append(tuple(Q(s, 2) for s in signs))
    return tuple(sorted(roots))


@lru_cache(maxsize=None)
def enumerate_roots(system: str = "E7") -> tuple:
    """All roots of 'E8', 'E7' or the 56-element orbit 'S', sorted."""
    r = rho()
    if system == "E8":
        return _e8()
    if system == "E7":
        return tuple(v for v in _e8() if dot(v, r) == 0)
    if system in ("S", "OrbitS"):
        return tuple(v for v in _e8() if dot(v, r) == 1)
    raise ValueError(f"unknown root system {system!r}")


def is_e7_root(v: Sequence) -> bool:
    return tuple(Q(x) for x in v) in _e7_set()


@lru_cache(maxsize=None)
def _e7_set() -> frozenset:
    return frozenset(enumerate_roots("E7"))


def positive_e7_roots() -> tuple:
    h = _generic_height(8)
    return tuple(a for a in enumerate_roots("E7") if dot(a, h) > 0)


# -------------------------------------------------------------- reflections

def reflect(root: Sequence, v: Sequence) -> Vec:
    """s_root(v) = v - (root.v) root; root must have norm 2."""
    if dot(root, root) != 2:
        raise ValueError(f"reflection needs a norm-2 root, got {fmt_vec(root)}")
    c = dot(root, v)
    return tuple(Q(x) - c * Q(a) for x, a in zip(v, root))


def apply_word(word: Sequence[Sequence], v: Sequence) -> Vec:
    """Apply reflections in order: the first entry acts first."""
    out = tuple(Q(x) for x in v)
    for r in word:
        out = reflect(r, out)
    return out


# -------------------------------------------------- action on parameters

def canonical_sign(u: np.ndarray) -> np.ndarray:
    """Representative of {u, -u}: first coordinate with argument in [0, pi)."""
    u = np.asarray(u, dtype=complex)
    a = np.angle(u[0])
    if a < 0 or a >= np.pi or (u[0] == 0):
        # angle() returns pi for negative reals; those flip to positive reals
        if u[0] != 0:
            return -u
    return u


def _reflect_param(root: Sequence, u: np.ndarray, level: complex) -> np.ndarray:
    n = len(root)
    root = tuple(Q(x) for x in root)
    if dot(root, root) != 2 or dot(root, rho(n)) != 0:
        raise ValueError(f"{fmt_vec(root)} is not an E7 root")
    nz = [i for i, x in enumerate(root) if x != 0]
    if all(x.denominator == 1 for x in root):
        i, j = nz
        out = u.copy()
        out[i], out[j] = u[j], u[i]
        return out
    # rho - e_I with |I| = 4: I is where the coordinate equals -1/2
    idx = [i for i, x in enumerate(root) if x < 0]
    s = np.sqrt(np.prod(u[idx]) / level)
    out = u * s
    out[idx] = u[idx] / s
    return out


def weyl_act_param(word: Sequence[Sequence], t: Sequence[complex], level: complex,
                   m: int = 1, tol: float = 1e-9, canonical: bool = True) -> np.ndarray:
    """Multiplicative action t -> exp(w log t) on parameters with prod t = level^(m+1).

    ``level`` is pq at the elliptic level and q at the basic level.  The
    output is canonicalized modulo the global sign unless ``canonical``
    is False.
    """
    u = np.asarray(t, dtype=complex).copy()
    target = complex(level) ** (m + 1)
    if abs(np.prod(u) - target) > tol * abs(target):
        raise ValueError("balancing condition violated")
    for r in word:
        u = _reflect_param(r, u, level)
    return canonical_sign(u) if canonical else u


def same_up_to_sign(a: Sequence[complex], b: Sequence[complex], tol: float = 1e-10) -> bool:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    sc = max(1.0, float(np.max(np.abs(a))))
    return bool(np.max(np.abs(a - b)) <= tol * sc or np.max(np.abs(a + b)) <= tol * sc)


# --------------------------------------------------------------- stabilizers

def stabilizer_roots(fix: Sequence[Sequence]) -> tuple:
    """E7 roots orthogonal to every vector of ``fix``."""
    fix = [tuple(Q(x) for x in v) for v in fix]
    if not fix:
        raise ValueError("need at least one vector to fix")
    return tuple(a for a in enumerate_roots("E7") if all(dot(a, v) == 0 for v in fix))


def affine_stabilizer_roots(points: Sequence[Sequence]) -> tuple:
    """E7 roots whose reflection preserves alpha + Lambda(E7) for generic alpha in the hull.

    For alpha = sum c_i v_i with generic weights summing to 1, delta.alpha
    is an integer for all such alpha iff delta.v_i is the same integer for
    every i.  The vertices here lie in the E8 lattice, so this is exact.
    """
    pts = [tuple(Q(x) for x in v) for v in points]
    out = []
    for a in enumerate_roots("E7"):
        vals = {dot(a, v) for v in pts}
        if len(vals) == 1 and next(iter(vals)).denominator == 1:
            out.append(a)
    return tuple(out)


# ------------------------------------------------------------ Coxeter types

_E_ORDERS = {6: 51840, 7: 2903040, 8: 696729600}


def _generic_height(n: int) -> Vec:
    # rationally independent enough to avoid ties on roots of norm 2
    return tuple(Q(1, 1) / (k + 2) + Q(k * k, 997) for k in range(n))


def simple_roots(roots: Sequence[Sequence]) -> list:
    """Simple system of a closed root subsystem with respect to a generic height."""
    roots = [tuple(Q(x) for x in r) for r in roots]
    n = len(roots[0]) if roots else 8
    h = _generic_height(n)
    pos = [r for r in roots if dot(r, h) > 0]
    posset = set(pos)
    simple = []
    for r in pos:
        decomposable = any(sub(r, a) in posset for a in pos if a != r)
        if not decomposable:
            simple.append(r)
    return sorted(simple)


def is_closed(roots: Sequence[Sequence]) -> bool:
    rs = {tuple(Q(x) for x in r) for r in roots}
    return all(reflect(a, b) in rs for a in rs for b in rs)


def _component_type(nodes: list, adj: dict) -> tuple[str, int]:
    k = len(nodes)
    deg = {v: len(adj[v]) for v in nodes}
    branch = [v for v in nodes if deg[v] == 3]
    if not branch:
        return "A", k
    b = branch[0]
    arms = []
    for start in adj[b]:
        length, prev, cur = 1, b, start
        while True:
            nxt = [w for w in adj[cur] if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return "D", k
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return "E", k
    raise ValueError(f"unrecognized Dynkin diagram with arms {arms}")


def coxeter_type(roots: Sequence[Sequence]) -> str:
    """Cartan type string like 'A2xA1'; '1' for the empty system."""
    roots = [tuple(Q(x) for x in r) for r in roots]
    if not roots:
        return "1"
    if not is_closed(roots):
        raise ValueError("roots do not form a closed subsystem")
    simple = simple_roots(roots)
    adj = {i: [] for i in range(len(simple))}
    for i, j in combinations(range(len(simple)), 2):
        c = dot(simple[i], simple[j])
        if c == -1:
            adj[i].append(j)
            adj[j].append(i)
        elif c != 0:
            raise ValueError("simple roots with inner product outside {0,-1}")
    seen, comps = set(), []
    for v in adj:
        if v in seen:
            continue
        stack, comp = [v], []
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(_component_type(comp, adj))
    comps.sort(key=lambda c: (-c[1], c[0]))
    return "x".join(f"{t}{k}" for t, k in comps)


def parse_type(s: str) -> list[tuple[str, int]]:
    if s == "1":
        return []
    return [(p[0], int(p[1:])) for p in s.split("x")]


def weyl_order(type_string: str) -> int:
    out = 1
    for t, k in parse_type(type_string):
        if t == "A":
            out *= factorial(k + 1)
        elif t == "D":
            out *= 2 ** (k - 1) * factorial(k)
        elif t == "E":
            out *= _E_ORDERS[k]
    return out
