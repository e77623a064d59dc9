"""Identity families read off the polytope, evaluated numerically.

Every identity is a linear relation among values of B^m at Weyl-related
points and parameters.  The residual of a relation is
|sum of terms| / max |term|, so it is scale-free.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction as Q
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from . import limits as L
from . import polytope as P
from . import rootsys as R
from .elliptic import ContourError, sample_params
from .qseries import SeriesError, SeriesParams, phi_series, qpoch_inf, theta

SCHEMA_VERSION = 1
MAX_DRAWS = 100

_ADMISSIBILITY = (ContourError, SeriesError, L.ConstraintError, ZeroDivisionError,
                  ArithmeticError, ValueError)


@dataclass
class IdentityRecord:
    kind: str
    faces: list
    residual: float
    witness_params: dict
    weyl_word: list | None = None
    triangle: tuple | None = None
    tolerance: float = 1e-8
    seed: int | None = None
    label: str = ""
    terms: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual < self.tolerance)

    def to_json(self) -> dict:
        def cx(z):
            return [float(np.real(z)), float(np.imag(z))]

        w = self.witness_params
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "label": self.label,
            "faces": [f.names() if hasattr(f, "names") else f for f in self.faces],
            "weyl_word": None if self.weyl_word is None else [R.fmt_vec(r) for r in self.weyl_word],
            "triangle": None if self.triangle is None else [R.fmt_vec(a) for a in self.triangle],
            "residual": float(self.residual),
            "seed": self.seed,
            "params": {"u": [cx(z) for z in w.get("u", [])], "q": cx(w.get("q", 0))},
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def residual(terms: Sequence[complex]) -> float:
    big = max(abs(t) for t in terms)
    if big == 0:
        return 0.0
    return float(abs(sum(terms)) / big)


def draw_admissible(check: Callable[[np.ndarray], object], q, m: int, rng: np.random.Generator,
                    r_min: float = 0.35, r_max: float = 0.9, tries: int = MAX_DRAWS):
    """Draw u with moduli in an annulus and prod u = q^(m+1) until ``check(u)`` succeeds.

    Returns (u, check(u)).  Every failure mode of an evaluation counts as
    inadmissible and triggers a redraw.
    """
    n = 2 * m + 6
    last = None
    for _ in range(tries):
        lo = np.log(r_min)
        up = np.full(n, np.log(r_max))
        try:
            u = sample_params(up, (m + 1) * np.log(abs(q)), rng)
        except ValueError as exc:
            raise ValueError("annulus incompatible with the balancing condition") from exc
        if np.any(np.log(np.abs(u)) < lo):
            continue
        try:
            return u, check(u)
        except _ADMISSIBILITY as exc:
            last = exc
    raise RuntimeError(f"no admissible parameters after {tries} draws (last: {last})")


# -------------------------------------------------------------- reference face

def vertex_by_name(name: str, m: int = 1) -> R.Vec:
    for v in P.vertices("P", m):
        if P.vertex_name(v, m) == name:
            return v
    raise KeyError(name)


def reference_face() -> P.FaceDescriptor:
    """The 2phi1 face spanned by w01, w02, v67, v57."""
    return P.face_from_vertices("P", 1, [vertex_by_name(s) for s in ("w01", "w02", "v67", "v57")])


def _root(s: str) -> R.Vec:
    """'rho-0347' or '3-4' shorthand for E7 roots."""
    if s.startswith("rho-"):
        return R.sub(R.rho(), R.e_sum(int(c) for c in s[4:]))
    i, j = s.split("-")
    return R.sub(R.unit(int(i)), R.unit(int(j)))


HEINE_WORDS = {
    "heine_first": [_root("rho-0347")],
    "heine_second": [_root("rho-0456")],
    "swap_ab": [_root("3-4")],
}


# --------------------------------------------------------------- symmetries

def _generic_point(face: P.FaceDescriptor) -> R.Vec:
    return face.centroid()


def symmetry_identity(face: P.FaceDescriptor, word: Sequence, u, q, *, alpha=None,
                      seed: int | None = None, tol: float = 1e-8, label: str = "") -> IdentityRecord:
    """B_alpha(u) = B_alpha(w u) for w fixing every vertex of the face."""
    word = [tuple(Q(x) for x in r) for r in word]
    for r in word:
        if any(R.dot(r, v) != 0 for v in face.vertices):
            raise ValueError(f"{R.fmt_vec(r)} does not fix the face pointwise")
    alpha = _generic_point(face) if alpha is None else tuple(Q(x) for x in alpha)
    u = np.asarray(u, dtype=complex)
    wu = R.weyl_act_param(word, u, q, m=face.m, canonical=False)
    a = L.eval_B(alpha, u, q, face.m)
    b = L.eval_B(alpha, wu, q, face.m)
    return IdentityRecord("symmetry", [face], float(abs(a - b) / abs(a)),
                          {"u": list(u), "q": q}, weyl_word=word, tolerance=tol, seed=seed,
                          label=label, terms=[a, -b])


def stabilizer_generators(face: P.FaceDescriptor) -> list:
    """Simple roots of the pointwise stabilizer (one reflection per generator)."""
    roots, _ = P.face_stabilizer(face)
    return R.simple_roots(roots) if roots else []


# ----------------------------------------------------------- transformations

def transformation_identity(face_src: P.FaceDescriptor, word: Sequence, u, q, *, alpha=None,
                            seed: int | None = None, tol: float = 1e-8,
                            label: str = "") -> IdentityRecord:
    """B_alpha(u) = B_{w alpha}(w u) where w moves the face to another face."""
    word = [tuple(Q(x) for x in r) for r in word]
    alpha = _generic_point(face_src) if alpha is None else tuple(Q(x) for x in alpha)
    beta = R.apply_word(word, alpha)
    dst = P.classify_point(beta, "P", face_src.m)
    if not dst:
        raise P.OutsideError(dst.violated)
    if dst.mask == face_src.mask:
        raise ValueError("the word maps the face to itself; use symmetry_identity")
    u = np.asarray(u, dtype=complex)
    wu = R.weyl_act_param(word, u, q, m=face_src.m, canonical=False)
    a = L.eval_B(alpha, u, q, face_src.m)
    b = L.eval_B(beta, wu, q, face_src.m)
    return IdentityRecord("transformation", [face_src, dst], float(abs(a - b) / abs(a)),
                          {"u": list(u), "q": q}, weyl_word=word, tolerance=tol, seed=seed,
                          label=label, terms=[a, -b])


def orbit_class_words(face: P.FaceDescriptor) -> dict:
    """One shortest reflection word per S8-class of faces in the W(E7) orbit.

    Keys are the sorted-centroid class keys; the face's own class maps to [].
    """
    roots = R.positive_e7_roots()
    start = tuple(face.vertices)
    key = lambda vs: tuple(sorted(sum((v[i] for v in vs), Q(0)) / len(vs) for i in range(8)))
    target = P.face_orbit(face).n_classes
    found = {key(start): []}
    seen = {frozenset(start)}
    queue = deque([(start, [])])
    while queue and len(found) < target:
        vs, word = queue.popleft()
        for r in roots:
            img = tuple(R.reflect(r, v) for v in vs)
            fs = frozenset(img)
            if fs in seen:
                continue
            seen.add(fs)
            w2 = word + [r]
            k = key(img)
            if k not in found:
                found[k] = w2
            queue.append((img, w2))
    return found


def transformation_chain(face: P.FaceDescriptor, q, rng: np.random.Generator, *,
                         seed: int | None = None, tol: float = 1e-8) -> list[IdentityRecord]:
    """Transformations from the face to a representative of every other class in its orbit.

    A single witness u is used for the whole chain so the records describe
    one chain of equal values.
    """
    words = [w for w in orbit_class_words(face).values() if w]
    alpha = _generic_point(face)

    def check(u):
        return [transformation_identity(face, w, u, q, alpha=alpha, seed=seed, tol=tol)
                for w in words]

    _, recs = draw_admissible(check, q, face.m, rng)
    for r in recs:
        r.label = " ".join(r.faces[1].names())
    return recs


# ---------------------------------------------------------- three-term relation

def u_power(u: np.ndarray, v: Sequence, q) -> complex:
    """u^v for v in Z^8 or Z^8 + rho at the basic level of E^1.

    The balancing prod u = q^2 gives u^rho = q, so a half-integer
    v = rho + w evaluates to q * u^w with w integral; no square roots.
    """
    v = tuple(Q(x) for x in v)
    if all(x.denominator == 1 for x in v):
        w, out = v, 1.0 + 0j
    else:
        w = R.sub(v, R.rho(len(v)))
        if any(x.denominator != 1 for x in w):
            raise ValueError("v must lie in Z^8 or Z^8 + rho")
        out = complex(q)
    for uj, k in zip(u, w):
        out *= uj ** int(k)
    return out


def is_root_triangle(a, b, c) -> bool:
    d1, d2, d3 = R.sub(a, b), R.sub(a, c), R.sub(b, c)
    return (all(R.is_e7_root(d) for d in (d1, d2, d3)) and R.dot(d1, d2) == 1)


def three_term_terms(tri, u, q) -> list[complex]:
    """The three summands, multiplied through by u^(-alpha)."""
    a, b, c = (tuple(Q(x) for x in p) for p in tri)
    if not is_root_triangle(a, b, c):
        raise ValueError("points do not form an equilateral triangle of E7 roots")
    for p in (a, b, c):
        f = P.classify_point(p, "P", 1)
        if not f:
            raise P.OutsideError(f.violated)
    u = np.asarray(u, dtype=complex)
    S = R.enumerate_roots("S")
    out = []
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        coef = 1.0 + 0j
        for d in S:
            if R.dot(d, x) == 1 and R.dot(d, y) == 0 and R.dot(d, z) == 0:
                coef *= qpoch_inf(u_power(u, d, q), q)
        # u^z / u^a with the common u^a divided out
        coef *= u_power(u, R.sub(z, a), q) * theta(u_power(u, R.sub(y, z), q), q)
        out.append(coef * L.eval_B(x, u, q, 1))
    return out


def three_term_relation(tri, u, q, *, seed: int | None = None, tol: float = 1e-8) -> IdentityRecord:
    terms = three_term_terms(tri, u, q)
    faces = [P.classify_point(p, "P", 1) for p in tri]
    return IdentityRecord("three_term", faces, residual(terms), {"u": list(u), "q": q},
                          triangle=tuple(tuple(Q(x) for x in p) for p in tri), tolerance=tol,
                          seed=seed, terms=terms)


def reference_quadruple() -> list[R.Vec]:
    """The four points Lambda(E7)-equivalent to the 2phi1 centroid."""
    pts = ["-1/4,0,0,1/4,1/4,1/2,1/2,3/4", "3/4,0,0,1/4,1/4,1/2,1/2,-1/4",
           "1/4,1/2,1/2,3/4,-1/4,0,0,1/4", "1/4,1/2,1/2,-1/4,3/4,0,0,1/4"]
    return [R.parse_vec(s) for s in pts]


def reference_triangles() -> list[tuple]:
    return [t for t in combinations(reference_quadruple(), 3) if is_root_triangle(*t)]


def weyl_image_triangle(tri, rng: np.random.Generator, length: int = 4) -> tuple:
    roots = R.enumerate_roots("E7")
    word = [roots[int(i)] for i in rng.integers(0, len(roots), length)]
    return tuple(R.apply_word(word, p) for p in tri), word


def weyl_image_triangles(count: int, rng: np.random.Generator, length: int = 3,
                         tries: int = 1000) -> list[tuple]:
    """Random W(E7) images of the reference triangles whose points all stay in P^(1)."""
    base = reference_triangles()
    out = []
    for i in range(tries):
        if len(out) == count:
            break
        img, word = weyl_image_triangle(base[i % len(base)], rng, length)
        if all(P.classify_point(p, "P", 1) for p in img):
            out.append((img, word))
    if len(out) < count:
        raise RuntimeError(f"found only {len(out)} triangle images inside the polytope")
    return out


# ------------------------------------------------------------ q-contiguity

# projections onto the space orthogonal to the reference face; each one
# multiplies exactly one of a = u0u3, b = u0u4, c = q u0/u7, z = u1u2 by q
Q_SHIFTS = {
    "a": R.parse_vec("1/4,0,0,3/4,-1/4,-1/2,-1/2,1/4"),
    "b": R.parse_vec("1/4,0,0,-1/4,3/4,-1/2,-1/2,1/4"),
    "c": R.parse_vec("1/4,0,0,-1/4,-1/4,1/2,1/2,-3/4"),
    "z": R.parse_vec("0,1/2,1/2,0,0,-1/2,-1/2,0"),
}


def heine_params(u, q) -> tuple:
    u = np.asarray(u, dtype=complex)
    return u[0] * u[3], u[0] * u[4], q * u[0] / u[7], u[1] * u[2]


def _phi21(a, b, c, z, q) -> complex:
    return phi_series(SeriesParams((a, b), (c,), 0, q, z))


def q_contiguous_series_terms(a, b, c, z, q, shift: str = "a") -> list[complex]:
    """Three-term q-contiguous relation for 2phi1 in the parameter ``shift``.

    'a':  -(1-a) f(aq,b;c;z) - a f(a,b;c;qz) + f(a,b;c;z)
    'b':  the same with a and b exchanged
    'c':  (1-c) f(a,b;c;z) - f(a,b;cq;z) + c f(a,b;cq;qz)
    """
    f = lambda a_, b_, c_, z_: _phi21(a_, b_, c_, z_, q)
    if shift == "a":
        return [-(1 - a) * f(a * q, b, c, z), -a * f(a, b, c, q * z), f(a, b, c, z)]
    if shift == "b":
        return [-(1 - b) * f(a, b * q, c, z), -b * f(a, b, c, q * z), f(a, b, c, z)]
    if shift == "c":
        return [(1 - c) * f(a, b, c, z), -f(a, b, c * q, z), c * f(a, b, c * q, q * z)]
    raise ValueError(f"unknown shift {shift!r}; choose from 'a', 'b', 'c'")


def _phi_via_B(u, q, shifts: Sequence[str]) -> complex:
    """2phi1 value at u moved by the given lattice shifts, read off B on the reference face."""
    alpha = reference_face().centroid()
    v = (Q(0),) * 8
    for s in shifts:
        v = R.add(v, Q_SHIFTS[s])
    uu = L.power_shift(u, q, v)
    a, b, c, z = heine_params(uu, q)
    return L.eval_B(alpha, uu, q, 1) / (qpoch_inf(z, q) * qpoch_inf(c, q))


def q_contiguous_example(u, q, shift_choice: str = "a", *, via: str = "B",
                         seed: int | None = None, tol: float = 1e-12) -> IdentityRecord:
    """The 2phi1 q-contiguous relation at a = u0u3, b = u0u4, c = q u0/u7, z = u1u2.

    With ``via='B'`` the three values come from B on the reference face at
    lattice-shifted parameters u q^(pi v); with ``via='series'`` they are
    summed directly.
    """
    u = np.asarray(u, dtype=complex)
    a, b, c, z = heine_params(u, q)
    if via == "series":
        terms = q_contiguous_series_terms(a, b, c, z, q, shift_choice)
    elif via == "B":
        f = lambda *s: _phi_via_B(u, q, s)
        if shift_choice == "a":
            terms = [-(1 - a) * f("a"), -a * f("z"), f()]
        elif shift_choice == "b":
            terms = [-(1 - b) * f("b"), -b * f("z"), f()]
        elif shift_choice == "c":
            terms = [(1 - c) * f(), -f("c"), c * f("c", "z")]
        else:
            raise ValueError(f"unknown shift {shift_choice!r}; choose from 'a', 'b', 'c'")
    else:
        raise ValueError("via must be 'B' or 'series'")
    return IdentityRecord("q_contiguous", [reference_face()], residual(terms),
                          {"u": list(u), "q": q}, tolerance=tol, seed=seed,
                          label=f"shift {shift_choice}", terms=terms)


# ---------------------------------------------------------- m = 0 evaluations

def evaluation_catalog_m0(q=0.3, seed: int = 0, tol: float = 1e-8) -> list[IdentityRecord]:
    """B^0 on every face class of P_I, P_II, P_III against the closed-form limit."""
    rng = np.random.default_rng(seed)
    simp, other = P.catalog_simplicial_faces(0)
    out = []
    for row in simp + other:
        alpha = row.face.centroid()

        def check(u, alpha=alpha):
            return L.eval_B(alpha, u, q, 0), L.evaluation_limit_m0(alpha, u, q)

        u, (b, c) = draw_admissible(check, q, 0, rng, r_max=0.85)
        res = float(abs(b - c) / max(abs(c), 1e-300))
        out.append(IdentityRecord("evaluation", [row.face], res, {"u": list(u), "q": q},
                                  tolerance=tol, seed=seed, label=row.family_tag, terms=[b, -c]))
    # the facet a_0 + a_1 + a_2 + a_3 = 0 is not simplicial, so it is not a catalog row
    facet = P.classify_point(R.parse_vec("0,0,0,0,1/2,1/2"), "Pext", 0)
    alpha = facet.centroid()

    def facet_check(u):
        b = L.eval_B(alpha, u, q, 0)
        return b, L.evaluation_limit_m0(alpha, u, q), qpoch_inf(np.prod(u[:4]), q)

    u, (b, c, d) = draw_admissible(facet_check, q, 0, rng, r_max=0.85)
    res = float(max(abs(b - c), abs(b - d)) / abs(d))
    out.append(IdentityRecord("evaluation", [facet], res, {"u": list(u), "q": q},
                              tolerance=tol, seed=seed, label="product", terms=[b, -d]))
    return out
