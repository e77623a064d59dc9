"""Exact geometry of the Hesse polytope P^(m), its pieces P_I/P_II/P_III and P_ext.

Everything here is rational arithmetic.  Faces are represented by their
vertex sets (bitmasks over the polytope's vertex list); the maximal tight
inequality set is derived from the vertex set.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Q
from functools import lru_cache
from itertools import combinations
from math import gcd, lcm
from typing import Sequence

import numpy as np

from . import rootsys as R

POLYTOPES = ("P", "PI", "PII", "PIII", "Pext")


class OutsideError(ValueError):
    """Point violates at least one bounding inequality."""

    def __init__(self, violated):
        self.violated = violated
        super().__init__(f"{len(violated)} violated inequalities")


def n_coords(m: int) -> int:
    return 2 * m + 6


def ambient_total(pid: str, m: int) -> Q:
    return Q(1) if pid == "Pext" else Q(m + 1)


def _check(pid: str, m: int) -> None:
    if pid not in POLYTOPES:
        raise ValueError(f"unknown polytope {pid!r}")
    if m < 0:
        raise ValueError("m must be non-negative")
    if pid == "Pext" and m != 0:
        raise ValueError("P_ext is only defined for m = 0")


# ------------------------------------------------------------------ vertices

def v_vec(S: Sequence[int], m: int) -> R.Vec:
    return R.e_sum(S, n_coords(m))


def w_vec(i: int, j: int, m: int) -> R.Vec:
    n = n_coords(m)
    return R.sub(R.rho(n), R.e_sum((i, j), n))


def vertex_name(v: Sequence[Q], m: int) -> str:
    """'v01', 'w67', 'e3', 'f2' style label for a vertex."""
    n = n_coords(m)
    if all(x in (0, 1) for x in v):
        return "v" + "".join(str(i) for i, x in enumerate(v) if x == 1)
    neg = [i for i, x in enumerate(v) if x < 0]
    if len(neg) == 2 and all(x == R.HALF for i, x in enumerate(v) if i not in neg):
        return "w" + "".join(map(str, neg))
    if len(neg) == 1 and n == 6 and v[neg[0]] == Q(-3, 2):
        return f"f{neg[0]}"
    return R.fmt_vec(v)


@lru_cache(maxsize=None)
def vertices(pid: str, m: int) -> tuple:
    """Exact vertex list, deterministic order (v's first, then w's)."""
    _check(pid, m)
    n = n_coords(m)
    if pid == "Pext":
        return tuple(R.unit(j, 6) for j in range(6)) + tuple(
            R.sub(R.rho(6), R.scale(2, R.unit(j, 6))) for j in range(6))
    if pid == "P":
        vs, ws = range(n), combinations(range(n), 2)
    elif pid == "PI":
        vs, ws = range(n), ()
    elif pid == "PII":
        vs, ws = range(1, n), ((0, j) for j in range(1, n))
    else:
        vs, ws = range(3, n), combinations(range(3), 2)
    out = [v_vec(S, m) for S in combinations(vs, m + 1)]
    out += [w_vec(i, j, m) for i, j in ws]
    return tuple(out)


# --------------------------------------------------------------- inequalities

@dataclass(frozen=True)
class Inequality:
    """mu . alpha <= c with mu summing to zero, primitive integer."""

    mu: tuple
    c: Q

    def value(self, alpha: Sequence[Q]) -> Q:
        return R.dot(self.mu, alpha)

    def slack(self, alpha: Sequence[Q]) -> Q:
        return self.c - self.value(alpha)

    def __str__(self) -> str:
        terms = []
        for i, x in enumerate(self.mu):
            if x == 0:
                continue
            coef = "" if abs(x) == 1 else str(abs(x))
            terms.append(("-" if x < 0 else "+") + f"{coef}a{i}")
        s = " ".join(terms).lstrip("+")
        return f"{s} <= {self.c}"


def normalize(mu: Sequence, c, n: int, total: Q) -> Inequality:
    """Canonical form of mu.alpha <= c on the hyperplane sum(alpha) == total."""
    mu = [Q(x) for x in mu]
    c = Q(c)
    s = sum(mu, Q(0)) / n
    mu = [x - s for x in mu]
    c = c - s * total
    den = lcm(*(x.denominator for x in mu + [c]))
    ints = [int(x * den) for x in mu + [c]]
    g = 0
    for k in ints:
        g = gcd(g, k)
    if g == 0:
        raise ValueError("trivial inequality")
    ints = [k // g for k in ints]
    return Inequality(tuple(Q(k) for k in ints[:-1]), Q(ints[-1]))


def _dedupe(ineqs) -> tuple:
    seen, out = set(), []
    for q in ineqs:
        if q not in seen:
            seen.add(q)
            out.append(q)
    return tuple(out)


@lru_cache(maxsize=None)
def bounding_inequalities(pid: str, m: int, form: str = "standard") -> tuple:
    """Bounding inequalities as normalized ``Inequality`` objects.

    ``form='e7'`` gives the root-system version for P^(1):
    delta.alpha <= 1 over R(E7) and mu.alpha <= 2 over norm-4 lattice
    vectors with mu.rho = 1.
    """
    _check(pid, m)
    n = n_coords(m)
    tot = ambient_total(pid, m)
    e = lambda i: R.unit(i, n)
    es = lambda idx: R.e_sum(idx, n)
    raw = []  # (mu, c) meaning mu.alpha <= c
    if form == "e7":
        if (pid, m) != ("P", 1):
            raise ValueError("the E7 form exists only for P^(1)")
        for d in R.enumerate_roots("E7"):
            raw.append((d, 1))
        for mu in norm4_vectors():
            raw.append((mu, 2))
        return _dedupe(normalize(mu, c, n, tot) for mu, c in raw)
    if form != "standard":
        raise ValueError(f"unknown inequality form {form!r}")
    if pid == "P":
        for i in range(n):
            raw.append((R.neg(e(i)), R.HALF))
            if m > 0:
                raw.append((e(i), 1))
        for i, j in ((i, j) for i in range(n) for j in range(n) if i != j):
            raw.append((R.sub(e(i), e(j)), 1))
        if m > 0:
            for i in range(n):
                rest = [r for r in range(n) if r != i]
                for jkl in combinations(rest, 3):
                    raw.append((R.sub(e(i), es(jkl)), 1))
        for i in range(n):
            rest = [r for r in range(n) if r != i]
            for k in range(3, m + 4):
                for S in combinations(rest, k):
                    mu = R.add(R.scale(k - 2, e(i)), es(S))
                    raw.append((R.neg(mu), 0))
    elif pid == "PI":
        for i in range(n):
            raw.append((R.neg(e(i)), 0))
            if m > 0:
                raw.append((e(i), 1))
    elif pid == "PII":
        raw.append((R.neg(e(0)), R.HALF))
        for r in range(1, n):
            raw.append((R.sub(e(r), e(0)), 1))
        for k in range(0, m + 4):
            for S in combinations(range(1, n), k):
                mu = R.add(R.scale(k - 2, e(0)), es(S))
                raw.append((R.neg(mu), 0))
    elif pid == "PIII":
        b = es((0, 1, 2))
        for i, j in combinations(range(3), 2):
            raw.append((es((i, j)), 0))
        for i in range(3, n):
            raw.append((R.neg(R.add(e(i), b)), 0))
            if m > 0:
                raw.append((R.sub(e(i), b), 1))
    else:
        for r, s in combinations(range(6), 2):
            raw.append((es((r, s)), 1))
    return _dedupe(normalize(mu, c, n, tot) for mu, c in raw)


@lru_cache(maxsize=None)
def norm4_vectors() -> tuple:
    """Lattice vectors mu with mu.rho = 1 and mu.mu = 4 (the 576 of them)."""
    n = 8
    out = set()
    for i in range(n):
        out.add(R.scale(2, R.unit(i)))
        out.add(R.sub(R.rho(), R.scale(2, R.unit(i))))
    for l in range(n):
        rest = [r for r in range(n) if r != l]
        for ijk in combinations(rest, 3):
            out.add(R.sub(R.e_sum(ijk), R.unit(l)))
    for i in range(n):
        rest = [r for r in range(n) if r != i]
        for jkl in combinations(rest, 3):
            out.add(R.sub(R.add(R.rho(), R.unit(i)), R.e_sum(jkl)))
    return tuple(sorted(out))


_INT_FORMS: dict = {}


def _int_form(ineqs) -> tuple:
    """Integer matrix M and vectors num, den with c_i = num_i / den_i (cached per tuple)."""
    hit = _INT_FORMS.get(id(ineqs))
    if hit is not None and hit[0] is ineqs:
        return hit[1]
    rows = list(ineqs)
    dens = [lcm(*(Q(x).denominator for x in h.mu), Q(h.c).denominator) for h in rows]
    M = np.array([[int(Q(x) * d) for x in h.mu] for h, d in zip(rows, dens)], dtype=np.int64)
    num = np.array([int(Q(h.c) * d) for h, d in zip(rows, dens)], dtype=np.int64)
    form = (M, num)
    if isinstance(ineqs, tuple):
        _INT_FORMS[id(ineqs)] = (ineqs, form)
    return form


def slack_signs(alpha: Sequence[Q], ineqs) -> np.ndarray:
    """Integers with the sign of c_i - mu_i.alpha, computed exactly."""
    alpha = [Q(x) for x in alpha]
    D = lcm(*(x.denominator for x in alpha))
    A = np.array([int(x * D) for x in alpha], dtype=np.int64)
    M, num = _int_form(ineqs)
    return num * D - M @ A


def satisfies(alpha: Sequence[Q], ineqs) -> bool:
    return bool(np.all(slack_signs(alpha, ineqs) >= 0))


# ------------------------------------------------------------ exact linear algebra

def affine_rank(points: Sequence[Sequence[Q]]) -> int:
    """Affine dimension of a finite point set, by fraction-free elimination."""
    pts = list(points)
    if not pts:
        return -1
    p0 = pts[0]
    rows = [R.sub(p, p0) for p in pts[1:]]
    if not rows:
        return 0
    den = lcm(*(x.denominator for r in rows for x in r))
    M = np.array([[int(x * den) for x in r] for r in rows], dtype=np.int64)
    return _int_rank(M)


def _int_rank(M: np.ndarray) -> int:
    M = M.copy()
    rows, cols = M.shape
    rank = 0
    prev = 1
    for c in range(cols):
        piv = None
        for r in range(rank, rows):
            if M[r, c] != 0:
                piv = r
                break
        if piv is None:
            continue
        if piv != rank:
            M[[rank, piv]] = M[[piv, rank]]
        p = M[rank, c]
        below = M[rank + 1:]
        # Bareiss update keeps entries integral and bounded by minors
        M[rank + 1:] = (p * below - np.outer(below[:, c], M[rank])) // prev
        prev = p
        rank += 1
        if rank == rows:
            break
    return rank


# ---------------------------------------------------------------------- faces

@dataclass(frozen=True)
class FaceDescriptor:
    polytope_id: str
    m: int
    tight: tuple
    vertices: tuple
    dim: int
    mask: int = field(default=0, compare=False)

    @property
    def is_simplicial(self) -> bool:
        return len(self.vertices) == self.dim + 1

    @property
    def is_interior(self) -> bool:
        return not self.tight

    def centroid(self) -> R.Vec:
        k = len(self.vertices)
        return tuple(sum((v[i] for v in self.vertices), Q(0)) / k
                     for i in range(len(self.vertices[0])))

    def names(self) -> list[str]:
        return [vertex_name(v, self.m) for v in self.vertices]

    def _raw_inequalities(self) -> list:
        # for P^(1) the root-system form measures slack in powers of p
        if (self.polytope_id, self.m) == ("P", 1):
            raw = [(d, Q(1)) for d in R.enumerate_roots("E7")]
            raw += [(mu, Q(2)) for mu in norm4_vectors()]
        else:
            raw = [(h.mu, h.c) for h in bounding_inequalities(self.polytope_id, self.m)]
        return [(mu, c) for mu, c in raw
                if any(R.dot(mu, v) != c for v in self.vertices)]

    def deep_point(self, max_den: int = 420) -> R.Vec:
        """Point of the open face maximizing the smallest slack of the non-tight inequalities.

        Solved as a small LP over convex weights of the vertices and rounded
        to a rational point; falls back to the centroid when rounding leaves
        the face.
        """
        from scipy.optimize import linprog

        V = np.array([[float(x) for x in v] for v in self.vertices])
        k = len(V)
        raw = self._raw_inequalities()
        if not raw:
            return self.centroid()
        rows = [list(V @ np.array([float(x) for x in mu])) + [1.0] for mu, _ in raw]
        rhs = [float(c) for _, c in raw]
        res = linprog(c=[0.0] * k + [-1.0], A_ub=rows, b_ub=rhs, A_eq=[[1.0] * k + [0.0]],
                      b_eq=[1.0], bounds=[(0, None)] * k + [(None, None)], method="highs")
        if not res.success:
            return self.centroid()
        w = [Q(float(x)).limit_denominator(max_den) for x in res.x[:k]]
        w[-1] = 1 - sum(w[:-1])
        pt = tuple(sum((wi * v[j] for wi, v in zip(w, self.vertices)), Q(0))
                   for j in range(len(self.vertices[0])))
        f = classify_point(pt, self.polytope_id, self.m)
        return pt if f and f.mask == self.mask else self.centroid()

    def min_slack(self, alpha: Sequence) -> Q:
        """Smallest slack c - mu.alpha over the inequalities not tight on this face."""
        raw = self._raw_inequalities()
        return min(c - R.dot(mu, alpha) for mu, c in raw) if raw else Q(0)

    def s_class(self) -> tuple:
        """Key identifying the face up to coordinate permutations."""
        return tuple(sorted(self.centroid()))


@dataclass(frozen=True)
class Outside:
    violated: tuple

    def __bool__(self) -> bool:  # an Outside result is falsy
        return False


def _vertex_value_table(pid: str, m: int):
    verts = vertices(pid, m)
    ineqs = bounding_inequalities(pid, m)
    return verts, ineqs


@lru_cache(maxsize=None)
def tight_masks(pid: str, m: int) -> tuple:
    """Bitmask of vertices attaining equality, per bounding inequality."""
    verts, ineqs = _vertex_value_table(pid, m)
    out = []
    for q in ineqs:
        mask = 0
        for k, v in enumerate(verts):
            if q.slack(v) == 0:
                mask |= 1 << k
        out.append(mask)
    return tuple(out)


def _mask_vertices(pid: str, m: int, mask: int) -> tuple:
    verts = vertices(pid, m)
    return tuple(v for k, v in enumerate(verts) if mask >> k & 1)


@lru_cache(maxsize=None)
def _int_vertices(pid: str, m: int) -> np.ndarray:
    # doubled coordinates are integers for every vertex we use
    return np.array([[int(2 * x) for x in v] for v in vertices(pid, m)], dtype=np.int64)


def _mask_rank(pid: str, m: int, mask: int) -> int:
    idx = [k for k in range(len(vertices(pid, m))) if mask >> k & 1]
    M = _int_vertices(pid, m)[idx]
    if len(idx) <= 1:
        return len(idx) - 1
    return _int_rank(M[1:] - M[0])


def face_from_mask(pid: str, m: int, mask: int) -> FaceDescriptor:
    masks = tight_masks(pid, m)
    tight = tuple(i for i, tm in enumerate(masks) if tm & mask == mask)
    vs = _mask_vertices(pid, m, mask)
    return FaceDescriptor(pid, m, tight, vs, _mask_rank(pid, m, mask), mask)


def face_from_vertices(pid: str, m: int, verts: Sequence[Sequence[Q]]) -> FaceDescriptor:
    """Smallest face containing the given vertices."""
    index = {v: k for k, v in enumerate(vertices(pid, m))}
    mask = 0
    for v in verts:
        mask |= 1 << index[tuple(Q(x) for x in v)]
    full = (1 << len(index)) - 1
    hull = full
    for tm in tight_masks(pid, m):
        if tm & mask == mask:
            hull &= tm
    return face_from_mask(pid, m, hull)


def classify_point(alpha: Sequence, pid: str = "P", m: int = 1):
    """Open face containing ``alpha``, or ``Outside`` listing violated inequalities."""
    _check(pid, m)
    alpha = tuple(Q(x) for x in alpha)
    if len(alpha) != n_coords(m):
        raise ValueError(f"alpha must have {n_coords(m)} coordinates")
    if sum(alpha) != ambient_total(pid, m):
        raise ValueError(f"coordinates must sum to {ambient_total(pid, m)}")
    ineqs = bounding_inequalities(pid, m)
    sg = slack_signs(alpha, ineqs)
    bad = tuple(int(i) for i in np.flatnonzero(sg < 0))
    if bad:
        return Outside(bad)
    masks = tight_masks(pid, m)
    hull = (1 << len(vertices(pid, m))) - 1
    for i in np.flatnonzero(sg == 0):
        hull &= masks[i]
    return face_from_mask(pid, m, hull)


@lru_cache(maxsize=None)
def all_face_masks(pid: str, m: int) -> tuple:
    """Every nonempty face (including the polytope itself) as a vertex bitmask."""
    masks = np.array(sorted(set(tight_masks(pid, m))), dtype=np.uint64)
    full = (1 << len(vertices(pid, m))) - 1
    faces = set(int(x) for x in masks)
    frontier = list(faces)
    while frontier:
        nxt = set()
        for f in frontier:
            inter = np.unique(masks & np.uint64(f))
            for g in inter:
                g = int(g)
                if g and g not in faces:
                    nxt.add(g)
        faces |= nxt
        frontier = list(nxt)
    faces.add(full)
    return tuple(sorted(faces))


@lru_cache(maxsize=None)
def all_faces(pid: str, m: int) -> tuple:
    return tuple(face_from_mask(pid, m, f) for f in all_face_masks(pid, m))


def f_vector(pid: str, m: int) -> tuple:
    faces = all_faces(pid, m)
    top = max(f.dim for f in faces)
    return tuple(sum(1 for f in faces if f.dim == d) for d in range(top))


def facets(pid: str, m: int) -> tuple:
    """Indices of bounding inequalities whose tight vertex set has codimension one."""
    top = affine_rank(vertices(pid, m))
    verts = vertices(pid, m)
    out = []
    for i, tm in enumerate(tight_masks(pid, m)):
        vs = [v for k, v in enumerate(verts) if tm >> k & 1]
        if vs and affine_rank(vs) == top - 1:
            out.append(i)
    return tuple(out)


# -------------------------------------------------------------- decomposition

@dataclass(frozen=True)
class Membership:
    kind: str          # 'PI', 'PII' or 'PIII'
    sigma: tuple       # role k is played by coordinate sigma[k]


def _in_pii(a: Sequence[Q], i: int, m: int) -> bool:
    a0 = a[i]
    rest = sorted(a[r] for r in range(len(a)) if r != i)
    if a0 < -R.HALF or any(x - a0 > 1 for x in rest):
        return False
    run = Q(0)
    for k in range(0, m + 4):
        if k:
            run += rest[k - 1]
        if (k - 2) * a0 + run < 0:
            return False
    return True


def _in_piii(a: Sequence[Q], T: Sequence[int]) -> bool:
    b = sum(a[t] for t in T)
    if any(a[i] + a[j] > 0 for i, j in combinations(T, 2)):
        return False
    return all(-a[r] <= b and a[r] - 1 <= b for r in range(len(a)) if r not in T)


def _order(a, idx) -> list:
    return sorted(idx, key=lambda r: (a[r], r))


def decompose(alpha: Sequence, m: int = 1) -> list[Membership]:
    """All ways alpha lies in P_I, sigma(P_II) or sigma(P_III); primary first."""
    a = tuple(Q(x) for x in alpha)
    n = n_coords(m)
    if len(a) != n or sum(a) != m + 1:
        raise ValueError("alpha must have 2m+6 coordinates summing to m+1")
    if not satisfies(a, bounding_inequalities("P", m)):
        raise OutsideError(classify_point(a, "P", m).violated)
    out = []
    if all(0 <= x <= 1 for x in a):
        out.append(Membership("PI", tuple(_order(a, range(n)))))
    pii = []
    for i in range(n):
        if _in_pii(a, i, m):
            pii.append(Membership("PII", (i,) + tuple(_order(a, [r for r in range(n) if r != i]))))
    piii = []
    for T in combinations(range(n), 3):
        if _in_piii(a, T):
            rest = [r for r in range(n) if r not in T]
            piii.append(Membership("PIII", tuple(_order(a, T)) + tuple(_order(a, rest))))
    out += sorted(pii, key=lambda x: x.sigma) + sorted(piii, key=lambda x: x.sigma)
    if not out:
        raise RuntimeError("point of P not covered by the decomposition")
    return out


# ----------------------------------------------------------- W(E7) on faces

@lru_cache(maxsize=None)
def reflection_permutations() -> tuple:
    """For each positive E7 root, the induced permutation of the 56 vertices of P^(1)."""
    verts = vertices("P", 1)
    index = {v: k for k, v in enumerate(verts)}
    perms = []
    for a in R.positive_e7_roots():
        perms.append(tuple(index[R.reflect(a, v)] for v in verts))
    return tuple(perms)


@lru_cache(maxsize=None)
def _byte_tables() -> tuple:
    """Per reflection, lookup tables mapping each byte of a mask to its image bits."""
    out = []
    for perm in reflection_permutations():
        tabs = []
        for b in range(7):
            tab = [0] * 256
            for byte in range(256):
                img = 0
                for k in range(8):
                    if byte >> k & 1:
                        img |= 1 << perm[8 * b + k]
                tab[byte] = img
            tabs.append(tab)
        out.append(tabs)
    return tuple(out)


def _permute_mask(mask: int, tabs) -> int:
    out = 0
    for b in range(7):
        out |= tabs[b][mask >> (8 * b) & 255]
    return out


@dataclass(frozen=True)
class OrbitResult:
    masks: tuple
    s8_classes: tuple

    def faces(self) -> list[FaceDescriptor]:
        return [face_from_mask("P", 1, f) for f in self.masks]

    @property
    def n_classes(self) -> int:
        return len(self.s8_classes)


def face_orbit(face: FaceDescriptor) -> OrbitResult:
    """W(E7) orbit of a face of P^(1), with its classes up to S8."""
    if face.m != 1 or face.polytope_id != "P":
        raise ValueError("face orbits are implemented for faces of P^(1)")
    perms = _byte_tables()
    start = face.mask or face_from_vertices("P", 1, face.vertices).mask
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for f in frontier:
            for p in perms:
                g = _permute_mask(f, p)
                if g not in seen:
                    seen.add(g)
                    nxt.append(g)
        frontier = nxt
    masks = tuple(sorted(seen))
    keys = sorted({_centroid_key(f) for f in masks})
    return OrbitResult(masks, tuple(keys))


def _centroid_key(mask: int) -> tuple:
    vs = _mask_vertices("P", 1, mask)
    k = len(vs)
    return tuple(sorted(sum((v[i] for v in vs), Q(0)) / k for i in range(8)))


def is_face_mask(mask: int, pid: str = "P", m: int = 1) -> bool:
    return mask in set(all_face_masks(pid, m))


def face_stabilizer(face: FaceDescriptor) -> tuple[tuple, str]:
    if face.m != 1:
        raise ValueError("stabilizers are defined through W(E7), i.e. m = 1")
    if face.is_interior:
        # B is constant there, so nothing constrains the symmetry
        roots = R.enumerate_roots("E7")
        return roots, R.coxeter_type(roots)
    roots = R.stabilizer_roots(face.vertices)
    return roots, R.coxeter_type(roots)


def affine_stabilizer_type(face: FaceDescriptor) -> str:
    if face.m != 1:
        raise ValueError("stabilizers are defined through W(E7), i.e. m = 1")
    if face.is_interior:
        return "E7"
    return R.coxeter_type(R.affine_stabilizer_roots(face.vertices))


def bounds_top_simplex(face: FaceDescriptor) -> bool:
    """True if the face lies in a simplicial facet of P^(1)."""
    for f in facets("P", face.m):
        tm = tight_masks("P", face.m)[f]
        if tm & face.mask == face.mask and bin(tm).count("1") == 7:
            return True
    return False


# ------------------------------------------------------------------- catalogs

@dataclass(frozen=True)
class FaceCatalogRow:
    face: FaceDescriptor
    family_tag: str
    symmetry_type: str | None
    affine_symmetry_type: str | None

    @property
    def dim(self) -> int:
        return self.face.dim

    def key(self) -> tuple:
        return (self.dim, self.family_tag, self.symmetry_type, self.affine_symmetry_type)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "vertices": self.face.names(),
            "family_tag": self.family_tag,
            "symmetry_type": self.symmetry_type,
            "affine_symmetry_type": self.affine_symmetry_type,
        }


def _s6_key(verts: Sequence[Sequence[Q]]) -> tuple:
    from itertools import permutations
    best = None
    for p in permutations(range(6)):
        cand = tuple(sorted(tuple(v[i] for i in p) for v in verts))
        if best is None or cand < best:
            best = cand
    return best


def catalog_simplicial_faces(m: int = 1) -> tuple[list[FaceCatalogRow], list[FaceCatalogRow]]:
    """(simplicial rows, non-simplicial rows) up to coordinate permutation.

    For m = 1 the faces are those of P^(1).  For m = 0 they are the faces of
    P_I, P_II and P_III (including each piece itself).
    """
    simp, other = _catalog(m)
    return list(simp), list(other)


@lru_cache(maxsize=None)
def _catalog(m: int) -> tuple:
    from .limits import formula_for_face, formula_for_point

    simp, other = [], []
    if m == 1:
        reps = {}
        for f in all_faces("P", 1):
            reps.setdefault(f.s_class(), f)
        for key in sorted(reps, key=lambda k: (reps[k].dim, k)):
            f = reps[key]
            tag = formula_for_face(f).tag
            _, sym = face_stabilizer(f)
            row = FaceCatalogRow(f, tag, sym, affine_stabilizer_type(f))
            (simp if f.is_simplicial else other).append(row)
        return tuple(simp), tuple(other)
    if m != 0:
        raise ValueError("catalogs exist for m in {0, 1}")
    reps = {}
    for pid in ("PI", "PII", "PIII"):
        for f in all_faces(pid, 0):
            reps.setdefault(_s6_key(f.vertices), f)
    for key in sorted(reps, key=lambda k: (reps[k].dim, k)):
        f = reps[key]
        tag = formula_for_point(f.centroid(), 0).tag
        row = FaceCatalogRow(f, tag, None, None)
        (simp if f.is_simplicial else other).append(row)
    return tuple(simp), tuple(other)


def load_golden(m: int) -> dict:
    """Transcribed catalog shipped with the package."""
    import json
    from importlib.resources import files

    name = {1: "fig1_m1.json", 0: "fig2_m0.json"}.get(m)
    if name is None:
        raise ValueError("catalogs exist for m in {0, 1}")
    return json.loads(files("ellbeta").joinpath("data", name).read_text())


def catalog_diff(m: int, golden: dict | None = None) -> list[str]:
    """Human-readable differences between the computed catalog and the golden one."""
    from collections import Counter

    golden = load_golden(m) if golden is None else golden
    simp, other = catalog_simplicial_faces(m)
    out = []
    if m == 1:
        got = Counter((r.dim, r.family_tag, r.symmetry_type, r.affine_symmetry_type) for r in simp)
        want = Counter((g["dim"], g["tag"], g["symmetry"], g["affine_symmetry"])
                       for g in golden["simplicial"])
        by_tag = {r.family_tag: r for r in simp}
        for g in golden["simplicial"]:
            if g.get("vertices") and g["tag"] in by_tag:
                named = {vertex_name(v, 1): v for v in vertices("P", 1)}
                f = face_from_vertices("P", 1, [named[s] for s in g["vertices"]])
                if f.s_class() != by_tag[g["tag"]].face.s_class():
                    out.append(f"vertex set of {g['tag']} does not match the computed face")
    else:
        got = Counter((r.dim, r.family_tag, r.face.polytope_id) for r in simp)
        want = Counter((g["dim"], g["tag"], g["polytope"]) for g in golden["simplicial"])
    for k in sorted(set(got) | set(want), key=str):
        if got[k] != want[k]:
            out.append(f"row {k}: computed {got[k]}, golden {want[k]}")
    gd = Counter(g["dim"] for g in golden["non_simplicial"])
    cd = Counter(r.dim for r in other)
    if gd != cd:
        out.append(f"non-simplicial rows by dimension: computed {dict(cd)}, golden {dict(gd)}")
    return out
