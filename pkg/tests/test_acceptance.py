"""Acceptance criteria 1-10; each test logs one PASS/FAIL line (see the terminal summary)."""
import time
from fractions import Fraction as Q

import numpy as np
import pytest

from ellbeta import elliptic as E
from ellbeta import identities as I
from ellbeta import limits as L
from ellbeta import polytope as P
from ellbeta import rootsys as R
from ellbeta.cli import (BASE_TRIANGLE, limit_witness, suite_contiguous, suite_e0, suite_e7,
                         suite_gamma, suite_three_term)
from ellbeta.config import RunConfig

SCHEDULE = (0.2, 0.1, 0.05, 0.025)


def _worst(recs):
    return max(r["residual"] for r in recs)


def _hull_point(rng, verts, k, den=12):
    idx = rng.choice(len(verts), size=k, replace=False)
    w = [Q(int(x)) for x in rng.integers(1, den, k)]
    s = sum(w)
    return tuple(sum((wi / s * verts[i][j] for wi, i in zip(w, idx)), Q(0)) for j in range(8))


def _near_point(rng, verts):
    a = _hull_point(rng, verts, 4)
    d = [Q(int(x), 8) for x in rng.integers(-3, 4, 8)]
    d[-1] -= sum(d)
    return tuple(x + y for x, y in zip(a, d))


def _first(fn, q, m, seed, hi=0.85):
    rng = np.random.default_rng(seed)
    n = 2 * m + 6
    for _ in range(I.MAX_DRAWS):
        u = E.sample_params(np.full(n, np.log(hi)), (m + 1) * np.log(q), rng)
        try:
            return fn(u)
        except (ArithmeticError, ValueError):
            continue
    raise RuntimeError("no admissible draw")


def test_criterion_1_gamma_laws(acceptance_log):
    t0 = time.perf_counter()
    recs = suite_gamma(RunConfig(q=0.2), 100, 0.15)
    dt = time.perf_counter() - t0
    worst = _worst(recs)
    ok = len(recs) == 100 and worst < 1e-12 and dt < 1
    acceptance_log(1, ok, f"100 points, worst residual {worst:.1e}", dt)
    assert ok


def test_criterion_2_e0_evaluation(acceptance_log):
    t0 = time.perf_counter()
    recs = suite_e0(RunConfig(q=0.2), 50, 0.15)
    dt = time.perf_counter() - t0
    moduli = [abs(complex(*x)) for r in recs for x in r["params"]["t"]]
    worst = _worst(recs)
    ok = (len(recs) == 50 and worst < 1e-8 and dt < 30
          and 0.3 <= min(moduli) and max(moduli) <= 0.8 + 1e-12)
    acceptance_log(2, ok, f"50 draws, worst relative residual {worst:.1e}", dt)
    assert ok


def test_criterion_3_e7_invariance(acceptance_log):
    t0 = time.perf_counter()
    recs = suite_e7(RunConfig(q=0.2), 20, 0.15)
    dt = time.perf_counter() - t0
    non_perm = sum(1 for r in recs if "/" in r["weyl_word"][0])
    worst = _worst(recs)
    ok = len(recs) == 20 and all(r["pass"] for r in recs) and non_perm >= 5 and dt < 60
    acceptance_log(3, ok, f"20 pairs ({non_perm} non-permutation), worst {worst:.1e}", dt)
    assert ok


def test_criterion_4_p_contiguous(acceptance_log):
    t0 = time.perf_counter()
    recs = suite_contiguous(RunConfig(q=0.2), 5, 0.15)
    dt = time.perf_counter() - t0
    base = [R.fmt_vec(x) for x in BASE_TRIANGLE]
    ok = (len(recs) == 6 and recs[0].get("triangle") == base
          and all(r["pass"] for r in recs) and dt < 60)
    acceptance_log(4, ok, f"base triangle + 5 images, worst {_worst(recs):.1e}", dt)
    assert ok


def test_criterion_5_polytope(acceptance_log):
    t0 = time.perf_counter()
    counts = tuple(len(R.enumerate_roots(s)) for s in ("E8", "E7", "S"))
    verts = P.vertices("P", 1)
    std = P.bounding_inequalities("P", 1)
    e7 = P.bounding_inequalities("P", 1, form="e7")
    rng = np.random.default_rng(0)
    agree = sum(P.satisfies(a, std) == P.satisfies(a, e7)
                for a in (_near_point(rng, verts) for _ in range(1000)))
    covered = sum(bool(P.decompose(_hull_point(rng, verts, int(rng.integers(1, 9))), 1))
                  for _ in range(1000))
    dt = time.perf_counter() - t0
    ok = counts == (240, 126, 56) and len(verts) == 56 and agree == 1000 and covered == 1000 \
        and dt < 30
    acceptance_log(5, ok, f"roots {counts}, {len(verts)} vertices, membership {agree}/1000, "
                          f"decomposition {covered}/1000", dt)
    assert ok


def test_criterion_6_reference_face(acceptance_log):
    t0 = time.perf_counter()
    face = I.reference_face()
    names = sorted(face.names())
    typ = P.face_stabilizer(face)[1]
    aff = P.affine_stabilizer_type(face)
    classes = P.face_orbit(face).n_classes
    dt = time.perf_counter() - t0
    ok = (names == ["v57", "v67", "w01", "w02"] and typ == "A2xA1" and R.weyl_order(typ) == 12
          and aff == "A3xA1" and classes == 7 and dt < 10)
    acceptance_log(6, ok, f"face {names}, {typ} (order {R.weyl_order(typ)}), affine {aff}, "
                          f"{classes} classes", dt)
    assert ok


def test_criterion_7_symmetries_and_chain(acceptance_log):
    t0 = time.perf_counter()
    q = 0.3
    face = I.reference_face()
    rng = np.random.default_rng(0)
    sym = [I.draw_admissible(lambda u: I.symmetry_identity(face, w, u, q), q, 1, rng)[1]
           for w in I.HEINE_WORDS.values() for _ in range(10)]
    chains = [I.transformation_chain(face, q, rng) for _ in range(10)]
    dt = time.perf_counter() - t0
    members = {tuple(sorted(r.faces[1].names())) for c in chains for r in c} | {tuple(sorted(face.names()))}
    worst = max(r.residual for r in sym + [r for c in chains for r in c])
    ok = worst < 1e-8 and len(members) == 7 and all(len(c) == 6 for c in chains) and dt < 30
    acceptance_log(7, ok, f"{len(sym)} symmetry checks, 10 chains of {len(members)} faces, "
                          f"worst {worst:.1e}", dt)
    assert ok


def test_criterion_8_three_term_and_q_contiguous(acceptance_log):
    t0 = time.perf_counter()
    recs = suite_three_term(RunConfig(q=0.3), 10)
    quad = sorted(R.fmt_vec(x) for x in I.reference_quadruple())
    ref = {R.fmt_vec(x) for t in I.reference_triangles() for x in t}
    qc = [I.residual(I.q_contiguous_series_terms(0.3, 0.5, 0.7, 0.2, 0.4, s)) for s in "abc"]
    rng = np.random.default_rng(0)
    qc += [I.draw_admissible(lambda u: I.q_contiguous_example(u, 0.3, s), 0.3, 1, rng)[1].residual
           for s in "abc"]
    dt = time.perf_counter() - t0
    images = [r for r in recs if r.get("weyl_word")]
    ok = (len(recs) == 14 and len(images) == 10 and set(quad) == ref
          and _worst(recs) < 1e-8 and max(qc) < 1e-12 and dt < 60)
    acceptance_log(8, ok, f"{len(recs)} triangles, worst {_worst(recs):.1e}; q-contiguous worst "
                          f"{max(qc):.1e}", dt)
    assert ok


def _overlap_worst(q=0.3):
    worst = 0.0
    simp, other = P.catalog_simplicial_faces(1)
    for i, row in enumerate(simp + other):
        a = row.face.centroid()
        try:
            G = L.symbreak_formula(a)
        except ValueError:
            continue
        F = L.formula_for_point(a)
        if F.variant == G.variant:
            continue
        x, y = _first(lambda u: (L.evaluate(F, u, q), L.evaluate(G, u, q)), q, 1, i)
        worst = max(worst, abs(x - y) / abs(x))
    return worst


@pytest.mark.slow
def test_criterion_9_limits(acceptance_log):
    t0 = time.perf_counter()
    q = 1e-5
    u = limit_witness(q)
    simp, other = P.catalog_simplicial_faces(1)
    bad = []
    final = 0.0
    for row in simp + other:
        rep = L.verify_limit(row.face.centroid(), u, q, 1, SCHEDULE)
        e = rep.errors
        final = max(final, e[-1])
        if not (all(y < x for x, y in zip(e, e[1:])) and e[-1] < 1e-3):
            bad.append(row.family_tag)
    overlap = _overlap_worst()
    dt = time.perf_counter() - t0
    ok = not bad and overlap < 1e-8 and dt < 300
    acceptance_log(9, ok, f"{len(simp) + len(other)} rows, worst final error {final:.1e}, "
                          f"overlap {overlap:.1e}" + (f", failing {bad}" if bad else ""), dt)
    assert ok


def test_criterion_10_m0_catalog(acceptance_log):
    t0 = time.perf_counter()
    q = 0.3
    recs = I.evaluation_catalog_m0(q, seed=0)
    labels = {r.label for r in recs}
    worst = max(r.residual for r in recs)
    simp, other = P.catalog_simplicial_faces(0)
    w_worst = 0.0
    for i, row in enumerate(simp + other):
        a = row.face.centroid()
        s = sorted(a)
        if not (s[0] == s[1] < 0 and s[0] >= Q(-1, 2) and s[2] >= -s[0] and s[-1] <= 1 + s[0]):
            continue
        w1, w2 = _first(lambda u: (L.eval_B_sum_integral(a, u, q, 0.37 + 0.2j, 0),
                                   L.eval_B_sum_integral(a, u, q, -1.3j, 0)), q, 0, i)
        w_worst = max(w_worst, abs(w1 - w2) / abs(w1))
    dt = time.perf_counter() - t0
    ok = (all(r.passed for r in recs) and worst < 1e-8 and "1" in labels
          and "product" in labels and w_worst < 1e-9 and dt < 120)
    acceptance_log(10, ok, f"{len(recs)} rows, worst {worst:.1e}; w-independence {w_worst:.1e}", dt)
    assert ok
