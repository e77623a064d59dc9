import json
from fractions import Fraction as Q

import numpy as np
import pytest
from scipy.optimize import linprog

from ellbeta import polytope as P
from ellbeta import rootsys as R

S7_CENTROID = R.parse_vec("-1/4,0,0,1/4,1/4,1/2,1/2,3/4")


def random_hull_point(rng, verts, k=4, den=12):
    idx = rng.choice(len(verts), size=k, replace=False)
    w = [Q(int(x), 1) for x in rng.integers(1, den, k)]
    s = sum(w)
    return tuple(sum((wi / s * verts[i][j] for wi, i in zip(w, idx)), Q(0)) for j in range(8))


def random_nearby_point(rng, verts):
    a = random_hull_point(rng, verts)
    d = [Q(int(x), 8) for x in rng.integers(-3, 4, 8)]
    d[-1] -= sum(d)
    return tuple(x + y for x, y in zip(a, d))


def in_hull_lp(alpha, verts):
    V = np.array([[float(x) for x in v] for v in verts]).T
    A = np.vstack([V, np.ones(V.shape[1])])
    b = np.concatenate([[float(x) for x in alpha], [1.0]])
    res = linprog(np.zeros(V.shape[1]), A_eq=A, b_eq=b, bounds=[(0, None)] * V.shape[1],
                  method="highs")
    return res.status == 0


def test_vertex_counts():
    assert len(P.vertices("P", 1)) == 56
    assert len(P.vertices("PI", 1)) == 28
    assert len(P.vertices("Pext", 0)) == 12


def test_vertex_names():
    names = {P.vertex_name(v, 1) for v in P.vertices("P", 1)}
    assert {"v01", "w01", "v67", "w67"} <= names
    assert len(names) == 56


def test_inequality_examples():
    pi = P.bounding_inequalities("PI", 1)
    assert len(pi) == 16
    assert len(P.bounding_inequalities("Pext", 0)) == 15
    assert len(P.norm4_vectors()) == 576
    assert all(R.dot(m, m) == 4 and R.dot(m, R.rho()) == 1 for m in P.norm4_vectors())


def test_two_descriptions_agree_on_random_points():
    rng = np.random.default_rng(5)
    verts = P.vertices("P", 1)
    std = P.bounding_inequalities("P", 1)
    e7 = P.bounding_inequalities("P", 1, form="e7")
    inside = 0
    for _ in range(1000):
        a = random_nearby_point(rng, verts)
        x, y = P.satisfies(a, std), P.satisfies(a, e7)
        assert x == y
        inside += x
    assert 100 < inside < 900


def test_inequalities_match_lp_hull_membership():
    rng = np.random.default_rng(6)
    verts = P.vertices("P", 1)
    std = P.bounding_inequalities("P", 1)
    for _ in range(60):
        a = random_nearby_point(rng, verts)
        assert P.satisfies(a, std) == in_hull_lp(a, verts)


def test_every_vertex_is_tight_somewhere():
    for v in P.vertices("P", 1):
        f = P.classify_point(v, "P", 1)
        assert f.dim == 0 and f.vertices == (v,)


def test_classify_examples():
    f = P.classify_point(S7_CENTROID, "P", 1)
    assert sorted(f.names()) == ["v57", "v67", "w01", "w02"]
    assert f.dim == 3 and f.is_simplicial
    f = P.classify_point(R.e_sum([0, 1]), "P", 1)
    assert f.names() == ["v01"]
    f = P.classify_point((Q(1, 4),) * 8, "P", 1)
    assert f.is_interior and f.dim == 7


def test_classify_outside_and_bad_input():
    out = P.classify_point((Q(2),) + (Q(0),) * 7, "P", 1)
    assert not out and out.violated
    with pytest.raises(ValueError):
        P.classify_point((Q(1, 4),) * 7, "P", 1)
    with pytest.raises(ValueError):
        P.classify_point((Q(1, 3),) * 8, "P", 1)


def test_decomposition_covers_random_points():
    rng = np.random.default_rng(7)
    verts = P.vertices("P", 1)
    for _ in range(1000):
        a = random_hull_point(rng, verts, k=int(rng.integers(1, 9)))
        assert P.decompose(a, 1)


def test_decomposition_examples():
    kinds = [m.kind for m in P.decompose((Q(1, 4),) * 8)]
    assert kinds[0] == "PI"
    w01 = [v for v in P.vertices("P", 1) if P.vertex_name(v, 1) == "w01"][0]
    kinds = {m.kind for m in P.decompose(w01)}
    assert {"PII", "PIII"} <= kinds
    d = P.decompose(S7_CENTROID)
    assert any(m.kind == "PIII" and set(m.sigma[:3]) == {0, 1, 2} for m in d)


def test_reference_face_symmetry():
    f = P.classify_point(S7_CENTROID, "P", 1)
    roots, typ = P.face_stabilizer(f)
    assert typ == "A2xA1" and R.weyl_order(typ) == 12
    expect = set()
    for r in ("3-4", "rho-0347", "rho-0356", "rho-0456"):
        if r.startswith("rho"):
            a = R.sub(R.rho(), R.e_sum(int(c) for c in r[4:]))
        else:
            a = R.sub(R.unit(3), R.unit(4))
        expect |= {a, R.neg(a)}
    assert set(roots) == expect
    assert P.affine_stabilizer_type(f) == "A3xA1"


def test_reference_face_orbit():
    f = P.classify_point(S7_CENTROID, "P", 1)
    orb = P.face_orbit(f)
    assert orb.n_classes == 7
    assert f.mask in orb.masks


def test_vertex_orbit_is_everything():
    f = P.classify_point(R.e_sum([0, 1]), "P", 1)
    assert len(P.face_orbit(f).masks) == 56


def test_interior_symmetry_is_everything():
    f = P.classify_point((Q(1, 4),) * 8, "P", 1)
    assert P.face_stabilizer(f)[1] == "E7"
    assert P.affine_stabilizer_type(f) == "E7"


def test_two_orbits_of_five_simplices():
    simp, _ = P.catalog_simplicial_faces(1)
    five = [r.face for r in simp if r.dim == 5]
    joined = {P.bounds_top_simplex(f) for f in five}
    assert joined == {True, False}
    orbits = {P.face_orbit(f).masks for f in five}
    assert len(orbits) == 2


def test_orbit_classes_share_symmetry_type():
    f = P.classify_point(S7_CENTROID, "P", 1)
    types = {P.face_stabilizer(g)[1] for g in P.face_orbit(f).faces()[:40]}
    assert types == {"A2xA1"}


def test_catalog_m1_matches_golden():
    assert P.catalog_diff(1) == []
    simp, _ = P.catalog_simplicial_faces(1)
    row = [r for r in simp if r.family_tag == "2phi1"]
    assert len(row) == 1
    assert (row[0].symmetry_type, row[0].affine_symmetry_type) == ("A2xA1", "A3xA1")


def test_catalog_m0_matches_golden():
    assert P.catalog_diff(0) == []


def test_corrupted_golden_is_reported():
    g = P.load_golden(1)
    g["simplicial"][0]["symmetry"] = "D4"
    assert P.catalog_diff(1, g)
    g = P.load_golden(0)
    g["simplicial"].pop()
    assert P.catalog_diff(0, g)


def test_golden_files_are_versioned():
    for m in (0, 1):
        g = P.load_golden(m)
        assert g["schema_version"] == 1 and g["m"] == m
        json.dumps(g)


def test_deep_point_stays_in_face():
    simp, _ = P.catalog_simplicial_faces(1)
    for row in simp[::5]:
        f = row.face
        a = f.deep_point()
        assert P.classify_point(a, "P", 1).mask == f.mask
        assert f.min_slack(a) >= f.min_slack(f.centroid())
