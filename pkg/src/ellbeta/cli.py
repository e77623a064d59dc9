"""Command-line entry point: ``ellbeta classify | verify <suite> | catalog``."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction as Q

import numpy as np

from . import elliptic as E
from . import identities as I
from . import limits as L
from . import polytope as P
from . import rootsys as R
from .config import RunConfig, load_config
from .quadrature import QuadratureError

SCHEMA_VERSION = 1
SUITES = ("gamma", "e0", "e7", "contiguous", "limits", "symmetries", "transformations",
          "three-term", "q-contiguous", "catalog-m0")


def parse_alpha(s: str) -> tuple:
    try:
        return tuple(Q(x) for x in s.replace(" ", "").split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"alpha must be comma-separated rationals: {exc}")


def _cx(z) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def _record(kind: str, residual: float, tol: float, seed: int, **extra) -> dict:
    rec = {"schema_version": SCHEMA_VERSION, "kind": kind, "faces": [], "weyl_word": None,
           "residual": float(residual), "seed": seed, "params": {}, "tolerance": tol,
           "pass": bool(np.isfinite(residual) and residual < tol)}
    rec.update(extra)
    return rec


def _from_identity(r: I.IdentityRecord, seed: int) -> dict:
    d = r.to_json()
    d["seed"] = seed
    return d


def _skip(kind: str, tol: float, seed: int, why: str) -> dict:
    return _record(kind, float("inf"), tol, seed, error=why)


# ------------------------------------------------------------------ suites

def suite_gamma(cfg: RunConfig, trials: int, p: float) -> list[dict]:
    rng = np.random.default_rng(cfg.seed)
    q = cfg.q
    out = []
    for _ in range(trials):
        z = np.exp(rng.uniform(np.log(0.2), np.log(5)) + 1j * rng.uniform(-np.pi, np.pi))
        g = lambda x: E.elliptic_gamma(x, p, q)
        refl = abs(g(z) * g(p * q / z) - 1)
        dq = abs(g(q * z) / (g(z) * E.theta(z, p)) - 1)
        dp = abs(g(p * z) / (g(z) * E.theta(z, q)) - 1)
        out.append(_record("gamma", max(refl, dq, dp), 1e-12, cfg.seed,
                           params={"z": _cx(z), "p": _cx(p), "q": _cx(q)}))
    return out


def _draw_t(rng, n: int, total: complex, lo: float, hi: float, tries: int = 1000):
    for _ in range(tries):
        t = E.sample_params(np.full(n, np.log(hi)), np.log(abs(total)), rng)
        t = E.solve_balancing(t, total)
        if np.all(np.abs(t) >= lo) and np.all(np.abs(t) < hi + 1e-12):
            return t
    raise RuntimeError("no admissible parameters in the requested annulus")


def suite_e0(cfg: RunConfig, trials: int, p: float) -> list[dict]:
    rng = np.random.default_rng(cfg.seed)
    q = cfg.q
    out = []
    for _ in range(trials):
        t = _draw_t(rng, 6, p * q, 0.3, 0.8)
        lhs = E.elliptic_beta_integral(0, t, p, q, n_init=cfg.quad_nodes_init,
                                       n_max=cfg.quad_nodes_max)
        rhs = E.e0_evaluation_rhs(t, p, q)
        out.append(_record("evaluation", abs(lhs - rhs) / abs(rhs), cfg.tol, cfg.seed,
                           params={"t": [_cx(x) for x in t], "p": _cx(p), "q": _cx(q)}))
    return out


def _non_permutation(r) -> bool:
    return any(x.denominator != 1 for x in r)


def suite_e7(cfg: RunConfig, trials: int, p: float) -> list[dict]:
    rng = np.random.default_rng(cfg.seed)
    q = cfg.q
    roots = R.positive_e7_roots()
    half = [r for r in roots if _non_permutation(r)]
    perm = [r for r in roots if not _non_permutation(r)]
    out = []
    for i in range(trials):
        pool = half if i % 2 == 0 else perm
        for _ in range(I.MAX_DRAWS):
            r = pool[int(rng.integers(len(pool)))]
            t = _draw_t(rng, 8, (p * q) ** 2, 0.2, 0.95)
            wt = R.weyl_act_param([r], t, p * q)
            if np.all(np.abs(wt) < 1 - cfg.margin):
                break
        else:
            out.append(_skip("e7_invariance", cfg.tol, cfg.seed, "no admissible draw"))
            continue
        res = E.w_e7_invariance_residual(t, [r], p, q, n_init=cfg.quad_nodes_init,
                                         n_max=cfg.quad_nodes_max)
        out.append(_record("e7_invariance", res, cfg.tol, cfg.seed, weyl_word=[R.fmt_vec(r)],
                           params={"t": [_cx(x) for x in t], "p": _cx(p), "q": _cx(q)}))
    return out


BASE_TRIANGLE = (R.sub(R.unit(1), R.unit(0)), R.sub(R.unit(2), R.unit(0)),
                 R.sub(R.unit(3), R.unit(0)))


def contiguous_triangles(rng, images: int) -> list[tuple]:
    roots = R.enumerate_roots("E7")
    tris = [(BASE_TRIANGLE, [])]
    while len(tris) < images + 1:
        word = [roots[int(k)] for k in rng.integers(0, len(roots), 3)]
        tris.append((tuple(R.apply_word(word, x) for x in BASE_TRIANGLE), word))
    return tris


def suite_contiguous(cfg: RunConfig, trials: int, p: float) -> list[dict]:
    rng = np.random.default_rng(cfg.seed)
    q = cfg.q
    out = []
    for tri, word in contiguous_triangles(rng, trials):
        # |t p^x| < 1 - margin for every shifted evaluation point x
        lp = abs(np.log(p))
        upper = [np.log(1 - cfg.margin) + min(float(x[r]) for x in tri) * lp for r in range(8)]
        rec = None
        for _ in range(I.MAX_DRAWS):
            try:
                t = E.solve_balancing(E.sample_params(upper, 2 * np.log(abs(p * q)), rng),
                                      (p * q) ** 2)
                res = E.p_contiguous_residual(t, tri, p, q, n_init=cfg.quad_nodes_init,
                                              n_max=cfg.quad_nodes_max)
            except (ValueError, ArithmeticError, QuadratureError) as exc:
                rec = _skip("p_contiguous", cfg.tol, cfg.seed, str(exc))
                continue
            rec = _record("p_contiguous", res, cfg.tol, cfg.seed,
                          weyl_word=[R.fmt_vec(r) for r in word],
                          triangle=[R.fmt_vec(x) for x in tri],
                          params={"t": [_cx(x) for x in t], "p": _cx(p), "q": _cx(q)})
            break
        out.append(rec or _skip("p_contiguous", cfg.tol, cfg.seed, "no admissible draw"))
    return out


def limit_witness(q) -> np.ndarray:
    """Spread-out parameters of modulus about q^(1/4) with product exactly q^2."""
    n = 8
    return (abs(q) ** (2 / n) * np.exp(np.linspace(-0.15, 0.15, n)
                                       + 1j * 0.7 * np.linspace(-1, 1, n))).astype(complex)


def suite_limits(cfg: RunConfig, schedule: list[float]) -> list[dict]:
    q = cfg.limit_q
    u = limit_witness(q)
    simp, other = P.catalog_simplicial_faces(1)
    out = []
    for row in simp + other:
        alpha = row.face.centroid()
        try:
            rep = L.verify_limit(alpha, u, q, 1, schedule, tol_limit=cfg.tol_limit)
        except (E.ContourError, ArithmeticError, ValueError) as exc:
            out.append(_skip("limit", cfg.tol_limit, cfg.seed, f"{type(exc).__name__}: {exc}"))
            continue
        rec = _record("limit", rep.errors[-1], cfg.tol_limit, cfg.seed,
                      faces=[row.face.names()], label=row.family_tag,
                      alpha=R.fmt_vec(alpha), schedule=list(schedule),
                      errors=[float(e) for e in rep.errors], verdict=rep.verdict,
                      params={"u": [_cx(x) for x in u], "q": _cx(q)})
        rec["pass"] = rep.verdict == "converging"
        out.append(rec)
    return out


def suite_symmetries(cfg: RunConfig, trials: int) -> list[dict]:
    rng = np.random.default_rng(cfg.seed)
    face = I.reference_face()
    out = []
    for name, word in I.HEINE_WORDS.items():
        for _ in range(trials):
            try:
                _, r = I.draw_admissible(lambda u: I.symmetry_identity(
                    face, word, u, cfg.q, tol=cfg.tol, label=name), cfg.q, 1, rng)
                out.append(_from_identity(r, cfg.seed))
            except RuntimeError as exc:
                out.append(_skip("symmetry", cfg.tol, cfg.seed, str(exc)))
    return out


def suite_transformations(cfg: RunConfig, trials: int) -> list[dict]:
    rng = np.random.default_rng(cfg.seed)
    face = I.reference_face()
    out = []
    for _ in range(trials):
        try:
            out += [_from_identity(r, cfg.seed)
                    for r in I.transformation_chain(face, cfg.q, rng, tol=cfg.tol)]
        except RuntimeError as exc:
            out.append(_skip("transformation", cfg.tol, cfg.seed, str(exc)))
    return out


def suite_three_term(cfg: RunConfig, trials: int) -> list[dict]:
    rng = np.random.default_rng(cfg.seed)
    tris = [(t, []) for t in I.reference_triangles()] + I.weyl_image_triangles(trials, rng)
    out = []
    for tri, word in tris:
        try:
            _, r = I.draw_admissible(lambda u: I.three_term_relation(tri, u, cfg.q, tol=cfg.tol),
                                     cfg.q, 1, rng)
            r.weyl_word = word or None
            out.append(_from_identity(r, cfg.seed))
        except RuntimeError as exc:
            out.append(_skip("three_term", cfg.tol, cfg.seed, str(exc)))
    return out


def suite_q_contiguous(cfg: RunConfig) -> list[dict]:
    rng = np.random.default_rng(cfg.seed)
    a, b, c, z, qq = 0.3, 0.5, 0.7, 0.2, 0.4
    out = []
    for s in "abc":
        terms = I.q_contiguous_series_terms(a, b, c, z, qq, s)
        out.append(_record("q_contiguous", I.residual(terms), 1e-12, cfg.seed, label=f"series {s}",
                           params={"a": a, "b": b, "c": c, "z": z, "q": qq}))
    for s in "abc":
        try:
            _, r = I.draw_admissible(lambda u: I.q_contiguous_example(u, cfg.q, s), cfg.q, 1, rng)
            out.append(_from_identity(r, cfg.seed))
        except RuntimeError as exc:
            out.append(_skip("q_contiguous", 1e-12, cfg.seed, str(exc)))
    return out


def suite_catalog_m0(cfg: RunConfig) -> list[dict]:
    return [_from_identity(r, cfg.seed) for r in I.evaluation_catalog_m0(cfg.q, cfg.seed, cfg.tol)]


def run_suite(name: str, cfg: RunConfig, trials: int | None = None, p: float = 0.15,
              schedule=(0.2, 0.1, 0.05, 0.025)) -> list[dict]:
    default = {"gamma": 100, "e0": 50, "e7": 20, "contiguous": 5, "symmetries": 10,
               "transformations": 10, "three-term": 10}
    n = trials if trials is not None else default.get(name, 0)
    if name == "gamma":
        return suite_gamma(cfg, n, p)
    if name == "e0":
        return suite_e0(cfg, n, p)
    if name == "e7":
        return suite_e7(cfg, n, p)
    if name == "contiguous":
        return suite_contiguous(cfg, n, p)
    if name == "limits":
        return suite_limits(cfg, list(schedule))
    if name == "symmetries":
        return suite_symmetries(cfg, n)
    if name == "transformations":
        return suite_transformations(cfg, n)
    if name == "three-term":
        return suite_three_term(cfg, n)
    if name == "q-contiguous":
        return suite_q_contiguous(cfg)
    if name == "catalog-m0":
        return suite_catalog_m0(cfg)
    raise ValueError(f"unknown suite {name!r}")


# ---------------------------------------------------------------- commands

def _emit(obj, cfg: RunConfig, text: str) -> None:
    if cfg.output == "json":
        print(json.dumps(obj, sort_keys=True))
    else:
        print(text)


def cmd_classify(args, cfg: RunConfig) -> int:
    alpha = args.alpha
    try:
        face = P.classify_point(alpha, "P", args.m)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if not face:
        ineqs = P.bounding_inequalities("P", args.m)
        bad = [str(ineqs[i]) for i in face.violated]
        _emit({"schema_version": SCHEMA_VERSION, "alpha": R.fmt_vec(alpha), "inside": False,
               "violated": bad}, cfg, "outside the polytope; violated:\n  " + "\n  ".join(bad))
        return 1
    F = L.formula_for_face(face)
    sym = aff = None
    if args.m == 1:
        sym = P.face_stabilizer(face)[1]
        aff = P.affine_stabilizer_type(face)
    info = {"schema_version": SCHEMA_VERSION, "alpha": R.fmt_vec(alpha), "inside": True,
            "interior": face.is_interior, "vertices": face.names(), "dim": face.dim,
            "family_tag": F.tag, "symmetry_type": sym, "affine_symmetry_type": aff,
            "constraints": [str(c) for c in F.constraints]}
    text = "\n".join([
        f"face       {'interior' if face.is_interior else '{' + ', '.join(face.names()) + '}'}",
        f"dimension  {face.dim}",
        f"family     {F.tag}",
        f"symmetry   {sym}",
        f"affine     {aff}",
    ] + ([f"constraint {c}" for c in info["constraints"]]))
    _emit(info, cfg, text)
    return 0


def cmd_verify(args, cfg: RunConfig) -> int:
    sched = [float(Q(x)) for x in args.schedule.split(",")] if args.schedule else None
    kw = {"trials": args.trials, "p": args.p}
    if sched:
        kw["schedule"] = sched
    recs = run_suite(args.suite, cfg, **kw)
    ok = bool(recs) and all(r["pass"] for r in recs)
    if cfg.output == "json":
        for r in recs:
            print(json.dumps(r, sort_keys=True))
    else:
        for k, r in enumerate(recs):
            tag = r.get("label") or r["kind"]
            extra = f"  {r['verdict']}" if "verdict" in r else ""
            err = f"  ({r['error']})" if "error" in r else ""
            print(f"{k:3d} {'PASS' if r['pass'] else 'FAIL'}  {tag:<24} "
                  f"residual {r['residual']:.3e} tol {r['tolerance']:.0e}{extra}{err}")
        print(f"{sum(r['pass'] for r in recs)}/{len(recs)} passed")
    return 0 if ok else 1


def cmd_catalog(args, cfg: RunConfig) -> int:
    simp, other = P.catalog_simplicial_faces(args.m)
    golden = None
    if args.golden:
        with open(args.golden) as fh:
            golden = json.load(fh)
    diff = P.catalog_diff(args.m, golden)
    if cfg.output == "json":
        print(json.dumps({"schema_version": SCHEMA_VERSION, "m": args.m,
                          "simplicial": [r.to_json() for r in simp],
                          "non_simplicial": [r.to_json() for r in other],
                          "diff": diff}, sort_keys=True))
    else:
        for r in simp + other:
            kind = "" if r.face.is_simplicial else "  (non-simplicial)"
            pid = "" if args.m == 1 else f" {r.face.polytope_id:<4}"
            print(f"{r.dim}{pid} {r.family_tag:<16} {r.symmetry_type or '-':<8} "
                  f"{r.affine_symmetry_type or '-':<8}{kind}")
        print("golden catalog: " + ("match" if not diff else "DIFFERS"))
        for d in diff:
            print("  " + d)
    return 0 if not diff else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ellbeta", description=__doc__)
    ap.add_argument("--config", help="JSON config file (default: $ELLBETA_CONFIG)")
    ap.add_argument("--q", help="base q, e.g. 0.3, 1/3, 0.2+0.1i or 0.3@0.5")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--tol", type=float)
    ap.add_argument("--output", choices=("text", "json"))
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="face, family and symmetry of a point alpha")
    c.add_argument("--alpha", type=parse_alpha, required=True)
    c.add_argument("--m", type=int, default=1, choices=(0, 1))

    v = sub.add_parser("verify", help="run an identity suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int, dest="vseed")
    v.add_argument("--p", type=float, default=0.15, help="p for the elliptic suites")
    v.add_argument("--schedule", help="decreasing p values for the limits suite")

    k = sub.add_parser("catalog", help="face catalog and comparison with the golden data")
    k.add_argument("--m", type=int, default=1, choices=(0, 1))
    k.add_argument("--golden", help="alternative golden file to diff against")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    seed = getattr(args, "vseed", None)
    seed = seed if seed is not None else args.seed
    try:
        cfg = load_config(args.config, q=args.q, seed=seed, tol=args.tol, output=args.output)
    except (OSError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.command == "classify":
        return cmd_classify(args, cfg)
    if args.command == "verify":
        return cmd_verify(args, cfg)
    return cmd_catalog(args, cfg)


if __name__ == "__main__":
    sys.exit(main())
