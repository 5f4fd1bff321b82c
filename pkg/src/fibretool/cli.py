"""Command line front end.

Exit status: 0 when the command succeeded and its checks passed, 1 when a
check failed (the offending numbers are printed), 2 for usage and file errors.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import cxhyp, fibration, fibre, seedgen
from .geom2 import GeometryError, IDENTITY, ProjMatrix, classify, dist, translation_along
from .groups import Representation, eval_word, relation_residual
from .invariants import AreaError, rep_area
from .repfile import RepFileError, load_embedded, load_rep, save_embedded, save_rep
from .svgplot import render

DEFAULT_TOL = 1e-6
AREA_TOL = 1e-4


class UsageError(Exception):
    pass


def word_name(word, letter: str) -> str:
    return " ".join(f"{letter}_{i}" + ("" if e > 0 else "^-1") for i, e in word)


def maximal_area(kind: str, n: int) -> float:
    return (n - 4) * math.pi * (1 if kind == "H" else 2)


def thread_count(jobs: int) -> int:
    raw = os.environ.get("FIBRETOOL_THREADS")
    cap = os.cpu_count() or 1
    if raw:
        try:
            cap = int(raw)
        except ValueError:
            raise UsageError(f"FIBRETOOL_THREADS must be a positive integer, got {raw!r}") from None
        if cap < 1:
            raise UsageError(f"FIBRETOOL_THREADS must be a positive integer, got {raw!r}")
    return max(1, min(cap, jobs))


def _provenance(meta: dict, step: str) -> dict:
    out = dict(meta)
    out["provenance"] = list(meta.get("provenance", [])) + [step]
    return out


def _random_conjugator(rng: np.random.Generator) -> ProjMatrix:
    """Rotation, dilation by at most e^2, rotation: moderate condition number."""
    t, r, p = (float(x) for x in rng.uniform((0, -2, 0), (2 * math.pi, 2, 2 * math.pi)))
    return seedgen.rotation_about_i(t) @ translation_along(r) @ seedgen.rotation_about_i(p)


def _sweep_item(rep: Representation, k: int, tol: float) -> tuple[int, float, float, bool]:
    """Residual and area after a seeded random conjugation and basepoint."""
    rng = np.random.Generator(np.random.PCG64(k))
    conj = rep.conjugate(_random_conjugator(rng))
    x0 = complex(rng.normal(), math.exp(rng.normal()))
    res = relation_residual(conj)
    area = rep_area(conj, x0) if res <= tol else math.nan
    ok = res <= tol and abs(area - maximal_area(rep.kind, rep.n)) <= AREA_TOL
    return k, res, area, ok


def cmd_gen(args) -> int:
    if args.kind == "H":
        if args.seed is not None or args.magnitude is not None:
            raise UsageError("--seed/--magnitude apply to G representations only")
        rep = seedgen.symmetric_hyperelliptic(args.n)
        meta = {"provenance": [f"gen --n {args.n} --kind H"]}
    elif args.seed is None and args.magnitude is None:
        rep = seedgen.symmetric_g(args.n)
        meta = {"provenance": [f"gen --n {args.n} --kind G"]}
    else:
        spec = seedgen.SeedSpec(args.n, args.seed or 0, 1.0 if args.magnitude is None else args.magnitude)
        rep = seedgen.deformed_rep(spec)
        meta = {
            "seed": spec.seed,
            "magnitude": spec.magnitude,
            "rng": seedgen.RNG_ALGORITHM,
            "lambda": [float(x) for x in seedgen.chart_sample(spec)],
            "provenance": [f"gen --n {args.n} --kind G --seed {spec.seed} --magnitude {spec.magnitude!r}"],
        }
    save_rep(rep, args.output, meta)
    print(f"wrote {args.kind}_{args.n} representation to {args.output}")
    return 0


def cmd_verify(args) -> int:
    rep, _ = load_rep(args.file)
    tol = args.tolerance
    letter = "r" if rep.kind == "H" else "g"
    ok = True
    print(f"{rep.kind}_{rep.n}, {len(rep.images)} generators")
    for w in rep.presentation.relators():
        res = dist(eval_word(rep, w), IDENTITY)
        if res > tol:
            ok = False
            print(f"relation {word_name(w, letter)} violated: residual {res:.3e}")
    res = relation_residual(rep)
    print(f"residual {res:.3e}")
    for i, m in enumerate(rep.images, 1):
        c = classify(m)
        print(f"{letter}_{i}: {c.kind.value} (trace {m.trace:.6f})")
    if ok:
        target = maximal_area(rep.kind, rep.n)
        area = rep_area(rep, tol=tol)
        print(f"area {area:.6f} (maximal {target:.6f})")
        if abs(area - target) > AREA_TOL:
            ok = False
            print(f"area differs from the maximal value by {abs(area - target):.3e}")
    if ok and args.sweep:
        with ThreadPoolExecutor(max_workers=thread_count(args.sweep)) as pool:
            results = list(pool.map(lambda k: _sweep_item(rep, k, tol), range(args.sweep)))
        bad = [r for r in results if not r[3]]
        worst = max(r[1] for r in results)
        print(f"sweep {args.sweep}: worst residual {worst:.3e}, {len(bad)} failed")
        for k, res, area, _ in bad:
            print(f"  sweep item {k}: residual {res:.3e}, area {area:.6f}")
        ok = not bad
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def cmd_fiber(args) -> int:
    rep, meta = load_rep(args.file)
    out = fibration.pushforward(rep, args.which)
    save_rep(out, args.output, _provenance(meta, f"fiber --which {args.which}"))
    print(f"wrote pi_{args.which} image to {args.output}")
    return 0


def cmd_recon(args) -> int:
    r1, meta = load_rep(args.file1)
    r2, _ = load_rep(args.file2)
    out = fibre.reconstruct(r1, r2)
    save_rep(out, args.output, _provenance(meta, "recon"))
    print(f"wrote reconstructed G_{out.n} representation to {args.output}")
    return 0


def cmd_roundtrip(args) -> int:
    rep, _ = load_rep(args.file)
    if rep.kind != "G":
        raise UsageError("roundtrip needs a G representation")
    back = fibre.reconstruct(fibration.pushforward(rep, 1), fibration.pushforward(rep, 2))
    dev = max(dist(a, b) for a, b in zip(back.images, rep.images))
    print(f"max deviation {dev:.3e}")
    ok = dev < args.tolerance
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def _parse_lambda(text: str) -> list[float]:
    if not text.strip():
        return []
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"--lambda expects comma-separated numbers, got {text!r}") from None
    if not all(math.isfinite(v) for v in vals):
        raise UsageError("--lambda values must be finite")
    return vals


def cmd_deform(args) -> int:
    rep, meta = load_rep(args.file)
    base = fibration.pushforward(rep, 1) if rep.kind == "G" else rep
    lam = _parse_lambda(args.lam)
    if len(lam) != rep.n - 6:
        raise UsageError(f"n = {rep.n} needs {rep.n - 6} chart coordinates, got {len(lam)}")
    out = fibre.fibre_point(base, lam)
    save_rep(out, args.output, _provenance(meta, f"deform --lambda {args.lam}"))
    print(f"wrote G_{out.n} representation to {args.output}")
    return 0


def cmd_embed(args) -> int:
    rep, meta = load_rep(args.file)
    save_embedded(cxhyp.embed_fuchsian(rep), args.output, _provenance(meta, "embed"))
    print(f"wrote embedded {rep.kind}_{rep.n} representation to {args.output}")
    return 0


def cmd_toledo(args) -> int:
    rep3, _ = load_embedded(args.file)
    res = cxhyp.embedded_residual(rep3)
    print(f"residual up to phase {res:.3e}")
    if res > args.tolerance:
        print("FAIL")
        return 1
    value = cxhyp.toledo_invariant(rep3, tol=args.tolerance)
    print(f"toledo {value:.6f}")
    if rep3.kind == "G":
        target = (rep3.n - 4) * math.pi / 2
        print(f"maximal value (n-4)pi/2 = {target:.6f}: {'attained' if abs(abs(value) - target) < 1e-5 else 'not attained'}")
    print("PASS")
    return 0


def cmd_plot(args) -> int:
    rep, _ = load_rep(args.file)
    svg = render(rep, title=os.path.basename(args.file))
    try:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(svg)
    except OSError as exc:
        raise RepFileError(f"{args.output}: {exc}") from exc
    print(f"wrote {args.output}")
    return 0


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fibretool", description="Maximal-area representations and their fibrations.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a seed or a deformed representation")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--kind", choices=("H", "G"), default="G")
    g.add_argument("--seed", type=int)
    g.add_argument("--magnitude", type=float)
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="check relations, area and generator types")
    v.add_argument("file")
    v.add_argument("--tolerance", type=float, default=DEFAULT_TOL)
    v.add_argument("--sweep", type=_positive_int, default=0, metavar="K",
                   help="also check K random conjugates and basepoints")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("fiber", help="hyperelliptic image pi_1 or pi_2 of a G representation")
    f.add_argument("file")
    f.add_argument("--which", type=int, choices=(1, 2), required=True)
    f.add_argument("-o", "--output", required=True)
    f.set_defaults(func=cmd_fiber)

    r = sub.add_parser("recon", help="rebuild a G representation from its two images")
    r.add_argument("file1")
    r.add_argument("file2")
    r.add_argument("-o", "--output", required=True)
    r.set_defaults(func=cmd_recon)

    t = sub.add_parser("roundtrip", help="project and reconstruct, report the deviation")
    t.add_argument("file")
    t.add_argument("--tolerance", type=float, default=DEFAULT_TOL)
    t.set_defaults(func=cmd_roundtrip)

    d = sub.add_parser("deform", help="fibre point over pi_1 of FILE at the given chart coordinates")
    d.add_argument("file")
    d.add_argument("--lambda", dest="lam", required=True, metavar="V1,V2,...")
    d.add_argument("-o", "--output", required=True)
    d.set_defaults(func=cmd_deform)

    e = sub.add_parser("embed", help="embed into the isometries of the complex hyperbolic plane")
    e.add_argument("file")
    e.add_argument("-o", "--output", required=True)
    e.set_defaults(func=cmd_embed)

    tl = sub.add_parser("toledo", help="Toledo invariant of an embedded representation")
    tl.add_argument("file")
    tl.add_argument("--tolerance", type=float, default=DEFAULT_TOL)
    tl.set_defaults(func=cmd_toledo)

    pl = sub.add_parser("plot", help="disc-model SVG picture")
    pl.add_argument("file")
    pl.add_argument("-o", "--output", required=True)
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, RepFileError) as exc:
        print(f"fibretool: error: {exc}", file=sys.stderr)
        return 2
    except (GeometryError, AreaError, ValueError, RuntimeError) as exc:
        print(f"fibretool: check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
