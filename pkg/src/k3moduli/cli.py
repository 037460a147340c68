"""Command-line interface: ``k3moduli {lattice,cone,moduli,autoeq} ...``.

Every subcommand prints one JSON report on stdout. Exit codes: 0 success,
2 invalid input (diagnostic on stderr), 3 prover gave up (Unknown).
"""
from __future__ import annotations

import argparse
import json
import shlex
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import cones, lattice, moduli
from .autoeq import ProofTrace, RuleSet, normalize, parse, prove_equal, render, replay
from .errors import K3ModuliError
from .lattice import DivisorClass, K3Context, MukaiVector
from .report import Report, cite, dumps

EXIT_OK, EXIT_INPUT, EXIT_UNKNOWN = 0, 2, 3

# Defaults live here rather than in argparse so that --config can fill gaps
# while explicit flags still win.
DEFAULTS = {
    "depth": 6,
    "reading": "a",
    "format": "json",
    "samples": 20,
    "n": 5,
    "bound": 10_000,
    "max_steps": None,
}
AUTOEQ_DEFAULT_G = 2

CITE_PAIRING = cite("Mukai lattice", "<(r,a,s),(r',a',s')> = (2g-2)aa' - rs' - r's")
CITE_REFLECTION = cite("spherical twist around O_S(-1)", "v ↦ v + <v, s> s,  s = v(O_S(-1)) = (1,-1,g)")
CITE_THETA = cite("NS(Hilb^g) basis", "H~ = θ(0,-1,0),  B = θ(-1,0,1-g)")
CITE_MOVABLE = cite("movable cone of Hilb^g", "Mov = <H~, H~ - B>, flop wall H~ - (2g-2)/(2g-1) B")
CITE_BM = cite("ample family on Picbar^{-g}",
               "w = (2g-2)t (1, -(2g-1)/(2g-2), g-(g-1)t^2) ↦ (1 + 1/(2(g-1)^2 t^2)) H~ - B, t > 1/sqrt(g-1)")
CITE_PELL = cite("nef boundary via Pell", "X^2 - dY^2 = 5, Nef = <H~, H~ - 2d(y1/x1) B>")
CITE_DIM = cite("moduli dimension", "dim M(v) = <v,v> + 2")


class InputError(K3ModuliError):
    pass


# argument helpers -----------------------------------------------------------

def _ctx(args) -> K3Context:
    if args.g is None:
        raise InputError("--g is required")
    return K3Context(args.g)


def _vector(text, flag) -> MukaiVector:
    if text is None:
        raise InputError(f"{flag} is required")
    try:
        return MukaiVector.parse(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{flag}: {exc}") from None


def _divisor(text) -> DivisorClass:
    if text is None:
        raise InputError("--d is required")
    try:
        return DivisorClass.parse(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"--d: {exc}") from None


def _rational(text, flag) -> Fraction:
    if text is None:
        raise InputError(f"{flag} is required")
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{flag}: {exc}") from None


def _range(text) -> tuple[int, int]:
    if text is None:
        raise InputError("--range is required")
    try:
        lo, hi = str(text).split("..")
        return int(lo), int(hi)
    except ValueError:
        raise InputError(f"--range must look like a..b, got {text!r}") from None


def _kind(args) -> tuple[str, int]:
    if (args.picbar is None) == (args.hilb is None):
        raise InputError("give exactly one of --picbar D or --hilb N")
    return (moduli.PICBAR, args.picbar) if args.picbar is not None else (moduli.HILB, args.hilb)


# lattice ---------------------------------------------------------------------

def cmd_lattice(args) -> Report:
    ctx = _ctx(args)
    op = args.op
    inputs = {"g": ctx.g}
    if op == "pair":
        v, w = _vector(args.v, "--v"), _vector(args.w, "--w")
        inputs.update(v=v, w=w)
        return Report("lattice pair", inputs, {"value": lattice.pair(ctx, v, w)},
                      {"value": "computed: exact Mukai pairing"}, [CITE_PAIRING])
    if op == "reflect":
        v = _vector(args.v, "--v")
        s = _vector(args.s, "--s") if args.s is not None else lattice.s_twist(ctx)
        inputs.update(v=v, s=s)
        out = lattice.reflect(ctx, v, s)
        return Report("lattice reflect", inputs,
                      {"result": out, "pairing_with_s": lattice.pair(ctx, v, s)},
                      {"result": "computed: reflection v + <v,s>s",
                       "pairing_with_s": "computed: exact Mukai pairing"},
                      [CITE_REFLECTION, CITE_PAIRING])
    if op == "perp":
        v = _vector(args.v, "--v")
        inputs.update(v=v)
        basis = lattice.perp_basis(ctx, v)
        lat = lattice.gram(ctx, basis)
        det, sig = lattice.lattice_invariants(lat)
        return Report("lattice perp", inputs,
                      {"basis": list(basis), "gram": lat, "det": det, "signature": list(sig)},
                      {"basis": "computed: Hermite-reduced integer kernel",
                       "det": "computed: exact determinant",
                       "signature": "computed: exact congruence diagonalization"},
                      [CITE_PAIRING])
    if op == "theta":
        u = _vector(args.v, "--v")
        inputs.update(v=u)
        D = lattice.theta_coordinates(ctx, u)
        return Report("lattice theta", inputs,
                      {"class": D, "bb_square": cones.bb_square(ctx, D),
                       "label": cones.classify_divisor(ctx, D) if (D.x, D.y) != (0, 0) else None},
                      {"class": "computed: coordinates in (H~, B)",
                       "bb_square": "computed: (2g-2)(x^2-y^2)"},
                      [CITE_THETA])
    if op == "dim":
        v = _vector(args.v, "--v")
        inputs.update(v=v)
        return Report("lattice dim", inputs, {"dim": lattice.moduli_dimension(ctx, v)},
                      {"dim": "computed: <v,v> + 2"}, [CITE_DIM])
    if op == "line-bundle":
        if args.k is None:
            raise InputError("--k is required")
        inputs.update(k=args.k)
        return Report("lattice line-bundle", inputs,
                      {"mukai_vector": lattice.mukai_vector_of_line_bundle(ctx, args.k)},
                      {"mukai_vector": "computed: (1, k, (g-1)k^2 + 1)"}, [CITE_REFLECTION])
    raise InputError(f"unknown lattice operation {op!r}")


# cone --------------------------------------------------------------------------

def _bm_samples(ctx: K3Context, samples: int) -> list[Fraction]:
    t0sq = cones.bm_threshold(ctx)
    return [t0sq + Fraction(k, 4) for k in range(1, samples + 1)]


def cmd_cone(args) -> Report | str:
    op = args.op
    if op == "pell":
        if args.d is None:
            raise InputError("--d is required")
        d = int(args.d)
        sol = cones.pell_min_solution(d, args.n, args.bound)
        res = {"exists": sol.exists, "certificate": sol.certificate,
               "solution": [sol.x1, sol.y1] if sol.exists else None}
        return Report("cone pell", {"d": d, "N": args.n, "search_bound": args.bound}, res,
                      {"solution": "brute force over y <= search_bound",
                       "certificate": "residue classes mod 3, 4, 5, 8"}, [CITE_PELL])
    ctx = _ctx(args)
    inputs = {"g": ctx.g}
    if op == "classify":
        D = _divisor(args.d)
        inputs.update(d=D)
        return Report("cone classify", inputs,
                      {"label": cones.classify_divisor(ctx, D), "bb_square": cones.bb_square(ctx, D)},
                      {"label": "computed: slope comparison", "bb_square": "computed: (2g-2)(x^2-y^2)"},
                      [CITE_MOVABLE])
    if op == "bb":
        D = _divisor(args.d)
        inputs.update(d=D)
        return Report("cone bb", inputs, {"bb_square": cones.bb_square(ctx, D)},
                      {"bb_square": "computed: (2g-2)(x^2-y^2)"}, [CITE_MOVABLE])
    if op == "movable":
        low, high = cones.movable_cone(ctx)
        return Report("cone movable", inputs,
                      {"ray_low": low, "ray_high": high, "flop_wall": cones.flop_wall(ctx),
                       "isotropic_ray": high, "bb_square_high": cones.bb_square(ctx, high)},
                      {"ray_low": "closed form", "ray_high": "closed form",
                       "flop_wall": "closed form (2g-2)/(2g-1)"}, [CITE_MOVABLE])
    if op == "bm":
        tsq = _rational(args.tsq, "--tsq")
        inputs.update(tsq=tsq)
        D = cones.bm_ample_class(ctx, tsq)
        return Report("cone bm", inputs,
                      {"class": D, "closed_form": cones.bm_closed_form(ctx, tsq),
                       "label": cones.classify_divisor(ctx, D),
                       "w": cones.bm_w_vector(ctx, tsq)},
                      {"class": "computed: w, reflection through s, theta coordinates",
                       "closed_form": "closed form (1 + 1/(2(g-1)^2 t^2), 1)"}, [CITE_BM, CITE_REFLECTION])
    if op == "footnote":
        if args.d is None:
            raise InputError("--d is required")
        d = int(args.d)
        inputs.update(d=d)
        D = cones.footnote_nef_boundary(ctx, d, args.bound)
        return Report("cone footnote", inputs,
                      {"boundary": D, "normalization": "unresolved: foreign divisor convention",
                       "flop_wall": cones.flop_wall(ctx)},
                      {"boundary": "computed: (1, 2d*y1/x1) from the minimal Pell solution"}, [CITE_PELL])
    if op == "report":
        samples = _bm_samples(ctx, args.samples)
        curve = cones.bm_curve(ctx, samples)
        if args.format == "plotdata":
            lines = ["# tsq slope"] + [f"{t} {s}" for t, s in curve]
            return "\n".join(lines) + "\n"
        table = cones.chamber_table(ctx)
        walls = [row["slope"] for row in table if row["kind"] == "wall"]
        return Report("cone report", inputs,
                      {"walls": walls, "chambers": table,
                       "movable_cone": list(cones.movable_cone(ctx)),
                       "bm_threshold_tsq": cones.bm_threshold(ctx),
                       "bm_limit": cones.bm_limit_class(ctx).normalized(),
                       "bm_curve": [[t, s] for t, s in curve]},
                      {"walls": "closed form", "bm_curve": "computed: exact ample family",
                       "bm_limit": "computed: chain evaluated at t^2 = 1/(g-1)"},
                      [CITE_MOVABLE, CITE_BM])
    raise InputError(f"unknown cone operation {op!r}")


# moduli ------------------------------------------------------------------------

def cmd_moduli(args) -> Report:
    ctx = _ctx(args)
    op = args.op
    inputs = {"g": ctx.g}
    brauer = cite("Brauer class bound", moduli.QUOTE_BRAUER_BOUND)
    if op in ("describe", "fine"):
        kind, idx = _kind(args)
        inputs.update(kind=kind, index=idx)
        desc = moduli.describe(ctx, kind, idx)
        return Report(f"moduli {op}", inputs, {"descriptor": desc, "fine": moduli.is_certified_fine(desc)},
                      {"descriptor": "computed: gcd(2g-2, |d+1-g|) and <v,v>+2"}, [brauer, CITE_DIM])
    if op == "ns":
        kind, idx = _kind(args)
        inputs.update(kind=kind, index=idx)
        desc = moduli.describe(ctx, kind, idx)
        lat = moduli.ns_lattice(ctx, desc)
        det, sig = lattice.lattice_invariants(lat)
        return Report("moduli ns", inputs, {"gram": lat, "det": det, "signature": list(sig)},
                      {"det": "computed: Gram of v^perp"}, [CITE_PAIRING])
    if op == "graph":
        lo, hi = _range(args.range)
        inputs.update(range=f"{lo}..{hi}")
        graph = moduli.equivalence_graph(ctx, lo, hi)
        pairs = [[e.left.index, e.right.index] for e in moduli.certified_equivalences(ctx, lo, hi)
                 if e.tag == "untwisted_pair"]
        return Report("moduli graph", inputs, {**graph, "untwisted_pairs": pairs},
                      {"edges": "certified by Brauer-bound divisibility"},
                      [cite("twisted FM equivalence", moduli.QUOTE_FM_TYPING),
                       cite("special cases", moduli.QUOTE_TWIST_TO_DEGREE_ZERO),
                       cite("special cases", moduli.QUOTE_UNTWISTED_PAIR), brauer])
    if op == "theorem-b":
        cert = moduli.theorem_b_certificate(ctx)
        return Report("moduli theorem-b", inputs, cert.to_json(),
                      {"discX": "computed: det Gram of v(Picbar^0)^perp",
                       "discY": "computed: det Gram of v(Picbar^{g-1})^perp"},
                      [cite("special cases", moduli.QUOTE_UNTWISTED_PAIR),
                       cite("Picard discriminants", "disc Pic(Picbar^0) = -4, disc Pic(Picbar^{g-1}) = -1")])
    raise InputError(f"unknown moduli operation {op!r}")


# autoeq ------------------------------------------------------------------------

def cmd_autoeq(args) -> Report:
    g = args.g if args.g is not None else AUTOEQ_DEFAULT_G
    ctx = K3Context(g)
    rules = RuleSet(ctx, args.reading)
    op = args.op
    exprs = args.exprs
    if op in ("parse", "normalize"):
        if len(exprs) != 1:
            raise InputError(f"autoeq {op} takes exactly one expression")
        e = parse(exprs[0], ctx)
        inputs = {"g": g, "expr": exprs[0]}
        if op == "parse":
            return Report("autoeq parse", inputs,
                          {"expr": render(e), "source": str(e.source), "target": str(e.target),
                           "is_equivalence": e.is_equivalence, "is_pfunctor": e.is_pfunctor},
                          {"expr": "parsed and type-checked"})
        res = normalize(rules, e, args.max_steps)
        return Report("autoeq normalize", inputs,
                      {"expr": render(res.expr), "normalized": res.normalized,
                       "steps": [s.to_json() for s in res.steps]},
                      {"expr": "oriented rules R1, R2, R6, leftmost-innermost"})
    if op == "prove":
        if len(exprs) != 2:
            raise InputError("autoeq prove takes two expressions")
        lhs, rhs = parse(exprs[0], ctx), parse(exprs[1], ctx)
        inputs = {"g": g, "lhs": exprs[0], "rhs": exprs[1], "depth": args.depth, "reading": args.reading}
        out = prove_equal(rules, lhs, rhs, args.depth)
        if isinstance(out, ProofTrace):
            return Report("autoeq prove", inputs,
                          {"proved": True, "trace": out.to_json(), "length": len(out),
                           "replayed": replay(rules, out)},
                          {"trace": "bidirectional rewrite search, replay-checked"},
                          [cite(r.name, r.quote) for r in rules.rules
                           if r.rule_id in {s.rule_id for s in out.steps}])
        return Report("autoeq prove", inputs,
                      {"proved": False, "unknown": out.reason, "explored": out.explored},
                      {"unknown": "search budget or depth exhausted"}, status="unknown")
    raise InputError(f"unknown autoeq operation {op!r}")


# parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="k3moduli", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="JSON file whose keys mirror long flags; flags win")
    p.add_argument("--batch", help="file with one command line per row, run concurrently")
    sub = p.add_subparsers(dest="group")

    def common(sp):
        sp.add_argument("--g", type=int)
        sp.add_argument("--config", help=argparse.SUPPRESS, default=argparse.SUPPRESS)

    lat = sub.add_parser("lattice", help="Mukai lattice arithmetic")
    lat.add_argument("op", choices=["pair", "reflect", "perp", "theta", "dim", "line-bundle"])
    common(lat)
    lat.add_argument("--v")
    lat.add_argument("--w")
    lat.add_argument("--s")
    lat.add_argument("--k", type=int)

    cone = sub.add_parser("cone", help="movable cone, ample family, Pell")
    cone.add_argument("op", choices=["classify", "bb", "movable", "bm", "footnote", "report", "pell"])
    common(cone)
    cone.add_argument("--d", help="divisor x,y (classify, bb) or integer d (pell, footnote)")
    cone.add_argument("--tsq")
    cone.add_argument("--n", type=int, help="right-hand side N of X^2 - dY^2 = N")
    cone.add_argument("--bound", type=int)
    cone.add_argument("--samples", type=int)
    cone.add_argument("--format", choices=["json", "plotdata"])

    mod = sub.add_parser("moduli", help="moduli descriptors, equivalence graph, discriminants")
    mod.add_argument("op", choices=["describe", "fine", "ns", "graph", "theorem-b"])
    common(mod)
    mod.add_argument("--picbar", type=int)
    mod.add_argument("--hilb", type=int)
    mod.add_argument("--range")

    ae = sub.add_parser("autoeq", help="functor expression calculus")
    ae.add_argument("op", choices=["parse", "normalize", "prove"])
    ae.add_argument("exprs", nargs="*")
    common(ae)
    ae.add_argument("--depth", type=int)
    ae.add_argument("--reading", choices=["a", "b"])
    ae.add_argument("--max-steps", type=int, dest="max_steps")
    return p


COMMANDS = {"lattice": cmd_lattice, "cone": cmd_cone, "moduli": cmd_moduli, "autoeq": cmd_autoeq}


def _apply_defaults(args, config: dict):
    for key, value in config.items():
        key = key.replace("-", "_")
        if getattr(args, key, None) is None and hasattr(args, key):
            setattr(args, key, value)
    for key, value in DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    return args


def _load_config(path) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"--config: {exc}") from None
    if not isinstance(data, dict):
        raise InputError("--config must hold a JSON object")
    return data


def run(argv, config: dict | None = None) -> tuple[int, str, str]:
    """Run one command; returns (exit code, stdout text, stderr text)."""
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        # positional expressions may follow options: autoeq prove --g 3 "A" "B"
        if extra and getattr(args, "group", None) == "autoeq" and not any(x.startswith("--") for x in extra):
            args.exprs = list(args.exprs) + extra
        elif extra:
            parser.error(f"unrecognized arguments: {' '.join(extra)}")
    except SystemExit as exc:
        return int(exc.code or 0), "", ""
    try:
        if config is None:
            config = _load_config(getattr(args, "config", None))
        if args.group is None:
            return EXIT_INPUT, "", "a command group is required (lattice, cone, moduli, autoeq)\n"
        args = _apply_defaults(args, config)
        out = COMMANDS[args.group](args)
    except (K3ModuliError, ValueError, ArithmeticError) as exc:
        return EXIT_INPUT, "", f"error: {type(exc).__name__}: {exc}\n"
    if isinstance(out, str):
        return EXIT_OK, out, ""
    code = EXIT_UNKNOWN if out.status == "unknown" else EXIT_OK
    return code, out.dumps(), ""


def run_batch(path: str, config: dict) -> tuple[int, str, str]:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    except OSError as exc:
        return EXIT_INPUT, "", f"--batch: {exc}\n"
    with ThreadPoolExecutor() as pool:
        results = list(pool.map(lambda ln: run(shlex.split(ln), config), lines))
    entries, codes, errs = [], [], []
    for line, (code, out, err) in zip(lines, results):
        codes.append(code)
        try:
            payload = json.loads(out) if out else None
        except json.JSONDecodeError:
            payload = out  # plot data
        entries.append({"line": line, "exit_code": code, "report": payload,
                        "error": err.strip() or None})
        errs.append(err)
    worst = EXIT_INPUT if EXIT_INPUT in codes else (EXIT_UNKNOWN if EXIT_UNKNOWN in codes else EXIT_OK)
    return worst, dumps(entries), "".join(errs)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    pre.add_argument("--batch")
    known, _ = pre.parse_known_args(argv)
    if known.batch:
        try:
            config = _load_config(known.config)
        except InputError as exc:
            sys.stderr.write(f"error: {exc}\n")
            return EXIT_INPUT
        code, out, err = run_batch(known.batch, config)
    else:
        code, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
