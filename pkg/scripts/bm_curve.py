"""Exact (t^2, slope) samples of the ample family on Picbar^{-g}.

Writes one whitespace-separated table per genus, ready for gnuplot or pandas.
"""
import argparse
from fractions import Fraction
from pathlib import Path

from k3moduli.cones import bm_curve, bm_limit_class, bm_threshold, flop_wall_slope
from k3moduli.lattice import K3Context


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--g", type=int, nargs="+", default=[2, 3, 5])
    ap.add_argument("--samples", type=int, default=40)
    ap.add_argument("--step", type=Fraction, default=Fraction(1, 4))
    ap.add_argument("--out", type=Path, help="directory for bm_g<g>.dat files (default: stdout)")
    args = ap.parse_args()

    for g in args.g:
        ctx = K3Context(g)
        t0 = bm_threshold(ctx)
        rows = bm_curve(ctx, [t0 + k * args.step for k in range(1, args.samples + 1)])
        lim = bm_limit_class(ctx).normalized()
        lines = [f"# g={g} threshold t^2={t0} limit slope={lim.y} flop wall={flop_wall_slope(ctx)}",
                 "# tsq slope slope_float"]
        lines += [f"{t} {s} {float(s):.8f}" for t, s in rows]
        text = "\n".join(lines) + "\n"
        if args.out:
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / f"bm_g{g}.dat").write_text(text)
        else:
            print(text)


if __name__ == "__main__":
    main()
