"""Minimal positive solutions of X^2 - dY^2 = N with residue obstructions."""
import argparse

from k3moduli.cones import footnote_nef_boundary, pell_min_solution
from k3moduli.errors import NoSolution
from k3moduli.lattice import K3Context


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dmax", type=int, default=50)
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--bound", type=int, default=10_000)
    args = ap.parse_args()

    ctx = K3Context(2)  # the boundary formula does not depend on g
    print("d\tx1\ty1\tboundary_slope\tcertificate")
    for d in range(1, args.dmax + 1):
        sol = pell_min_solution(d, args.n, args.bound)
        if sol.exists:
            slope = footnote_nef_boundary(ctx, d, args.bound).y if args.n == 5 else "-"
            print(f"{d}\t{sol.x1}\t{sol.y1}\t{slope}\t-")
        else:
            print(f"{d}\t-\t-\t-\t{sol.certificate or f'none with y <= {args.bound}'}")


if __name__ == "__main__":
    main()
