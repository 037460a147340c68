"""Discriminants of NS(Picbar^0) and NS(Picbar^{g-1}) over a range of genera."""
import argparse
import time

from k3moduli.lattice import K3Context
from k3moduli.moduli import theorem_b_certificate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gmin", type=int, default=2)
    ap.add_argument("--gmax", type=int, default=30)
    args = ap.parse_args()

    start = time.perf_counter()
    print("g\tdiscX\tdiscY\tderived_equivalent\tbirational_possible")
    for g in range(args.gmin, args.gmax + 1):
        c = theorem_b_certificate(K3Context(g))
        print(f"{g}\t{c.discX}\t{c.discY}\t{c.derived_equivalent}\t{c.birational_possible}")
    print(f"# {(time.perf_counter() - start) * 1000:.1f} ms")


if __name__ == "__main__":
    main()
