"""Machine-checked traces for the P-twist factorizations, both index readings."""
import argparse
import json
import time

from k3moduli.autoeq import ProofTrace, parse, prove_equal, replay, rewrite_rules
from k3moduli.lattice import K3Context

GOALS = {
    "a": ("P(F')", "KNhilb(2) . P(F) . KNhilb(2)^-1"),
    "b": ("P(F)", "FM . KNflop({i})^-1 . KNflop(g) . FM^-1"),
    "c": ("P(F')", "KNhilb(2) . FM . KNflop({i})^-1 . KNflop(g) . FM^-1 . KNhilb(2)^-1"),
}
INDEX = {"a": "g-1", "b": "1-g"}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--g", type=int, nargs="+", default=[2, 3, 4, 5])
    ap.add_argument("--depth", type=int, default=6)
    ap.add_argument("--json", action="store_true", help="dump full traces")
    args = ap.parse_args()

    dump = []
    for reading in ("a", "b"):
        for g in args.g:
            ctx = K3Context(g)
            rules = rewrite_rules(ctx, reading)
            for name, (lhs, rhs) in GOALS.items():
                rhs = rhs.format(i=INDEX[reading])
                start = time.perf_counter()
                out = prove_equal(rules, parse(lhs, ctx), parse(rhs, ctx), args.depth)
                ms = (time.perf_counter() - start) * 1000
                if isinstance(out, ProofTrace):
                    rule_ids = " ".join(s.rule_id + ("" if s.direction == "fwd" else "'") for s in out.steps)
                    print(f"reading={reading} g={g} ({name}) len={len(out)} replay={replay(rules, out)} "
                          f"[{rule_ids}] {ms:.1f} ms")
                    dump.append({"reading": reading, "g": g, "goal": name, "trace": out.to_json()})
                else:
                    print(f"reading={reading} g={g} ({name}) unknown: {out.reason}")
    if args.json:
        print(json.dumps(dump, indent=2, ensure_ascii=False))


if __name__ == "__main__":
    main()
