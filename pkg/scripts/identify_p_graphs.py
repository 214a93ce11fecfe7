"""Match P_1..P_9 to candidate genus-one graphs by the decomposition table.

Evaluates every Delta stratum and every candidate graph at degree 0 on random
leaf vectors of k3like, then lists the assignments under which all seven rows
hold.  Pins are given as P=candidate.

    python3 scripts/identify_p_graphs.py [--samples 3] [--seed 0] [--pin P1=A1 ...]
"""

import argparse
import random
import sys
from fractions import Fraction
from pathlib import Path

from chgraph.algebra import load_algebra
from chgraph.relations import identify_p_assignments

FIXTURE = Path(__file__).resolve().parent.parent / "fixtures" / "k3like.json"


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--pin", action="append", default=[])
    args = ap.parse_args(argv)
    alg = load_algebra(str(FIXTURE))
    rnd = random.Random(args.seed)
    es = [{i: Fraction(rnd.randint(-2, 2)) for i in alg.h0} for _ in range(args.samples)]
    fixed = dict(p.split("=") for p in args.pin)
    found = identify_p_assignments(alg, es, fixed)
    print(f"{len(found)} assignment(s)")
    for m in found:
        print("  " + " ".join(f"{p}={c}" for p, c in sorted(m.items(), key=lambda t: int(t[0][1:]))))
    return 0 if len(found) == 1 else 1


if __name__ == "__main__":
    sys.exit(main())
