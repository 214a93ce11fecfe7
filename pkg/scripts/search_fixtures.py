"""Regenerate fixtures/: staged search for the small algebras, builder for k3like.

Every written algebra is certified by validate_algebra first.

    python3 scripts/search_fixtures.py [--only block8] [--out fixtures]
"""

import argparse
import sys
import time
from pathlib import Path

from chgraph.algebra import block_family, dump_algebra, validate_algebra
from chgraph.search import PROFILES, search_fixture

ONE_TWELFTH = {"frobenius2": True, "block6": True, "block7": False, "block8": True}


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--only", action="append")
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "fixtures"))
    args = ap.parse_args(argv)
    out = Path(args.out)
    out.mkdir(exist_ok=True)
    names = args.only or list(PROFILES) + ["k3like"]
    status = 0
    for name in names:
        t = time.time()
        if name == "k3like":
            alg = block_family(22, name="k3like")
            rep = validate_algebra(alg)
            if not rep.passed:
                print("k3like failed validation", file=sys.stderr)
                status = 1
                continue
        else:
            res = search_fixture(PROFILES[name], require_one_twelfth=ONE_TWELFTH[name])
            if not res.found:
                print(f"{name}: not found ({res.reason})")
                status = 1
                continue
            alg = res.algebra
            print(f"{name}: {res.families} solution families, {res.candidates} candidates tried")
        dump_algebra(alg, out / f"{name}.json")
        print(f"{name}: written in {time.time() - t:.1f}s")
    return status


if __name__ == "__main__":
    sys.exit(main())
