"""Run validate_algebra on every single-entry mutation and print the verdicts."""

import json
import sys
from pathlib import Path

from chgraph.algebra import validate_algebra
from chgraph.mutations import MUTATIONS

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def main():
    status = 0
    for m in MUTATIONS:
        spec = json.loads((FIXTURES / f"{m.fixture}.json").read_text())
        rep = validate_algebra(m.build(spec), check_one_twelfth=True)
        c = rep.get(m.target)
        others = [f.check for f in rep.failures() if f.check != m.target]
        print(f"{m.fixture:7} {m.name:22} {m.target:28} {c.status:5} witness={c.witness} also={others}")
        status |= c.status != "fail"
    return status


if __name__ == "__main__":
    sys.exit(main())
