import json
from pathlib import Path

import pytest

from chgraph.algebra import load_algebra

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"
SMALL = ("frobenius2", "block6", "block7", "block8")
CERTIFIED_12 = ("frobenius2", "block6", "block8")


def spec(name):
    return json.loads((FIXTURES / f"{name}.json").read_text())


def alg(name):
    return load_algebra(str(FIXTURES / f"{name}.json"))


@pytest.fixture(scope="session")
def algebras():
    return {n: alg(n) for n in SMALL}


@pytest.fixture(scope="session")
def k3like():
    return alg("k3like")
