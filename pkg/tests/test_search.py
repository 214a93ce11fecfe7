import pytest

from chgraph.algebra import validate_algebra
from chgraph.core import InputError
from chgraph.search import PROFILES, FixtureProfile, axiom_system, has_tree_terms, search_fixture


def test_frobenius_profile_immediate():
    r = search_fixture(PROFILES["frobenius2"])
    assert r.found
    assert validate_algebra(r.algebra, check_one_twelfth=True).passed


def test_single_block_profile():
    r = search_fixture(PROFILES["block6"], require_one_twelfth=True, time_budget=60)
    assert r.found
    assert r.report.passed
    assert validate_algebra(r.algebra).passed


def test_block7_profile_has_trees():
    r = search_fixture(PROFILES["block7"], time_budget=120)
    assert r.found and has_tree_terms(r.algebra)


def test_exhausted_budget_is_not_an_error():
    r = search_fixture(PROFILES["block7"], budget=0, time_budget=120)
    assert not r.found and r.reason


def test_profile_validation():
    with pytest.raises(InputError):
        FixtureProfile(("L", "1"), (0, 0), (2, 0), (0, 1), ())
    with pytest.raises(InputError):
        FixtureProfile(tuple("1abcdefghijkl"), (0,) * 13, (0,) * 13, (0,), ())


def test_fixed_constant_must_be_allowed():
    p = FixtureProfile(("1", "L"), (0, 0), (0, 2), (0, 1), (), fixed={("L", "L", "L"): 1})
    with pytest.raises(InputError):
        axiom_system(p, False)
