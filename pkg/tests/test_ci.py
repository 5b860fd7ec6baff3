from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exocert import acceptance, ci
from exocert.ci import CompleteIntersection

multidegrees = st.integers(3, 6).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(2, 40), min_size=n - 2, max_size=n - 2)))


def _oracle_chern(n, degrees):
    """c1, c2 of the tangent bundle from the closed forms of the normal-bundle sequence."""
    s1 = sum(degrees)
    s2 = sum(degrees[p] * degrees[q] for p in range(len(degrees)) for q in range(p, len(degrees)))
    return n + 1 - s1, comb(n + 1, 2) - (n + 1) * s1 + s2


@settings(max_examples=200)
@given(multidegrees)
def test_chern_series_matches_closed_form(nd):
    n, degrees = nd
    x = CompleteIntersection(n, degrees)
    c = ci.total_chern_coefficients(x)
    assert (c[0], c[1], c[2]) == (1, *_oracle_chern(n, x.degrees))


@settings(max_examples=200)
@given(multidegrees)
def test_signature_and_noether(nd):
    n, degrees = nd
    x = CompleteIntersection(n, degrees)
    rec = ci.chern_numbers(x)
    assert Fraction(rec.c1_sq - 2 * rec.euler, 3) == rec.sigma == ci.sigma_from_degrees(x)
    assert (rec.c1_sq + rec.euler) % 12 == 0
    inv = x.invariants()
    assert inv.b2 == inv.euler - 2 and 2 * inv.b_plus == inv.b2 + inv.sigma
    assert inv.spin == ((sum(degrees) - n - 1) % 2 == 0)


def test_named_invariants():
    s4 = CompleteIntersection.of(4).invariants()
    assert (s4.euler, s4.sigma, s4.b_plus) == (24, -16, 3)
    s36 = CompleteIntersection.of(36).invariants()
    assert s36.sigma == -15504 and s36.sigma % 32 == 16
    s = CompleteIntersection.of(8, 29).invariants()
    assert (s.sigma, s.b_plus) == (-69600, 76791)
    assert s.b_plus % 8 == 7


def test_validation():
    with pytest.raises(ValueError):
        CompleteIntersection(4, (3,))
    with pytest.raises(ValueError):
        CompleteIntersection(3, (1,))
    with pytest.raises(ValueError):
        CompleteIntersection(2, ())
    assert CompleteIntersection(4, (29, 8)).degrees == (8, 29)
    assert CompleteIntersection.of(8, 29).name == "S_{8,29} ⊂ CP^4"


def test_certificates():
    assert ci.certify_dehn(CompleteIntersection.of(4)).passed
    assert ci.certify_dehn(CompleteIntersection.of(36)).passed
    assert ci.certify_exotic(CompleteIntersection.of(8, 29)).passed
    assert ci.certify_exotic(CompleteIntersection.of(29, 40)).passed
    assert not ci.certify_exotic(CompleteIntersection.of(5)).passed
    assert not ci.certify_exotic(CompleteIntersection.of(4)).passed


def _oracle_search(ambient, max_degree, target):
    out = []
    for degrees in combinations_with_replacement(range(2, max_degree + 1), ambient - 2):
        k = sum(degrees) - ambient - 1
        deg = prod(degrees)
        sigma = (ambient + 1 - sum(d * d for d in degrees)) * deg // 3
        euler = deg * _oracle_chern(ambient, degrees)[1]
        b_plus = (euler - 2 + sigma) // 2
        if k % 32 or k < 0:
            continue
        if target == "exotic" and sigma % 32 == 0 and b_plus % 8 == 7:
            out.append(degrees)
        if target == "dehn" and sigma % 32 == 16 and b_plus % 8 == 3:
            out.append(degrees)
    return out


@pytest.mark.parametrize("ambient,max_degree,target", [
    (3, 80, "dehn"), (3, 80, "exotic"), (4, 40, "exotic"), (4, 40, "dehn"), (5, 20, "exotic")])
def test_search_matches_oracle(ambient, max_degree, target):
    found = [x.degrees for x in ci.search_multidegrees(ambient, max_degree, target)]
    assert found == _oracle_search(ambient, max_degree, target)


def test_search_examples_and_limits():
    assert [x.degrees for x in ci.search_multidegrees(3, 40, "dehn")] == [(4,), (36,)]
    assert ci.search_multidegrees(3, 35, "exotic") == []
    assert (8, 29) in [x.degrees for x in ci.search_multidegrees(4, 40, "exotic")]
    assert ci.search_multidegrees(3, 1, "dehn") == []
    with pytest.raises(ValueError):
        ci.search_multidegrees(6, 100, "exotic", max_candidates=1000)
    with pytest.raises(ValueError):
        ci.search_multidegrees(3, 10, "other")


def test_mutated_signature_is_caught(monkeypatch):
    original = ci.sigma_from_degrees
    monkeypatch.setattr(ci, "sigma_from_degrees", lambda x: original(x) + 1)
    with pytest.raises(ci.InconsistentInvariants):
        ci.chern_numbers(CompleteIntersection.of(4))
    passed, detail = acceptance.sigma_cross_derivation()
    assert not passed and "failures" in detail
