from math import comb, gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exocert import elliptic
from exocert.elliptic import EllipticSurface

PAIRS_25 = list(elliptic.odd_coprime_pairs(25))


def _oracle_witness(n, i, j):
    """Exhaustive search over every basic class, no shortcuts."""
    for k in range(n - 1):
        sw = (-1) ** k * comb(n - 2, k)
        if sw % 2 == 0:
            continue
        for a in range(i):
            for b in range(j):
                if (n * i * j - 2 * i * j * k - 2 * j * a - 2 * i * b - i - j) % 32 == 0:
                    return k, a, b
    return None


def _oracle_exceptional(bound, variant):
    """Uncapped ranges a < i, b < j (no reduction to 16)."""
    out = []
    for i, j in elliptic.odd_coprime_pairs(bound):
        reach = set()
        for k0 in ((0, 1) if variant == 1 else (0,)):
            for a in range(i):
                for b in range(j):
                    reach.add((j * a + i * b + 2 * i * j * k0) % 16)
        if len(reach) < 16:
            out.append((i, j))
    return sorted(out)


def test_invariants():
    inv = EllipticSurface(4, 1, 11).invariants()
    assert (inv.sigma, inv.b_plus, inv.b2, inv.euler, inv.spin) == (-32, 7, 46, 48, True)
    assert not EllipticSurface(4, 1, 2).invariants().spin
    assert not EllipticSurface(3, 1, 1).invariants().spin


def test_validation_and_normalisation():
    with pytest.raises(ValueError):
        EllipticSurface(4, 3, 9)
    with pytest.raises(ValueError):
        EllipticSurface(0, 1, 1)
    e = EllipticSurface(4, 11, 1)
    assert (e.i, e.j) == (1, 11) and e.name == "E(4)_{1,11}"


@given(st.integers(0, 300), st.integers(-3, 300))
def test_binom_parity(n, k):
    want = comb(n, k) % 2 if 0 <= k <= n else 0
    assert elliptic.binom_parity(n, k) == want


def test_basic_classes_enumeration():
    e = EllipticSurface(4, 3, 5)
    classes = elliptic.basic_classes(e)
    assert len(classes) == 3 * 3 * 5
    assert [(c.k, c.a, c.b) for c in classes] == sorted((c.k, c.a, c.b) for c in classes)
    assert elliptic.basic_classes(EllipticSurface(1, 1, 1)) == []


@pytest.mark.parametrize("n", [2, 4, 6, 8, 12])
@pytest.mark.parametrize("i,j", PAIRS_25[:40])
def test_witness_matches_oracle(n, i, j):
    w = elliptic.find_witness_div32(EllipticSurface(n, i, j))
    want = _oracle_witness(n, i, j)
    assert (None if w is None else (w.k, w.a, w.b)) == want


def test_known_witnesses():
    w = elliptic.find_witness_div32(EllipticSurface(4, 1, 11))
    assert tuple(w) == (0, 0, 0, 32, 1)
    assert elliptic.find_witness_div32(EllipticSurface(4, 1, 1)) is None
    assert elliptic.find_witness_div32(EllipticSurface(4, 1, 3)) is None
    # (1,3) lies in the variant-2 set yet E(2)_{1,3} has the class b = 1 with coefficient 0
    w = elliptic.find_witness_div32(EllipticSurface(2, 1, 3))
    assert (w.k, w.a, w.b, w.coeff, w.sw) == (0, 0, 1, 0, 1)


@pytest.mark.parametrize("variant", [1, 2])
def test_exceptional_set_matches_uncapped_oracle(variant):
    assert elliptic.exceptional_set(33, variant) == _oracle_exceptional(33, variant)


def test_exceptional_sets_small_bound():
    assert elliptic.exceptional_set(15, 2) == sorted(
        [(1, 1), (1, 3), (1, 5), (1, 7), (1, 9), (1, 11), (1, 13), (1, 15),
         (3, 5), (3, 7), (7, 9), (5, 11), (3, 13)])
    assert elliptic.exceptional_set(15, 1) == [
        (1, 1), (1, 3), (1, 5), (1, 7), (1, 9), (3, 5), (3, 7)]
    assert 5 not in elliptic.reachable_residues(3, 7, 1)


def test_exceptional_sets_stable_beyond_15():
    for variant in (1, 2):
        assert elliptic.exceptional_set(45, variant) == elliptic.exceptional_set(15, variant)


@given(st.sampled_from(PAIRS_25), st.sampled_from([1, 2]), st.integers(0, 15))
def test_coverage_check_agrees_with_reachable(pair, variant, c):
    i, j = pair
    hit = elliptic.coverage_check(i, j, variant, c)
    assert (hit is not None) == (c in elliptic.reachable_residues(i, j, variant))
    if hit is not None:
        a, b, k0 = hit
        assert a < i and b < j
        assert (j * a + i * b + 2 * i * j * k0 - c) % 16 == 0


def test_coverage_check_rejects_even():
    with pytest.raises(ValueError):
        elliptic.coverage_check(2, 3, 1, 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.sampled_from(PAIRS_25))
def test_exotic_verdict_tracks_witness(m, pair):
    i, j = pair
    e = EllipticSurface(4 * m, i, j)
    cert = elliptic.certify_exotic(e)
    assert cert.passed == (_oracle_witness(4 * m, i, j) is not None)
    if pair not in elliptic.exceptional_set(25, 1):
        assert cert.passed


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.sampled_from(PAIRS_25))
def test_dehn_verdict_tracks_witness(m, pair):
    i, j = pair
    e = EllipticSurface(4 * m - 2, i, j)
    cert = elliptic.certify_dehn(e)
    assert cert.passed == (_oracle_witness(4 * m - 2, i, j) is not None)
    if pair not in elliptic.exceptional_set(25, 2):
        assert cert.passed


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.sampled_from(PAIRS_25))
def test_witness_residue_meets_direct_target(m, pair):
    i, j = pair
    for n in (4 * m, 4 * m - 2):
        e = EllipticSurface(n, i, j)
        w = elliptic.find_witness_div32(e)
        rep = elliptic.congruence_report(e, w)
        assert rep["targets_agree"] == ((i + j) % 16 == 0)
        if w is not None and "witness_residue" in rep:
            assert rep["witness_meets_direct"]


def test_verdicts_on_named_surfaces():
    assert elliptic.certify_exotic(EllipticSurface(4, 1, 11)).passed
    assert not elliptic.certify_exotic(EllipticSurface(4, 1, 3)).passed
    assert not elliptic.certify_exotic(EllipticSurface(4, 3, 7)).passed
    assert elliptic.certify_dehn(EllipticSurface(2, 1, 1)).passed
    assert elliptic.certify_dehn(EllipticSurface(2, 1, 17)).passed
    assert elliptic.certify_dehn(EllipticSurface(2, 1, 3)).passed
    dehn = elliptic.certify_dehn(EllipticSurface(4, 1, 11))
    assert "σ ≡ 16 mod 32" in dehn.failing()
    k3 = elliptic.certify_exotic(EllipticSurface(2, 1, 1))
    assert {"32 | σ", "b₊ > 3"} <= set(k3.failing())


def test_pairs_are_odd_coprime_sorted():
    pairs = list(elliptic.odd_coprime_pairs(21))
    assert all(i % 2 and j % 2 and gcd(i, j) == 1 and i <= j for i, j in pairs)
    assert len(pairs) == len(set(pairs))
