from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from exocert import obstruction
from exocert.elliptic import EllipticSurface
from exocert.ci import CompleteIntersection
from exocert.obstruction import FamilyData


def test_index_examples():
    f = FamilyData(sigma=-32, div=32, beta=1, Q0=2, A=0, P=0)
    assert obstruction.index_c1_times48(f) == 6240
    assert obstruction.index_parity(f) == 0
    f = FamilyData(sigma=16, div=32, beta=1, Q0=0, A=0, P=0)
    assert obstruction.index_c1_times48(f) == -48
    assert obstruction.index_parity(f) == 1
    assert obstruction.index_parity(FamilyData(0, 1, 0, 0, 48, 0)) == 1
    assert obstruction.index_parity(FamilyData(0, 1, 0, 0, 1, 0)) is None


@given(st.integers(-100, 100), st.sampled_from([1, 2, 32, 64]), st.integers(-9, 9),
       st.integers(-9, 9))
def test_linear_in_fibre_integrals(sigma, div, beta, q0):
    base = FamilyData(sigma, div, beta, q0, 0, 0)
    v0 = obstruction.index_c1_times48(base)
    va = obstruction.index_c1_times48(FamilyData(sigma, div, beta, q0, 1, 0))
    vp = obstruction.index_c1_times48(FamilyData(sigma, div, beta, q0, 0, 1))
    assert (va - v0, vp - v0) == (div ** 3, -div)
    assert v0 - obstruction.index_c1_times48(FamilyData(sigma, div, 0, q0, 0, 0)) == \
        beta * (3 * div * div * q0 - 3 * sigma)


def test_base_class_absent_divisible_by_div():
    for a, p in product(range(-5, 6), repeat=2):
        assert obstruction.index_c1_times48(FamilyData(16, 32, 0, 3, a, p)) % 32 == 0


def _brute(sigma, div, expect, box):
    total = rejected = bad = 0
    for beta, q0, a, p in product(range(-box, box + 1), repeat=4):
        total += 1
        par = obstruction.index_parity(FamilyData(sigma, div, beta, q0, a, p))
        if par is None:
            rejected += 1
        elif par != (0 if expect == "zero" else beta % 2):
            bad += 1
    return total, rejected, bad


@pytest.mark.parametrize("sigma,div,expect", [
    (0, 32, "zero"), (-32, 64, "zero"), (16, 32, "beta"), (48, 96, "beta"),
    (16, 32, "zero"), (8, 3, "beta")])
def test_vectorised_sweep_matches_scalar(sigma, div, expect):
    rep = obstruction.parity_sweep([sigma], [div], expect, box=4)
    assert (rep.total, rep.rejected, rep.violations) == _brute(sigma, div, expect, 4)


def test_wrong_expectation_is_detected():
    assert obstruction.parity_sweep([16], [32], "zero", box=5).violations > 0


def test_sampled_check_deterministic_and_counts():
    a = obstruction.sampled_parity_check(-32, 32, "zero", samples=1000, seed=3)
    b = obstruction.sampled_parity_check(-32, 32, "zero", samples=1000, seed=3)
    assert a.to_json() == b.to_json()
    assert a.accepted == 1000 and a.violations == 0


def test_primitive_class_square():
    from exocert import lattice

    for form in (lattice.LatticeForm(5, 1, -1), lattice.LatticeForm(5, 1, 1),
                 lattice.LatticeForm(5), lattice.LatticeForm(1)):
        for square in (0, 2, 58, -4):
            v = obstruction.primitive_class(form, square)
            vi = lattice.vector_invariants(form, v)
            assert (vi.divisibility, vi.square) == (1, square)


def test_certificate_structure():
    cert = obstruction.check_exotic_theorem(EllipticSurface(4, 1, 11))
    kinds = [n.kind for n in cert.nodes]
    assert kinds.count("axiom") == 4
    assert all(n.cite for n in cert.nodes if n.kind == "axiom")
    assert cert.passed


def test_dehn_checker():
    assert obstruction.check_dehn_theorem(EllipticSurface(2, 1, 1)).passed
    assert obstruction.check_dehn_theorem(CompleteIntersection.of(36)).passed
    assert not obstruction.check_dehn_theorem(EllipticSurface(4, 1, 11)).passed


def test_certificates_deterministic():
    for surface in (EllipticSurface(4, 1, 11), CompleteIntersection.of(8, 29)):
        a = obstruction.check_exotic_theorem(surface, seed=5).dumps()
        b = obstruction.check_exotic_theorem(surface, seed=5).dumps()
        assert a == b
