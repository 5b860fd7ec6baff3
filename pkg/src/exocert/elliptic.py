"""Elliptic surfaces E(n)_{i,j}: invariants, basic classes and residue coverage."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, gcd
from typing import NamedTuple

from . import lattice, obstruction
from .certificate import ELLIPTIC_SW, Certificate, computed

MOD = 16


@dataclass(frozen=True)
class EllipticSurface:
    """Logarithmic transform of E(n) with coprime multiplicities i <= j."""

    n: int
    i: int = 1
    j: int = 1

    def __post_init__(self):
        if self.n < 1 or self.i < 1 or self.j < 1:
            raise ValueError("n, i, j must be positive")
        if gcd(self.i, self.j) != 1:
            raise ValueError(f"multiplicities {self.i}, {self.j} are not coprime")
        if self.i > self.j:
            i, j = self.j, self.i
            object.__setattr__(self, "i", i)
            object.__setattr__(self, "j", j)

    @property
    def name(self) -> str:
        return f"E({self.n})_{{{self.i},{self.j}}}"

    def __str__(self) -> str:
        return self.name

    def descriptor(self) -> dict:
        return {"type": "elliptic", "name": self.name, "n": self.n, "i": self.i, "j": self.j}

    def invariants(self) -> "EllipticInvariants":
        return invariants(self)

    def profile(self, purpose: str) -> obstruction.SurfaceProfile:
        inv = invariants(self)
        w = find_witness_div32(self)
        witness = {
            "basic_class": None if w is None else w._asdict(),
            "sw_source": "computed",
            "congruence": congruence_report(self, w),
        }
        return obstruction.SurfaceProfile(
            descriptor=self.descriptor(),
            sigma=inv.sigma,
            b_plus=inv.b_plus,
            spin=inv.spin,
            simply_connected=True,
            form=lattice.catalog_form(self) if inv.spin else None,
            c1_multiple=None if w is None else w.coeff,
            primitive_square=0,
            sw_odd=None if w is None else w.sw % 2 == 1,
            witness=witness,
            sw_axiom=ELLIPTIC_SW,
            sw_axiom_applicable=self.n > 1,
            realization_applicable=self.n > 1,
        )


class EllipticInvariants(NamedTuple):
    sigma: int
    b_plus: int
    b2: int
    euler: int
    spin: bool
    simply_connected: bool


def invariants(e: EllipticSurface) -> EllipticInvariants:
    return EllipticInvariants(
        sigma=-8 * e.n,
        b_plus=2 * e.n - 1,
        b2=12 * e.n - 2,
        euler=12 * e.n,
        spin=e.n % 2 == 0 and (e.i * e.j) % 2 == 1,
        simply_connected=True,
    )


def binom_parity(n: int, k: int) -> int:
    """C(n, k) mod 2 by Lucas: odd iff the binary digits of k sit inside those of n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return int(k & ~n == 0)


class BasicClass(NamedTuple):
    k: int
    a: int
    b: int
    coeff: int
    sw: int


def basic_class(e: EllipticSurface, k: int, a: int, b: int) -> BasicClass:
    n, i, j = e.n, e.i, e.j
    coeff = n * i * j - 2 * i * j * k - 2 * j * a - 2 * i * b - i - j
    return BasicClass(k, a, b, coeff, (-1) ** k * comb(n - 2, k))


def basic_classes(e: EllipticSurface) -> list[BasicClass]:
    """All basic classes, ordered lexicographically in (k, a, b); empty for n < 2."""
    return [basic_class(e, k, a, b)
            for k in range(e.n - 1) for a in range(e.i) for b in range(e.j)]


def find_witness_div32(e: EllipticSurface) -> BasicClass | None:
    for k in range(e.n - 1):
        if not binom_parity(e.n - 2, k):
            continue
        for a in range(e.i):
            for b in range(e.j):
                bc = basic_class(e, k, a, b)
                if bc.coeff % 32 == 0:
                    return bc
    return None


def _shifts(i: int, j: int, variant: int) -> tuple[int, ...]:
    if variant == 1:
        return (0, 2 * i * j % MOD)
    if variant == 2:
        return (0,)
    raise ValueError("variant must be 1 or 2")


def coverage_check(i: int, j: int, variant: int, c: int) -> tuple[int, int, int] | None:
    """First (a, b, k0) with j*a + i*b + 2ij*k0 = c mod 16; k0 = 0 for variant 2.

    Only a < 16 and b < 16 need to be tried since i, j are odd.
    """
    if i % 2 == 0 or j % 2 == 0 or gcd(i, j) != 1:
        raise ValueError("i, j must be odd and coprime")
    i, j = min(i, j), max(i, j)
    for k0, shift in enumerate(_shifts(i, j, variant)):
        for a in range(min(i, MOD)):
            for b in range(min(j, MOD)):
                if (j * a + i * b + shift - c) % MOD == 0:
                    return a, b, k0
    return None


def reachable_residues(i: int, j: int, variant: int) -> set[int]:
    shifts = _shifts(i, j, variant)
    ja = {j * a % MOD for a in range(min(i, MOD))}
    ib = {i * b % MOD for b in range(min(j, MOD))}
    return {(x + y + s) % MOD for x in ja for y in ib for s in shifts}


def odd_coprime_pairs(bound: int):
    for j in range(1, bound + 1, 2):
        for i in range(1, j + 1, 2):
            if gcd(i, j) == 1:
                yield i, j


def exceptional_set(bound: int, variant: int) -> list[tuple[int, int]]:
    """Odd coprime pairs i <= j <= bound for which some residue mod 16 is missed."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    return sorted((i, j) for i, j in odd_coprime_pairs(bound)
                  if len(reachable_residues(i, j, variant)) < MOD)


def congruence_report(e: EllipticSurface, w: BasicClass | None) -> dict | None:
    """Compare the two forms of the reduced congruence against a witness.

    For n = 4m (k = 2k0) and n = 4m-2 (k = 0), 32 | coeff is equivalent to
    j*a + i*b + 2ij*k0 = 2m*ij - (i+j)/2  (resp. (2m-1)ij - (i+j)/2)  mod 16.
    The ``stated`` target uses +(i+j)/2 instead; they agree iff i + j = 0 mod 16.
    """
    i, j, n = e.i, e.j, e.n
    if (i * j) % 2 == 0 or n % 2:
        return None
    half = (i + j) // 2
    direct = (n // 2 * i * j - half) % MOD
    stated = (n // 2 * i * j + half) % MOD
    out = {"direct_target": direct, "stated_target": stated, "targets_agree": direct == stated}
    if w is not None and w.k % 2 == 0 and w.k <= 2:
        lhs = (j * w.a + i * w.b + i * j * w.k) % MOD
        out["witness_residue"] = lhs
        out["witness_meets_direct"] = lhs == direct
        out["witness_meets_stated"] = lhs == stated
    return out


def certify_exotic(e: EllipticSurface, seed: int = obstruction.DEFAULT_SEED) -> Certificate:
    """Non-splitting of pi_0 Diff -> Aut(Q) for E(4m)_{i,j}."""
    prof = e.profile("exotic")
    nodes = [computed("n ≡ 0 mod 4", e.n % 4 == 0, {"n": e.n}),
             *obstruction.exotic_nodes(prof, seed)]
    return Certificate("E(4m)_{i,j}: π₀(Diff) → Γ does not split", prof.descriptor, nodes)


def certify_dehn(e: EllipticSurface, seed: int = obstruction.DEFAULT_SEED) -> Certificate:
    """Nontrivial boundary Dehn twist for E(4m-2)_{i,j}."""
    prof = e.profile("dehn")
    nodes = [computed("n ≡ 2 mod 4", e.n % 4 == 2, {"n": e.n}),
             *obstruction.dehn_nodes(prof, seed)]
    return Certificate("E(4m-2)_{i,j}: boundary Dehn twist nontrivial", prof.descriptor, nodes)
