"""Families-index parity arithmetic and the two top-level hypothesis checkers.

Writing the families spin-c class as c = pi*(b) + D*c0, the first Chern
class of the index bundle of a family over a surface is

    48 * c1(index) = D^3 A + 3 D^2 beta Q0 - 3 sigma beta - D P

with beta = <b, [B]>, Q0 = c0|_X squared, A = fibre integral of c0^3 and
P = fibre integral of c0 p1. A and P are unknown for an actual family, so
the checks below quantify over them, keeping only assignments for which the
index is integral.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterable

import numpy as np

from . import charclass, lattice, spinlift
from .certificate import (FAMILIES_CONSTRAINT, REALIZATION, SECTION_NORMAL_BUNDLE,
                          TOPOLOGICAL_ISOTOPY, Certificate, Node, axiom, computed)

DEFAULT_SEED = 0
DEFAULT_SAMPLES = 1000
SWEEP_BOX = 20


@dataclass(frozen=True)
class FamilyData:
    sigma: int
    div: int
    beta: int
    Q0: int
    A: int
    P: int


def index_c1_times48(f: FamilyData) -> int:
    return f.div ** 3 * f.A + 3 * f.div ** 2 * f.beta * f.Q0 - 3 * f.sigma * f.beta - f.div * f.P


def index_parity(f: FamilyData) -> int | None:
    """c1(index) mod 2, or None (reject) when 48 does not divide the index term."""
    value = index_c1_times48(f)
    if value % 48:
        return None
    return (value // 48) % 2


def _parity_grid(sigma: int, div: int, beta, q0, a, p):
    value = div ** 3 * a + 3 * div ** 2 * beta * q0 - 3 * sigma * beta - div * p
    ok = value % 48 == 0
    return ok, (value // 48) % 2


@dataclass
class SweepReport:
    total: int = 0
    rejected: int = 0
    violations: int = 0
    cases: list[dict] = field(default_factory=list)

    @property
    def accepted(self) -> int:
        return self.total - self.rejected

    def to_json(self) -> dict:
        return {"total": self.total, "rejected": self.rejected, "accepted": self.accepted,
                "violations": self.violations}


def parity_sweep(sigmas: Iterable[int], divs: Iterable[int], expect: str,
                 box: int = SWEEP_BOX) -> SweepReport:
    """Exhaustive check over beta, Q0, A, P in [-box, box].

    ``expect`` is "zero" (parity must vanish) or "beta" (parity must equal
    beta mod 2).
    """
    r = np.arange(-box, box + 1, dtype=np.int64)
    beta, q0, a, p = np.meshgrid(r, r, r, r, indexing="ij", sparse=True)
    report = SweepReport()
    for sigma in sigmas:
        for div in divs:
            ok, parity = _parity_grid(sigma, div, beta, q0, a, p)
            ok = np.broadcast_to(ok, (len(r),) * 4)
            want = np.zeros_like(parity) if expect == "zero" else np.broadcast_to(beta % 2, parity.shape)
            bad = int(np.count_nonzero(ok & (parity != want)))
            n = ok.size
            report.total += n
            report.rejected += n - int(np.count_nonzero(ok))
            report.violations += bad
            report.cases.append({"sigma": sigma, "div": div, "violations": bad})
    return report


def sampled_parity_check(sigma: int, div: int, expect: str, samples: int = DEFAULT_SAMPLES,
                         seed: int = DEFAULT_SEED, box: int = SWEEP_BOX) -> SweepReport:
    """Random FamilyData with fixed sigma and div until ``samples`` are accepted."""
    rng = np.random.default_rng(seed)
    report = SweepReport()
    accepted = 0
    while accepted < samples:
        beta, q0, a, p = rng.integers(-box, box + 1, size=(4, samples), dtype=np.int64)
        ok, parity = _parity_grid(sigma, div, beta, q0, a, p)
        want = np.zeros_like(parity) if expect == "zero" else beta % 2
        idx = np.flatnonzero(ok)[: samples - accepted]
        consumed = int(idx[-1]) + 1 if accepted + len(idx) == samples else samples
        report.total += consumed
        accepted += len(idx)
        report.violations += int(np.count_nonzero(parity[idx] != want[idx]))
    report.rejected = report.total - accepted
    return report


@dataclass
class SurfaceProfile:
    """What the checkers need to know about a surface.

    ``c1_multiple`` and ``primitive_square`` describe the chosen spin-c class
    as c1(s) = c1_multiple * t with t primitive and t.t = primitive_square.
    ``sw_odd`` is None when the parity of SW is imported rather than computed.
    """

    descriptor: dict
    sigma: int
    b_plus: int
    spin: bool
    simply_connected: bool
    form: lattice.LatticeForm | None
    c1_multiple: int | None
    primitive_square: int
    sw_odd: bool | None
    witness: Any
    sw_axiom: tuple[str, str]
    sw_axiom_applicable: bool
    realization_applicable: bool


def primitive_class(form: lattice.LatticeForm, square: int) -> np.ndarray:
    """A primitive vector of the given even square, spread over block 2 and an E8 block."""
    if square % 2:
        raise ValueError("even lattice has only even squares")
    m = square // 2
    v = np.zeros(form.rank, dtype=object)
    if form.num_hyperbolic < 2:
        v[0], v[1] = m, 1
        return v
    v[2] = 1
    if form.num_e8:
        v[3] = m + 1
        v[form.e8_offset(0)] = 1
        if form.e8_sign > 0:
            v[3] = m - 1
    else:
        v[3] = m
    return v


def working_form(form: lattice.LatticeForm) -> lattice.LatticeForm:
    """Sub-lattice carrying the construction; its complement is acted on trivially."""
    return lattice.LatticeForm(min(form.num_hyperbolic, 5), min(form.num_e8, 1), form.e8_sign)


def _involution_nodes(prof: SurfaceProfile, seed: int) -> list[Node]:
    names = ("φ₁, φ₂ commuting involutive isometries fixing c₁(s)",
             "φ₁, φ₂ preserve orientation of H⁺",
             "w₂(H⁺) ≠ 0")
    if prof.form is None or prof.c1_multiple is None:
        return [computed(n, False, {"error": "no even intersection form / spin-c class"}) for n in names]
    form = working_form(prof.form)
    c = prof.c1_multiple * primitive_class(form, prof.primitive_square)
    try:
        inv = lattice.build_commuting_involutions(form, c, seed=seed)
    except (ValueError, lattice.SplittingError) as exc:
        return [computed(n, False, {"error": str(exc)}) for n in names]
    checks = lattice.check_involutions(inv, c)
    pattern = charclass.positive_part_pattern(form, inv.block_phi1, inv.block_phi2)
    # directions of H+ outside the working sub-lattice are fixed by both maps
    pattern = charclass.SignPattern(pattern.lines,
                                    pattern.trivial_rank + prof.form.b_plus - form.b_plus)
    sw = charclass.total_sw(pattern)
    vi = lattice.vector_invariants(form, c)
    pair_witness = {
        "full_form": prof.form.to_json(),
        "working_form": form.to_json(),
        "complement": "identity",
        "c": [int(x) for x in c],
        "c_invariants": vi._asdict(),
        "split_image": [int(x) for x in inv.splitting.dot(c)],
        "block_signs": [list(inv.signs1), list(inv.signs2)],
        "phi1": lattice.matrix_to_json(inv.phi1),
        "phi2": lattice.matrix_to_json(inv.phi2),
        "checks": {"isometries": checks.isometries, "involutive": checks.involutive,
                   "commute": checks.commute, "fix_c": checks.fix_c},
    }
    return [
        computed(names[0], checks.isometries and checks.involutive and checks.commute
                 and checks.fix_c, pair_witness),
        computed(names[1], checks.orientation == (1, 1),
                 {"orientation_determinants": list(checks.orientation)}),
        computed(names[2], sw.w2 == 1, {"pattern": pattern.to_json(), **sw.to_json()}),
    ]


def _witness_node(prof: SurfaceProfile) -> Node:
    ok = prof.c1_multiple is not None and prof.c1_multiple % 32 == 0 and prof.sw_odd is not False
    return computed("32 | c₁(s), SW odd", ok, prof.witness)


def _common_axioms(prof: SurfaceProfile) -> list[Node]:
    return [
        axiom(FAMILIES_CONSTRAINT[0], FAMILIES_CONSTRAINT[1],
              prof.b_plus % 4 == 3 and prof.simply_connected and prof.sw_odd is not False),
        axiom(prof.sw_axiom[0], prof.sw_axiom[1], prof.sw_axiom_applicable),
    ]


def exotic_nodes(prof: SurfaceProfile, seed: int = DEFAULT_SEED) -> list[Node]:
    sweep = sampled_parity_check(prof.sigma, 32, "zero", seed=seed)
    nodes = [
        computed("simply connected", prof.simply_connected),
        computed("spin", prof.spin),
        computed("b₊ ≡ 3 mod 4", prof.b_plus % 4 == 3, {"b_plus": prof.b_plus}),
        computed("32 | σ", prof.sigma % 32 == 0, {"sigma": prof.sigma}),
        _witness_node(prof),
        computed("b₊ > 3", prof.b_plus > 3, {"b_plus": prof.b_plus}),
        *_involution_nodes(prof, seed),
        computed("index parity c₁(D_E) ≡ 0 mod 2", sweep.violations == 0,
                 {"sigma": prof.sigma, "div": 32, "seed": seed, **sweep.to_json()}),
        computed("b₊ ≡ 7 mod 8", prof.b_plus % 8 == 7, {"b_plus": prof.b_plus}),
        *_common_axioms(prof),
        axiom(REALIZATION[0], REALIZATION[1],
              prof.realization_applicable and prof.b_plus >= 3 and prof.simply_connected),
        axiom(TOPOLOGICAL_ISOTOPY[0], TOPOLOGICAL_ISOTOPY[1], prof.simply_connected),
    ]
    return nodes


@lru_cache(maxsize=8)
def commutator_class(samples: int) -> tuple[int | None, str | None]:
    try:
        return spinlift.loop_pi1_class(spinlift.commutator_loop(samples)), None
    except ValueError as exc:
        return None, str(exc)


def dehn_nodes(prof: SurfaceProfile, seed: int = DEFAULT_SEED,
               samples: int = spinlift.DEFAULT_SAMPLES) -> list[Node]:
    loop_class, loop_error = commutator_class(samples)
    normal = charclass.total_sw(charclass.NORMAL_BUNDLE)
    sweep = sampled_parity_check(prof.sigma, 32, "beta", seed=seed)
    return [
        computed("simply connected", prof.simply_connected),
        computed("spin", prof.spin),
        _witness_node(prof),
        computed("σ ≡ 16 mod 32", prof.sigma % 32 == 16, {"sigma": prof.sigma}),
        computed("b₊ ≡ 3 mod 4", prof.b_plus % 4 == 3, {"b_plus": prof.b_plus}),
        computed("[h₁, h₂] nontrivial in π₁(SO(4))", loop_class == 1,
                 {"samples": samples, "class": loop_class, "error": loop_error}),
        computed("w₂(N) ≠ 0", normal.w2 == 1,
                 {"pattern": charclass.NORMAL_BUNDLE.to_json(), **normal.to_json()}),
        computed("index parity c₁(D_E) ≡ β mod 2", sweep.violations == 0,
                 {"sigma": prof.sigma, "div": 32, "seed": seed, **sweep.to_json()}),
        *_common_axioms(prof),
        axiom(SECTION_NORMAL_BUNDLE[0], SECTION_NORMAL_BUNDLE[1], prof.spin),
    ]


def check_exotic_theorem(surface, seed: int = DEFAULT_SEED) -> Certificate:
    """Hypotheses for [f1, f2] to be an exotic diffeomorphism of ``surface``."""
    prof = surface.profile("exotic")
    return Certificate("exotic commutator [f₁, f₂]", prof.descriptor, exotic_nodes(prof, seed))


def check_dehn_theorem(surface, seed: int = DEFAULT_SEED) -> Certificate:
    """Hypotheses for the boundary Dehn twist of ``surface`` minus a ball to be nontrivial."""
    prof = surface.profile("dehn")
    return Certificate("nontrivial boundary Dehn twist", prof.descriptor, dehn_nodes(prof, seed))
