"""Stiefel-Whitney classes of flat bundles over T^2 with +-1 monodromy.

H^*(T^2; Z/2) is truncated to (Z/2)[x1, x2]/(x1^2, x2^2); a class is stored
as the bit tuple (1, x1, x2, x1x2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .lattice import LatticeForm, block_scalars


@dataclass(frozen=True)
class SignPattern:
    """Simultaneous eigenlines (eps1, eps2) plus a trivial summand R^k."""

    lines: tuple[tuple[int, int], ...] = ()
    trivial_rank: int = 0

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(tuple(int(e) for e in ln) for ln in self.lines))
        for ln in self.lines:
            if len(ln) != 2 or any(e not in (1, -1) for e in ln):
                raise ValueError(f"bad eigenline signs {ln}")
        if self.trivial_rank < 0:
            raise ValueError("trivial_rank must be nonnegative")
        if not self.lines and self.trivial_rank == 0:
            raise ValueError("empty bundle")

    @property
    def rank(self) -> int:
        return len(self.lines) + self.trivial_rank

    @classmethod
    def from_monodromy(cls, sigma1: Iterable[int], sigma2: Iterable[int]) -> "SignPattern":
        """Pattern of R^n with diagonal monodromies ``sigma1``, ``sigma2``."""
        return cls(tuple(zip(sigma1, sigma2)))

    def to_json(self) -> dict:
        return {"lines": [list(ln) for ln in self.lines], "trivial_rank": self.trivial_rank}

    @classmethod
    def from_json(cls, data: dict) -> "SignPattern":
        return cls(tuple(tuple(ln) for ln in data["lines"]), int(data.get("trivial_rank", 0)))


@dataclass(frozen=True)
class SWData:
    w1: tuple[int, int] = field(default=(0, 0))
    w2: int = 0

    def to_json(self) -> dict:
        return {"w1": list(self.w1), "w2": self.w2}


def line_w1(eps1: int, eps2: int) -> tuple[int, int]:
    """w1 of a flat line bundle: the x_j bit is set iff monodromy j is -1."""
    if eps1 not in (1, -1) or eps2 not in (1, -1):
        raise ValueError("monodromy signs must be +-1")
    return (1 - eps1) // 2, (1 - eps2) // 2


def _mul(p: tuple[int, int, int, int], q: tuple[int, int, int, int]) -> tuple[int, int, int, int]:
    c0, a0, b0, d0 = p
    c1, a1, b1, d1 = q
    return (
        c0 & c1,
        (c0 & a1) ^ (a0 & c1),
        (c0 & b1) ^ (b0 & c1),
        (c0 & d1) ^ (d0 & c1) ^ (a0 & b1) ^ (b0 & a1),
    )


def total_sw(pattern: SignPattern) -> SWData:
    total = (1, 0, 0, 0)
    for eps1, eps2 in pattern.lines:
        a, b = line_w1(eps1, eps2)
        total = _mul(total, (1, a, b, 0))
    return SWData((total[1], total[2]), total[3])


def positive_part_pattern(form: LatticeForm, phi1, phi2) -> SignPattern:
    """Monodromy pattern of H^+ for block-scalar involutions.

    Each hyperbolic block contributes the positive direction x_i + y_i;
    E8(-1) blocks contribute nothing and E8(+1) blocks contribute eight
    directions, which must be acted on trivially.
    """
    h1, e1 = block_scalars(form, phi1)
    h2, e2 = block_scalars(form, phi2)
    lines, trivial = [], 0
    for s1, s2 in zip(h1, h2):
        if (s1, s2) == (1, 1):
            trivial += 1
        else:
            lines.append((s1, s2))
    if form.e8_sign > 0:
        for s1, s2 in zip(e1, e2):
            if (s1, s2) != (1, 1):
                raise ValueError("positive E8 block with nontrivial monodromy is not supported")
            trivial += 8
    return SignPattern(tuple(lines), trivial)


# sigma1 = diag(1,-1,1,-1), sigma2 = diag(-1,-1,1,1) on the tangent space at the fixed point
NORMAL_BUNDLE = SignPattern.from_monodromy((1, -1, 1, -1), (-1, -1, 1, 1))
