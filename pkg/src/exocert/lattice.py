"""Even unimodular lattices p*H + q*E8(eps) with exact integer arithmetic.

Block basis convention (also used in JSON certificates): the hyperbolic
blocks come first, each with basis (x, y), x.x = y.y = 0, x.y = 1; then the
E8 blocks, each in the Bourbaki simple-root basis (nodes 1..8, edges 1-3,
3-4, 4-5, 5-6, 6-7, 7-8 and 2-4), scaled by the common sign.

All matrices are numpy arrays of dtype ``object`` holding Python ints, so no
product ever overflows.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import NamedTuple, Sequence

import numpy as np

_E8_EDGES = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)]


def _e8_cartan() -> np.ndarray:
    g = np.zeros((8, 8), dtype=object)
    for k in range(8):
        g[k, k] = 2
    for a, b in _E8_EDGES:
        g[a - 1, b - 1] = g[b - 1, a - 1] = -1
    return g


E8_CARTAN = _e8_cartan()
HYPERBOLIC = np.array([[0, 1], [1, 0]], dtype=object)


class SplittingError(RuntimeError):
    """The bounded isometry search gave up; an implementation limit."""


def _exact_inverse(m: np.ndarray) -> np.ndarray:
    """Gauss-Jordan over the rationals; the result must be integral."""
    n = m.shape[0]
    a = [[Fraction(int(m[i, j])) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    out = np.zeros((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            q = a[i][n + j]
            if q.denominator != 1:
                raise ValueError("matrix is not unimodular")
            out[i, j] = int(q)
    return out


E8_CARTAN_INV = _exact_inverse(E8_CARTAN)


def exact_det(m: np.ndarray) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    a = [[int(x) for x in row] for row in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class LatticeForm:
    num_hyperbolic: int
    num_e8: int = 0
    e8_sign: int = -1

    def __post_init__(self):
        if self.num_hyperbolic < 0 or self.num_e8 < 0:
            raise ValueError("block counts must be nonnegative")
        if self.e8_sign not in (1, -1):
            raise ValueError("e8_sign must be +1 or -1")
        if self.rank == 0:
            raise ValueError("empty lattice")

    @property
    def rank(self) -> int:
        return 2 * self.num_hyperbolic + 8 * self.num_e8

    @property
    def signature(self) -> int:
        return 8 * self.e8_sign * self.num_e8

    @property
    def b_plus(self) -> int:
        return self.num_hyperbolic + (8 * self.num_e8 if self.e8_sign > 0 else 0)

    def e8_offset(self, block: int) -> int:
        return 2 * self.num_hyperbolic + 8 * block

    @property
    def gram(self) -> np.ndarray:
        return _gram(self)

    @property
    def gram_inverse(self) -> np.ndarray:
        return _gram_inverse(self)

    def to_json(self) -> dict:
        return {"h": self.num_hyperbolic, "e8": self.num_e8, "e8_sign": self.e8_sign}

    @classmethod
    def from_json(cls, data: dict) -> "LatticeForm":
        return cls(int(data["h"]), int(data["e8"]), int(data.get("e8_sign", -1)))

    def __str__(self) -> str:
        parts = []
        if self.num_hyperbolic:
            parts.append(f"{self.num_hyperbolic}H")
        if self.num_e8:
            parts.append(f"{self.num_e8}E8({'+' if self.e8_sign > 0 else '-'}1)")
        return " + ".join(parts)


def _block_diag(form: LatticeForm, hyp: np.ndarray, e8: np.ndarray) -> np.ndarray:
    g = np.zeros((form.rank, form.rank), dtype=object)
    for k in range(form.num_hyperbolic):
        g[2 * k:2 * k + 2, 2 * k:2 * k + 2] = hyp
    for k in range(form.num_e8):
        o = form.e8_offset(k)
        g[o:o + 8, o:o + 8] = e8
    return g


@lru_cache(maxsize=64)
def _gram(form: LatticeForm) -> np.ndarray:
    g = _block_diag(form, HYPERBOLIC, form.e8_sign * E8_CARTAN)
    g.flags.writeable = False
    return g


@lru_cache(maxsize=64)
def _gram_inverse(form: LatticeForm) -> np.ndarray:
    g = _block_diag(form, HYPERBOLIC, form.e8_sign * E8_CARTAN_INV)
    g.flags.writeable = False
    return g


def as_vector(form: LatticeForm, v: Sequence[int]) -> np.ndarray:
    out = np.array([int(x) for x in v], dtype=object)
    if out.shape != (form.rank,):
        raise ValueError(f"vector of length {len(out)} does not fit a lattice of rank {form.rank}")
    return out


def basis_vector(form: LatticeForm, index: int) -> np.ndarray:
    e = np.zeros(form.rank, dtype=object)
    e[index] = 1
    return e


def hyperbolic_x(form: LatticeForm, block: int) -> np.ndarray:
    return basis_vector(form, 2 * block)


def hyperbolic_y(form: LatticeForm, block: int) -> np.ndarray:
    return basis_vector(form, 2 * block + 1)


def e8_root(form: LatticeForm, block: int = 0, node: int = 0) -> np.ndarray:
    """A simple root of an E8 block; its square is 2*e8_sign."""
    return basis_vector(form, form.e8_offset(block) + node)


def pair(form: LatticeForm, u: np.ndarray, v: np.ndarray) -> int:
    return int(u.dot(form.gram.dot(v)))


class VectorInvariants(NamedTuple):
    divisibility: int
    square: int
    characteristic: bool


def vector_invariants(form: LatticeForm, v: Sequence[int]) -> VectorInvariants:
    """Divisibility, self-intersection and type of ``v``.

    The characteristic test is done on basis vectors, which suffices by
    linearity of ``w -> v.w - w.w`` mod 2.
    """
    v = as_vector(form, v)
    div = 0
    for x in v:
        div = gcd(div, int(x))
    gv = form.gram.dot(v)
    diag = form.gram.diagonal()
    characteristic = all((int(p) - int(d)) % 2 == 0 for p, d in zip(gv, diag))
    return VectorInvariants(div, int(v.dot(gv)), characteristic)


def is_isometry(form: LatticeForm, m: np.ndarray) -> bool:
    g = form.gram
    if m.shape != g.shape:
        return False
    return bool(np.array_equal(m.T.dot(g).dot(m), g))


def isometry_inverse(form: LatticeForm, m: np.ndarray) -> np.ndarray:
    # M^T G M = G  =>  M^{-1} = G^{-1} M^T G
    return form.gram_inverse.dot(m.T).dot(form.gram)


def transvection(g: np.ndarray, u: np.ndarray, w: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Eichler transvection E_{u,w} applied to the columns of ``z``.

    E_{u,w}(z) = z + (z.u)w - (z.w)u - (w.w/2)(z.u)u for isotropic u with u.w = 0.
    """
    ug, wg = u.dot(g), w.dot(g)
    if int(ug.dot(u)) != 0 or int(ug.dot(w)) != 0:
        raise ValueError("transvection needs u isotropic and orthogonal to w")
    half_w2 = int(wg.dot(w)) // 2
    zu = ug.dot(z)
    zw = wg.dot(z)
    return z + np.multiply.outer(w, zu) - np.multiply.outer(u, zw) \
        - half_w2 * np.multiply.outer(u, zu)


class _Walker:
    """Accumulates an isometry while tracking the image of one vector."""

    def __init__(self, form: LatticeForm, c: np.ndarray):
        self.form = form
        self.g = form.gram
        self.phi = np.identity(form.rank, dtype=object)
        self.v = c.copy()
        self.steps = 0

    def transvect(self, u: np.ndarray, w: np.ndarray) -> None:
        self.phi = transvection(self.g, u, w, self.phi)
        self.v = transvection(self.g, u, w, self.v[:, None])[:, 0]
        self.steps += 1

    def apply_matrix(self, m: np.ndarray) -> None:
        self.phi = m.dot(self.phi)
        self.v = m.dot(self.v)
        self.steps += 1


def _h1_flip(form: LatticeForm, swap: bool, negate: bool) -> np.ndarray:
    m = np.identity(form.rank, dtype=object)
    blk = np.array([[0, 1], [1, 0]] if swap else [[1, 0], [0, 1]], dtype=object)
    m[0:2, 0:2] = -blk if negate else blk
    return m


def _centered_div(a: int, b: int) -> int:
    """q with a - q*b in (-|b|/2, |b|/2]."""
    q, r = divmod(a, b)
    if 2 * abs(r) > abs(b):
        q += 1
    return q


def _finish(walk: _Walker) -> None:
    """With |v.x1| = 1, clear everything outside the first H block."""
    form, v = walk.form, walk.v
    x1 = hyperbolic_x(form, 0)
    b1 = int(v[1])
    rest = v.copy()
    rest[0] = rest[1] = 0
    if any(rest):
        walk.transvect(x1, -b1 * rest)
    if int(walk.v[1]) == -1:
        walk.apply_matrix(_h1_flip(form, swap=False, negate=True))


def _reduce_two_planes(walk: _Walker, max_steps: int) -> None:
    """Drive v.x1 to +-1 using the second hyperbolic block as a lever."""
    form = walk.form
    x1, y1 = hyperbolic_x(form, 0), hyperbolic_y(form, 0)
    x2, y2 = hyperbolic_x(form, 1), hyperbolic_y(form, 1)
    ginv = form.gram_inverse
    while abs(int(walk.v[1])) != 1:
        if walk.steps > max_steps:
            raise SplittingError(f"transvection reduction exceeded {max_steps} steps")
        v = walk.v
        a1, b1 = int(v[0]), int(v[1])
        pairing = form.gram.dot(v)
        a2, b2 = int(pairing[3]), int(pairing[2])  # v.y2, v.x2
        if b1 == 0:
            if a2:
                walk.transvect(y2, y1)          # b1 += a2
            elif b2:
                walk.transvect(x2, y1)          # b1 += b2
            else:
                k = next((k for k in range(4, form.rank) if pairing[k] != 0), None)
                if k is not None:
                    walk.transvect(x2, basis_vector(form, k))   # v.y2 -= v.e_k
                else:
                    walk.transvect(y1, x2)      # v.y2 = a1
            continue
        # reduce every pairing with the complement of H1 into (-|b1|/2, |b1|/2]
        target = np.zeros(form.rank, dtype=object)
        for k in range(2, form.rank):
            target[k] = -_centered_div(int(pairing[k]), b1)
        if any(target):
            walk.transvect(x1, ginv.dot(target))
            continue
        if a2 or b2:
            lever, r = (y2, a2) if a2 else (x2, b2)
            q = _centered_div(b1, r)
            if b1 - q * r == 0:
                q -= 1
            walk.transvect(lever, -q * y1)      # b1 -> b1 - q*r
            continue
        k = next((k for k in range(4, form.rank) if pairing[k] != 0), None)
        if k is not None:
            walk.transvect(x2, basis_vector(form, k))
            continue
        # v = a1 x1 + b1 y1 with gcd(a1, b1) = 1 and |b1| > 1
        walk.transvect(y1, x2)


def _search_one_plane(walk: _Walker, seed: int, max_steps: int) -> None:
    """Randomized greedy search for |v.x1| = 1 when only one H block exists."""
    form = walk.form
    rng = random.Random(seed)
    x1, y1 = hyperbolic_x(form, 0), hyperbolic_y(form, 0)
    e8_idx = list(range(2, form.rank))

    def potential(v):
        a1, b1 = abs(int(v[0])), abs(int(v[1]))
        nz = [t for t in (a1, b1) if t]
        return (min(nz) if nz else 10**30, sum(int(x) ** 2 for x in v[2:]))

    while True:
        v = walk.v
        if abs(int(v[1])) == 1:
            return
        if abs(int(v[0])) == 1:
            walk.apply_matrix(_h1_flip(form, swap=True, negate=False))
            return
        if walk.steps > max_steps or not e8_idx:
            raise SplittingError(
                "no isometry found moving the vector into the first hyperbolic block "
                f"within {max_steps} steps (single hyperbolic summand)")
        best = None
        for _ in range(48):
            u = x1 if rng.random() < 0.5 else y1
            s = np.zeros(form.rank, dtype=object)
            for _ in range(rng.randint(1, 2)):
                s[rng.choice(e8_idx)] += rng.choice((-1, 1)) * rng.randint(1, 3)
            score = potential(transvection(form.gram, u, s, v[:, None])[:, 0])
            if best is None or score < best[0]:
                best = (score, u, s)
        if best[0] < potential(v) or rng.random() < 0.3:
            walk.transvect(best[1], best[2])
        else:
            walk.steps += 1


def split_off_hyperbolic(form: LatticeForm, c: Sequence[int], *, seed: int = 0,
                         max_steps: int = 5000) -> np.ndarray:
    """Isometry Phi with Phi(c) = d*(m*x1 + y1), where c = d*c0, c0 primitive, c0^2 = 2m.

    With two or more hyperbolic summands the construction is a deterministic
    Euclidean reduction by Eichler transvections. With exactly one, a bounded
    randomized search is tried and :class:`SplittingError` is raised when it
    stalls.
    """
    if form.num_hyperbolic < 1:
        raise ValueError("lattice must contain a hyperbolic summand")
    c = as_vector(form, c)
    inv = vector_invariants(form, c)
    if inv.divisibility == 0:
        return np.identity(form.rank, dtype=object)
    d = inv.divisibility
    walk = _Walker(form, np.array([int(x) // d for x in c], dtype=object))
    if form.num_hyperbolic >= 2:
        _reduce_two_planes(walk, max_steps)
    else:
        _search_one_plane(walk, seed, max_steps)
    _finish(walk)
    m = inv.square // (2 * d * d)
    expected = np.zeros(form.rank, dtype=object)
    expected[0], expected[1] = m, 1
    if not np.array_equal(walk.v, expected) or not is_isometry(form, walk.phi):
        raise SplittingError("internal error: splitting post-condition violated")
    return walk.phi


@dataclass(frozen=True)
class InvolutionPair:
    """Commuting involutions phi1, phi2 of a lattice fixing a vector c.

    ``phi1``/``phi2`` act on the original basis; ``block_phi1``/``block_phi2``
    are the same maps in the split basis, where they are block scalar.
    """

    form: LatticeForm
    splitting: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray
    block_phi1: np.ndarray
    block_phi2: np.ndarray
    signs1: tuple
    signs2: tuple


def block_scalar_matrix(form: LatticeForm, h_signs: Sequence[int],
                        e8_signs: Sequence[int] | None = None) -> np.ndarray:
    e8_signs = [1] * form.num_e8 if e8_signs is None else list(e8_signs)
    if len(h_signs) != form.num_hyperbolic or len(e8_signs) != form.num_e8:
        raise ValueError("one sign per block is required")
    diag = []
    for s in h_signs:
        diag += [s, s]
    for s in e8_signs:
        diag += [s] * 8
    m = np.zeros((form.rank, form.rank), dtype=object)
    for k, s in enumerate(diag):
        m[k, k] = int(s)
    return m


def block_scalars(form: LatticeForm, m: np.ndarray) -> tuple[list[int], list[int]]:
    """Per-block scalars of a block-scalar +-1 matrix; ValueError otherwise."""
    if m.shape != (form.rank, form.rank):
        raise ValueError("matrix size does not match the lattice")
    diag = [int(x) for x in m.diagonal()]
    off = m.copy()
    for k in range(form.rank):
        off[k, k] = 0
    if any(int(x) for x in off.ravel()) or any(x not in (1, -1) for x in diag):
        raise ValueError("matrix is not block scalar with entries +-1")
    h = [diag[2 * k] for k in range(form.num_hyperbolic)]
    e8 = [diag[form.e8_offset(k)] for k in range(form.num_e8)]
    if diag != [x for s in h for x in (s, s)] + [x for s in e8 for x in [s] * 8]:
        raise ValueError("matrix is not constant on blocks")
    return h, e8


def positive_orientation_sign(form: LatticeForm, m: np.ndarray) -> int:
    """Determinant of a block-scalar involution on span{x_i + y_i} (+ E8(+1) blocks)."""
    h, e8 = block_scalars(form, m)
    det = 1
    for s in h:
        det *= s
    if form.e8_sign > 0:
        for s in e8:
            det *= s ** 8
    return det


def build_commuting_involutions(form: LatticeForm, c: Sequence[int], *,
                                seed: int = 0) -> InvolutionPair:
    """phi1 = -1 on hyperbolic blocks 2,3 and phi2 = -1 on blocks 3,4 of the split form."""
    if form.num_hyperbolic < 4:
        raise ValueError("need at least four hyperbolic summands")
    c = as_vector(form, c)
    phi = split_off_hyperbolic(form, c, seed=seed)
    rest = [1] * (form.num_hyperbolic - 4)
    signs1 = (1, -1, -1, 1, *rest)
    signs2 = (1, 1, -1, -1, *rest)
    b1 = block_scalar_matrix(form, signs1)
    b2 = block_scalar_matrix(form, signs2)
    phi_inv = isometry_inverse(form, phi)
    p1 = phi_inv.dot(b1).dot(phi)
    p2 = phi_inv.dot(b2).dot(phi)
    return InvolutionPair(form, phi, p1, p2, b1, b2, signs1, signs2)


class InvolutionChecks(NamedTuple):
    isometries: bool
    involutive: bool
    commute: bool
    fix_c: bool
    orientation: tuple[int, int]

    @property
    def ok(self) -> bool:
        return (self.isometries and self.involutive and self.commute and self.fix_c
                and self.orientation == (1, 1))


def check_involutions(pair_: InvolutionPair, c: Sequence[int]) -> InvolutionChecks:
    form = pair_.form
    c = as_vector(form, c)
    ident = np.identity(form.rank, dtype=object)
    p1, p2 = pair_.phi1, pair_.phi2
    return InvolutionChecks(
        isometries=is_isometry(form, p1) and is_isometry(form, p2),
        involutive=np.array_equal(p1.dot(p1), ident) and np.array_equal(p2.dot(p2), ident),
        commute=np.array_equal(p1.dot(p2), p2.dot(p1)),
        fix_c=np.array_equal(p1.dot(c), c) and np.array_equal(p2.dot(c), c),
        orientation=(positive_orientation_sign(form, pair_.block_phi1),
                     positive_orientation_sign(form, pair_.block_phi2)),
    )


def catalog_form(surface) -> LatticeForm:
    """Intersection form of a spin surface as p*H + q*E8(-1).

    ``surface`` is anything with ``invariants()`` returning ``b_plus``,
    ``sigma`` and ``spin`` (elliptic surfaces and complete intersections).
    """
    inv = surface.invariants()
    if not inv.spin:
        raise ValueError(f"{surface} is not spin; its intersection form is odd")
    if inv.sigma % 8:
        raise ValueError("signature of an even form must be divisible by 8")
    p, q = inv.b_plus, -inv.sigma // 8
    if q < 0:
        raise ValueError("positive signature not supported by this catalog")
    return LatticeForm(p, q, -1)


def matrix_to_json(m: np.ndarray) -> list:
    return [[int(x) for x in row] for row in m]
