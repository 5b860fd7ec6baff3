"""Loops in SO(4), their lifts to Spin(4) = S^3 x S^3, and the pi_1 class.

R^4 is identified with the quaternions via e1 -> 1, e2 -> i, e3 -> j, e4 -> k,
and a pair of unit quaternions (qL, qR) acts by x -> qL * x * conj(qR).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

ORTHO_TOL = 1e-9
RESIDUAL_TOL = 1e-6
CENTER_TOL = 1e-3
MAX_STEP = 0.5
DEFAULT_SAMPLES = 1024

Path = Callable[[float], np.ndarray]


class LiftError(ValueError):
    pass


def qmul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Hamilton product; works on stacked (..., 4) arrays."""
    w1, x1, y1, z1 = np.moveaxis(p, -1, 0)
    w2, x2, y2, z2 = np.moveaxis(q, -1, 0)
    return np.stack([
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
        w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
    ], axis=-1)


def qconj(q: np.ndarray) -> np.ndarray:
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def _bilinear_basis() -> np.ndarray:
    """C[a, b] is the matrix of x -> e_a x conj(e_b)."""
    e = np.identity(4)
    c = np.zeros((4, 4, 4, 4))
    for a in range(4):
        for b in range(4):
            for n in range(4):
                c[a, b, :, n] = qmul(qmul(e[a], e[n]), qconj(e[b]))
    return c


_C = _bilinear_basis()


@dataclass(frozen=True)
class SpinElement:
    left: np.ndarray
    right: np.ndarray

    @classmethod
    def identity(cls) -> "SpinElement":
        one = np.array([1.0, 0.0, 0.0, 0.0])
        return cls(one, one.copy())

    def __post_init__(self):
        for q in (self.left, self.right):
            if abs(np.linalg.norm(q) - 1.0) > ORTHO_TOL:
                raise ValueError("SpinElement components must be unit quaternions")

    def __neg__(self) -> "SpinElement":
        return SpinElement(-self.left, -self.right)

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.left, self.right])

    def distance(self, other: "SpinElement") -> float:
        return float(np.max(np.abs(self.as_vector() - other.as_vector())))

    def to_matrix(self) -> np.ndarray:
        return spin_to_so4(self.left, self.right)


def spin_to_so4(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    return np.einsum("a,b,abmn->mn", left, right, _C)


def check_rotation(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.shape != (4, 4):
        raise ValueError("rotation must be a 4x4 matrix")
    if np.max(np.abs(m.T @ m - np.identity(4))) >= ORTHO_TOL:
        raise ValueError("matrix is not orthogonal")
    if abs(np.linalg.det(m) - 1.0) >= ORTHO_TOL:
        raise ValueError("matrix does not have determinant +1")
    return m


def rotation_in_plane(axis1: int, axis2: int, theta: float) -> np.ndarray:
    """Rotation by ``theta`` in the (e_axis1, e_axis2)-plane; axes are 1-based."""
    if axis1 == axis2:
        raise ValueError("rotation plane needs two distinct axes")
    if not (1 <= axis1 <= 4 and 1 <= axis2 <= 4):
        raise ValueError("axes must lie in 1..4")
    a, b = axis1 - 1, axis2 - 1
    m = np.identity(4)
    c, s = math.cos(theta), math.sin(theta)
    m[a, a] = c
    m[b, b] = c
    m[a, b] = -s
    m[b, a] = s
    return m


def _pairs_from_matrices(ms: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # the C[a, b] are orthogonal with Frobenius norm^2 = 4, so K = qL qR^T
    k = np.einsum("abmn,smn->sab", _C, ms) / 4.0
    col = np.argmax(np.linalg.norm(k, axis=1), axis=1)
    left = k[np.arange(len(ms)), :, col]
    left /= np.linalg.norm(left, axis=1, keepdims=True)
    right = np.einsum("sab,sa->sb", k, left)
    right /= np.linalg.norm(right, axis=1, keepdims=True)
    return left, right


def so4_to_spin(m: np.ndarray, near: SpinElement | None = None) -> SpinElement:
    """Lift of ``m``; of the two preimages, the one closer to ``near``."""
    m = check_rotation(m)
    near = SpinElement.identity() if near is None else near
    left, right = _pairs_from_matrices(m[None])
    left, right = left[0], right[0]
    if np.max(np.abs(spin_to_so4(left, right) - m)) >= RESIDUAL_TOL:
        raise LiftError("quaternion pair does not reproduce the rotation")
    if left @ near.left + right @ near.right < 0:
        left, right = -left, -right
    return SpinElement(left, right)


@dataclass(frozen=True)
class RotationPath:
    """Sampled path in SO(4); consecutive samples closer than ``step_bound``."""

    times: np.ndarray
    samples: np.ndarray
    step_bound: float = MAX_STEP

    def __post_init__(self):
        if self.samples.ndim != 3 or self.samples.shape[1:] != (4, 4):
            raise ValueError("samples must have shape (N, 4, 4)")
        if len(self.samples) != len(self.times) or len(self.samples) < 2:
            raise ValueError("need at least two samples with matching times")
        if self.step_bound >= MAX_STEP:
            object.__setattr__(self, "step_bound", MAX_STEP)
        gram = np.einsum("sji,sjk->sik", self.samples, self.samples)
        if np.max(np.abs(gram - np.identity(4))) >= ORTHO_TOL:
            raise ValueError("path leaves O(4)")
        if np.max(np.abs(np.linalg.det(self.samples) - 1.0)) >= ORTHO_TOL:
            raise ValueError("path leaves SO(4)")
        steps = np.max(np.abs(np.diff(self.samples, axis=0)), axis=(1, 2))
        if np.max(steps) >= self.step_bound:
            raise ValueError(f"consecutive samples differ by {np.max(steps):.3g}; refine sampling")

    @classmethod
    def sample(cls, f: Path, samples: int = DEFAULT_SAMPLES, t0: float = 0.0,
               t1: float = 1.0) -> "RotationPath":
        times = np.linspace(t0, t1, samples + 1)
        return cls(times, np.stack([f(float(t)) for t in times]))

    @property
    def is_loop(self) -> bool:
        return float(np.max(np.abs(self.samples[0] - self.samples[-1]))) < ORTHO_TOL

    def concat(self, other: "RotationPath") -> "RotationPath":
        if np.max(np.abs(self.samples[-1] - other.samples[0])) >= ORTHO_TOL:
            raise ValueError("paths do not share an endpoint")
        times = np.concatenate([self.times, self.times[-1] + other.times[1:] - other.times[0]])
        return RotationPath(times, np.concatenate([self.samples, other.samples[1:]]))


def lift_path(path: RotationPath, start: SpinElement | None = None) -> np.ndarray:
    """Continuous lift as an (N, 8) array of (qL, qR) rows."""
    left, right = _pairs_from_matrices(path.samples)
    recon = np.einsum("sa,sb,abmn->smn", left, right, _C)
    if np.max(np.abs(recon - path.samples)) >= RESIDUAL_TOL:
        raise LiftError("quaternion pair does not reproduce a sample")
    lifted = np.concatenate([left, right], axis=1)
    prev = (SpinElement.identity() if start is None else start).as_vector()
    for s in range(len(lifted)):
        if lifted[s] @ prev < 0:
            lifted[s] = -lifted[s]
        prev = lifted[s]
    return lifted


def loop_pi1_class(path: RotationPath) -> int:
    """0 if the lift of the loop closes up, 1 if it ends at the antipodal lift."""
    if not path.is_loop:
        raise ValueError("path is not a loop")
    lifted = lift_path(path)
    start, end = lifted[0], lifted[-1]
    if np.max(np.abs(end - start)) < CENTER_TOL:
        return 0
    if np.max(np.abs(end + start)) < CENTER_TOL:
        return 1
    raise LiftError("lift endpoint is near neither preimage of the base point; sample more densely")


# the concrete paths of the commutator construction

SIGMA1 = np.diag([1.0, -1.0, 1.0, -1.0])
SIGMA2 = np.diag([-1.0, -1.0, 1.0, 1.0])


def h1(t: float) -> np.ndarray:
    """Path from sigma1 to the identity: rotation by (1-t)pi in the e2,e4-plane."""
    return rotation_in_plane(2, 4, (1.0 - t) * math.pi)


def h2(t: float) -> np.ndarray:
    """Path from sigma2 to the identity: rotation by (1-t)pi in the e1,e2-plane."""
    return rotation_in_plane(1, 2, (1.0 - t) * math.pi)


def h2_inverse_squared(t: float) -> np.ndarray:
    return np.linalg.matrix_power(h2(t).T, 2)


def commutator(t: float) -> np.ndarray:
    """p(t) = h1 h2 h1^-1 h2^-1."""
    a, b = h1(t), h2(t)
    return a @ b @ a.T @ b.T


def homotopy_q(s: float) -> Path:
    """q_s(t) = h1(min(t, s)) h2(t) h1(min(t, s))^-1."""

    def q(t: float) -> np.ndarray:
        a = h1(min(t, s))
        return a @ h2(t) @ a.T

    return q


def homotopy_endpoints_ok(params=(0.0, 0.25, 0.5, 0.75, 1.0), tol: float = 1e-12) -> bool:
    """q_s runs from sigma2^-1 to the identity for every s."""
    start, end = SIGMA2.T, np.identity(4)
    for s in params:
        q = homotopy_q(s)
        if np.max(np.abs(q(0.0) - start)) > tol or np.max(np.abs(q(1.0) - end)) > tol:
            return False
    return True


def constant_identity(t: float) -> np.ndarray:
    return np.identity(4)


def smooth_step(r: float) -> float:
    """0 on [0, 1/3], 1 on [2/3, 1], quintic smoothstep in between."""
    s = min(max((r - 1.0 / 3.0) * 3.0, 0.0), 1.0)
    return s ** 3 * (10.0 - 15.0 * s + 6.0 * s * s)


def twist_map_eval(x, loop: Path = commutator,
                   profile: Callable[[float], float] = smooth_step) -> np.ndarray:
    """tau(x) = p(t(|x|)) x on the closed unit ball."""
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    if r > 1.0 + 1e-12:
        raise ValueError("point lies outside the unit ball")
    return loop(profile(r)) @ x


def local_map(h: Path, profile: Callable[[float], float] = smooth_step) -> Callable:
    """x -> h(t(|x|)) x and its inverse; these are the cut-off involution models."""

    def forward(x):
        x = np.asarray(x, dtype=float)
        return h(profile(float(np.linalg.norm(x)))) @ x

    def inverse(x):
        x = np.asarray(x, dtype=float)
        return h(profile(float(np.linalg.norm(x)))).T @ x

    return forward, inverse


def commutator_loop(samples: int = DEFAULT_SAMPLES) -> RotationPath:
    return RotationPath.sample(commutator, samples)


def full_turn_loop(samples: int = DEFAULT_SAMPLES) -> RotationPath:
    return RotationPath.sample(h2_inverse_squared, samples)
