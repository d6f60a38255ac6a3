"""SU(2) and su(2) arithmetic.

Group elements are unit quaternions ``(w, x, y, z)`` standing for the matrix

    w*I + x*(i sigma_1) + y*(i sigma_2) + z*(i sigma_3)

and Lie algebra elements are real 3-vectors ``v`` standing for
``v[0]*(i sigma_1) + v[1]*(i sigma_2) + v[2]*(i sigma_3)``.

Basis convention (shared by every module): the torus generator
``X = diag(i, -i)`` is the third basis vector, ``X == Su2Vector([0, 0, 1])``.
With this normalisation ``Tr(xi eta) = -2 <v, w>``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

BRANCH_CUTOFF = 1e-9


class BranchPointError(ValueError):
    """Raised when the principal logarithm is requested at -identity."""


def _qmul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    # (w1 + i v1.s)(w2 + i v2.s) = w1 w2 - v1.v2 + i (w1 v2 + w2 v1 - v1 x v2).s
    w = p[0] * q[0] - p[1:] @ q[1:]
    v = p[0] * q[1:] + q[0] * p[1:] - np.cross(p[1:], q[1:])
    return np.concatenate(([w], v))


@dataclass(frozen=True, eq=False)
class Su2Vector:
    """Traceless anti-Hermitian 2x2 matrix, stored by its coefficient vector."""

    v: np.ndarray

    def __post_init__(self):
        arr = np.array(self.v, dtype=float).reshape(3)
        arr.setflags(write=False)
        object.__setattr__(self, "v", arr)

    def matrix(self) -> np.ndarray:
        return 1j * np.einsum("i,ijk->jk", self.v, PAULI)

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "Su2Vector":
        # coefficient of i sigma_k is Tr(sigma_k m) / (2i)
        return cls(np.real(np.einsum("ijk,kj->i", PAULI, m) / 2j))

    def norm(self) -> float:
        return float(np.linalg.norm(self.v))

    def __add__(self, other: "Su2Vector") -> "Su2Vector":
        return Su2Vector(self.v + other.v)

    def __sub__(self, other: "Su2Vector") -> "Su2Vector":
        return Su2Vector(self.v - other.v)

    def __neg__(self) -> "Su2Vector":
        return Su2Vector(-self.v)

    def __mul__(self, s: float) -> "Su2Vector":
        return Su2Vector(s * self.v)

    __rmul__ = __mul__

    def allclose(self, other: "Su2Vector", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.v, other.v, rtol=0, atol=atol))

    def __repr__(self):
        return f"Su2Vector({self.v.tolist()})"


@dataclass(frozen=True, eq=False)
class SU2Element:
    """Unit quaternion ``q = (w, x, y, z)``; renormalised on construction."""

    q: np.ndarray

    def __post_init__(self):
        arr = np.array(self.q, dtype=float).reshape(4)
        n = np.linalg.norm(arr)
        if n == 0:
            raise ValueError("zero quaternion is not in SU(2)")
        # leave already-unit input untouched so serialisation round-trips exactly
        if abs(n - 1.0) > 4 * np.finfo(float).eps:
            arr = arr / n
        arr.setflags(write=False)
        object.__setattr__(self, "q", arr)

    @property
    def w(self) -> float:
        return float(self.q[0])

    @property
    def vec(self) -> np.ndarray:
        return self.q[1:]

    def matrix(self) -> np.ndarray:
        return self.q[0] * np.eye(2) + 1j * np.einsum("i,ijk->jk", self.q[1:], PAULI)

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "SU2Element":
        w = np.real(np.trace(m)) / 2
        v = np.real(np.einsum("ijk,kj->i", PAULI, m) / 2j)
        return cls(np.concatenate(([w], v)))

    def inverse(self) -> "SU2Element":
        return SU2Element(self.q * np.array([1.0, -1.0, -1.0, -1.0]))

    def trace(self) -> float:
        return 2.0 * self.q[0]

    def __mul__(self, other: "SU2Element") -> "SU2Element":
        return multiply(self, other)

    def distance(self, other: "SU2Element") -> float:
        """Operator norm of the matrix difference."""
        # a difference of quaternions is a real multiple of a unitary matrix
        return float(np.linalg.norm(self.q - other.q))

    def allclose(self, other: "SU2Element", atol: float = 1e-12) -> bool:
        return self.distance(other) <= atol

    def __repr__(self):
        return f"SU2Element({self.q.tolist()})"


IDENTITY = SU2Element([1.0, 0.0, 0.0, 0.0])
X = Su2Vector([0.0, 0.0, 1.0])
BASIS = (Su2Vector([1.0, 0.0, 0.0]), Su2Vector([0.0, 1.0, 0.0]), X)


def multiply(g: SU2Element, h: SU2Element) -> SU2Element:
    return SU2Element(_qmul(g.q, h.q))


def product(elements) -> SU2Element:
    out = IDENTITY.q
    for g in elements:
        out = _qmul(out, g.q)
    return SU2Element(out)


def exp_map(xi: Su2Vector) -> SU2Element:
    """Closed-form exponential: ``exp(xi) = cos|v| + sin|v| v/|v|``."""
    theta = np.linalg.norm(xi.v)
    if theta == 0.0:
        return IDENTITY
    return SU2Element(np.concatenate(([np.cos(theta)], np.sin(theta) / theta * xi.v)))


def log_map(g: SU2Element) -> Su2Vector:
    """Principal logarithm, ``|result| <= pi``.

    Raises BranchPointError within ``BRANCH_CUTOFF`` of -identity, where the
    logarithm is not unique.
    """
    if g.distance(SU2Element([-1.0, 0, 0, 0])) < BRANCH_CUTOFF:
        raise BranchPointError("log_map is multivalued at -identity")
    s = np.linalg.norm(g.vec)
    if s == 0.0:
        return Su2Vector(np.zeros(3))
    theta = np.arctan2(s, g.w)
    return Su2Vector(theta / s * g.vec)


def adjoint(g: SU2Element, xi: Su2Vector) -> Su2Vector:
    """``g xi g^-1``."""
    pure = np.concatenate(([0.0], xi.v))
    out = _qmul(_qmul(g.q, pure), g.inverse().q)
    return Su2Vector(out[1:])


def adjoint_matrix(g: SU2Element) -> np.ndarray:
    """3x3 rotation matrix of Ad_g acting on coefficient vectors."""
    w, x, y, z = g.q
    # Ad_g acts on v by the rotation of angle 2*theta about -vec(g)/|vec(g)|
    # (sign fixed by the product convention of _qmul); written out directly:
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y + w * z), 2 * (x * z - w * y)],
            [2 * (x * y - w * z), 1 - 2 * (x * x + z * z), 2 * (y * z + w * x)],
            [2 * (x * z + w * y), 2 * (y * z - w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def trace_form(xi: Su2Vector, eta: Su2Vector) -> float:
    """``Tr(xi eta)``; negative definite, ``Tr(X^2) = -2``."""
    return float(-2.0 * xi.v @ eta.v)


def group_commutator(a: SU2Element, b: SU2Element) -> SU2Element:
    """``a b a^-1 b^-1``."""
    return product((a, b, a.inverse(), b.inverse()))


def random_su2(rng: np.random.Generator) -> SU2Element:
    """Haar-distributed element (normalised Gaussian quaternion)."""
    return SU2Element(rng.standard_normal(4))


def rotation_between(u: np.ndarray, v: np.ndarray) -> SU2Element:
    """An element g with ``Ad_g (u/|u|) = v/|v|``."""
    u = np.asarray(u, float) / np.linalg.norm(u)
    v = np.asarray(v, float) / np.linalg.norm(v)
    c = float(np.clip(u @ v, -1.0, 1.0))
    axis = np.cross(u, v)
    s = np.linalg.norm(axis)
    if s < 1e-14:
        if c > 0:
            return IDENTITY
        # antipodal: rotate by pi about any axis orthogonal to u
        trial = np.eye(3)[np.argmin(np.abs(u))]
        axis = np.cross(u, trial)
        axis /= np.linalg.norm(axis)
        g = SU2Element(np.concatenate(([0.0], axis)))
    else:
        angle = np.arctan2(s, c)
        axis = axis / s
        g = exp_map(Su2Vector(-0.5 * angle * axis))
    return g
