"""Twisted (Ad rho) simplicial cohomology and the cup-product symplectic pairing.

Cochains take values in su(2) (coefficient 3-vectors). For an ordered
triangle (v0 v1 v2) with edge holonomies h, flatness reads
``h(v0v1) h(v1v2) = h(v0v2)`` and the differentials are

    (d f)(v0 v1)         = Ad_h(v0v1) f(v1) - f(v0)
    (d a)(v0 v1 v2)      = Ad_h(v0v1) a(v1v2) - a(v0v2) + a(v0v1)

The pairing of two 1-cocycles is

    sum_T sign(T) Tr( a(v0v1) Ad_h(v0v1) b(v1v2) )

over the fundamental cycle, i.e. the integral of Tr(a ^ b) over the surface.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .lie import IDENTITY, SU2Element, Su2Vector, adjoint_matrix
from .repvar import FLAT_TOL, Representation, relator_defect
from .surface import DeltaSurface, build_delta_complex, standard_presentation

SV_CUTOFF = 1e-8
COCYCLE_TOL = 1e-8


class RankAmbiguity(ArithmeticError):
    """Singular values cluster at the rank cutoff; the dimension is not decidable."""


@dataclass(frozen=True, eq=False)
class TwistedCochain:
    degree: int
    values: np.ndarray  # (n_cells, 3)

    def __post_init__(self):
        if self.degree not in (0, 1, 2):
            raise ValueError("degree must be 0, 1 or 2")
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 2 or vals.shape[1] != 3:
            raise ValueError("values must have shape (n_cells, 3)")
        object.__setattr__(self, "values", vals)

    def __add__(self, other: "TwistedCochain") -> "TwistedCochain":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        return TwistedCochain(self.degree, self.values + other.values)

    def __mul__(self, s: float) -> "TwistedCochain":
        return TwistedCochain(self.degree, s * self.values)

    __rmul__ = __mul__

    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)


@dataclass(frozen=True, eq=False)
class TwistedComplex:
    delta: DeltaSurface
    rep: Representation
    edge_holonomy: tuple[SU2Element, ...]

    @property
    def dims(self) -> tuple[int, int, int]:
        d = self.delta
        return d.n_vertices, d.n_edges, d.n_triangles

    def holonomy(self, edge: int, reverse: bool = False) -> SU2Element:
        h = self.edge_holonomy[edge]
        return h.inverse() if reverse else h

    def triangle_defects(self) -> np.ndarray:
        h = self.edge_holonomy
        return np.array(
            [(h[t.e01] * h[t.e12]).distance(h[t.e02]) for t in self.delta.triangles]
        )

    def d0_matrix(self) -> np.ndarray:
        nv, ne, _ = self.dims
        d = np.zeros((3 * ne, 3 * nv))
        for j, (tail, head) in enumerate(self.delta.edges):
            d[3 * j:3 * j + 3, 3 * head:3 * head + 3] += adjoint_matrix(self.edge_holonomy[j])
            d[3 * j:3 * j + 3, 3 * tail:3 * tail + 3] -= np.eye(3)
        return d

    def d1_matrix(self) -> np.ndarray:
        _, ne, nf = self.dims
        d = np.zeros((3 * nf, 3 * ne))
        for k, t in enumerate(self.delta.triangles):
            rows = slice(3 * k, 3 * k + 3)
            d[rows, 3 * t.e12:3 * t.e12 + 3] += adjoint_matrix(self.edge_holonomy[t.e01])
            d[rows, 3 * t.e02:3 * t.e02 + 3] -= np.eye(3)
            d[rows, 3 * t.e01:3 * t.e01 + 3] += np.eye(3)
        return d

    def zero_cochain(self, degree: int) -> TwistedCochain:
        return TwistedCochain(degree, np.zeros((self.dims[degree], 3)))


def build_twisted_complex(rep: Representation, tol: float = FLAT_TOL) -> TwistedComplex:
    """Spanning-tree gauge: the radial edge at corner 0 carries the identity.

    Perimeter edges carry the generator holonomies; the radial edge at corner
    k carries the inverse of the product of the first k relator letters.
    """
    defect = relator_defect(rep)
    if defect > tol:
        raise ValueError(f"representation is not flat (defect {defect:.3e})")
    delta = build_delta_complex(standard_presentation(rep.genus))
    g = rep.genus
    hol = list(rep.holonomies)
    prefix = IDENTITY
    radial = []
    for gen, e in delta.presentation.relator:
        radial.append(prefix.inverse())
        letter = hol[gen] if e == 1 else hol[gen].inverse()
        prefix = prefix * letter
    assert len(hol) == 2 * g
    return TwistedComplex(delta, rep, tuple(hol + radial))


def coboundary(tc: TwistedComplex, c: TwistedCochain) -> TwistedCochain:
    if c.degree == 0:
        return TwistedCochain(1, (tc.d0_matrix() @ c.flat()).reshape(-1, 3))
    if c.degree == 1:
        return TwistedCochain(2, (tc.d1_matrix() @ c.flat()).reshape(-1, 3))
    raise ValueError("coboundary of a 2-cochain is zero on a surface; degree-2 input rejected")


def _rank_split(s: np.ndarray, cutoff: float) -> tuple[int, float]:
    """Numerical nullity of a matrix with singular values ``s`` and the gap ratio."""
    below = s[s <= cutoff]
    above = s[s > cutoff]
    # padded zeros are exact, so floor the null side at the roundoff level
    floor = np.finfo(float).eps * (s.max() if s.size else 1.0) * max(s.size, 1)
    lo = max(below.max() if below.size else 0.0, floor)
    hi = above.min() if above.size else np.inf
    gap = hi / lo
    # anything within a decade of the cutoff is too close to call
    if np.any((s > cutoff / 10) & (s < cutoff * 10)):
        raise RankAmbiguity(f"singular values straddle the cutoff {cutoff:g}: {s}")
    return int(below.size), float(gap)


def harmonic_system(tc: TwistedComplex) -> np.ndarray:
    """Stacked operator whose kernel is ker d1 intersected with (im d0)^perp."""
    return np.vstack([tc.d1_matrix(), tc.d0_matrix().T])


def cohomology_dimension(tc: TwistedComplex, degree: int = 1,
                         cutoff: float = SV_CUTOFF) -> tuple[int, float]:
    """``(dim H^degree, singular-value gap ratio)``."""
    if degree == 0:
        m = tc.d0_matrix()
    elif degree == 1:
        m = harmonic_system(tc)
    elif degree == 2:
        m = tc.d1_matrix().T
    else:
        raise ValueError("degree must be 0, 1 or 2")
    s = np.linalg.svd(m, compute_uv=False)
    s = np.concatenate([s, np.zeros(m.shape[1] - s.size)])
    return _rank_split(s, cutoff)


def cohomology_basis(tc: TwistedComplex, degree: int = 1,
                     cutoff: float = SV_CUTOFF) -> list[TwistedCochain]:
    """Orthonormal cocycles spanning H^1, orthogonal to the coboundaries."""
    if degree != 1:
        raise ValueError("only degree 1 is supported")
    m = harmonic_system(tc)
    _, s, vt = np.linalg.svd(m, full_matrices=True)
    s_full = np.concatenate([s, np.zeros(vt.shape[0] - s.size)])
    nullity, _ = _rank_split(s_full, cutoff)
    null = vt[vt.shape[0] - nullity:]
    return [TwistedCochain(1, v.reshape(-1, 3)) for v in null]


def cocycle_from_tangent(tc: TwistedComplex, perimeter_values) -> TwistedCochain:
    """Extend values on the generator edges to a 1-cocycle.

    ``perimeter_values[j]`` is the value on the edge of generator j (an
    Su2Vector or 3-vector). The radial values are propagated around the
    polygon from corner 0 (where the value is 0); failure to close up means
    the input is not a group cocycle.
    """
    delta = tc.delta
    g = delta.genus
    n = 4 * g
    vals = np.zeros((delta.n_edges, 3))
    for j, v in enumerate(perimeter_values):
        vals[j] = v.v if isinstance(v, Su2Vector) else np.asarray(v, float)
    radial = np.zeros((n + 1, 3))
    for k, t in enumerate(delta.triangles):
        ad = adjoint_matrix(tc.edge_holonomy[t.e01])
        edge_val = vals[t.e01]
        if t.sign == 1:  # triangle (k, k+1, centre)
            radial[k + 1] = ad.T @ (radial[k] - edge_val)
        else:  # triangle (k+1, k, centre)
            radial[k + 1] = ad @ radial[k] + edge_val
    closure = np.linalg.norm(radial[n] - radial[0])
    if closure > COCYCLE_TOL * max(1.0, np.abs(vals).max()):
        raise ValueError(f"perimeter values do not define a cocycle (closure {closure:.3e})")
    vals[2 * g:] = radial[:n]
    return TwistedCochain(1, vals)


def cup_pairing(tc: TwistedComplex, a: TwistedCochain, b: TwistedCochain,
                tol: float = COCYCLE_TOL) -> float:
    for name, c in (("first", a), ("second", b)):
        if c.degree != 1:
            raise ValueError(f"{name} argument must be a 1-cochain")
        err = np.abs(coboundary(tc, c).values).max()
        scale = max(1.0, np.abs(c.values).max())
        if err > tol * scale:
            raise ValueError(f"{name} argument is not a cocycle (|d c| = {err:.3e})")
    total = 0.0
    for t in tc.delta.triangles:
        transported = adjoint_matrix(tc.edge_holonomy[t.e01]) @ b.values[t.e12]
        total += t.sign * (-2.0) * (a.values[t.e01] @ transported)
    return float(total)


def goldman_form(tc: TwistedComplex, a: TwistedCochain, b: TwistedCochain) -> complex:
    """``(i / 2 pi) * integral Tr(a ^ b)``; purely imaginary."""
    return 1j / (2 * np.pi) * cup_pairing(tc, a, b)


def pairing_matrix(tc: TwistedComplex, basis) -> np.ndarray:
    n = len(basis)
    m = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            m[i, j] = cup_pairing(tc, basis[i], basis[j])
    return m


def pairing_matrix_csv(m: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["row", "col", "value"])
    for i in range(m.shape[0]):
        for j in range(m.shape[1]):
            w.writerow([i, j, repr(float(m[i, j]))])
    return buf.getvalue()


def transport_cochain(c: TwistedCochain, g: SU2Element) -> TwistedCochain:
    """Ad_g applied pointwise; matches the complex of the conjugated representation."""
    return TwistedCochain(c.degree, c.values @ adjoint_matrix(g).T)


def torus_direction(rep: Representation) -> np.ndarray:
    """Unit su(2) direction fixed by all holonomies of an abelian representation."""
    for h in rep.holonomies:
        n = np.linalg.norm(h.vec)
        if n > 1e-8:
            return h.vec / n
    return np.array([0.0, 0.0, 1.0])


def torus_tangents(tc: TwistedComplex) -> tuple[TwistedCochain, TwistedCochain]:
    """Cocycles of d/da and d/db for the family A = xi (a dx + b dy).

    Holonomies are exp(2 pi a xi), exp(2 pi b xi) on the first handle, so the
    tangent values on the first two generator edges are 2 pi xi.
    """
    xi = torus_direction(tc.rep)
    zeros = [np.zeros(3)] * (2 * tc.rep.genus)
    ta, tb = list(zeros), list(zeros)
    ta[0] = 2 * np.pi * xi
    tb[1] = 2 * np.pi * xi
    return cocycle_from_tangent(tc, ta), cocycle_from_tangent(tc, tb)

