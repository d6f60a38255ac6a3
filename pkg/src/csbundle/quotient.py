"""The Weyl quotient of the torus moduli and the degree of the quotient map.

W = Z/2 acts on ``T x T`` (coordinates ``(a, b)`` mod 1) by
``(a, b) -> (-a, -b)``. The quotient is embedded in R^3 by the invariants

    u = cos 2 pi a,  v = cos 2 pi b,  w = sin 2 pi a * sin 2 pi b

whose image is the surface ``(1 - u^2)(1 - v^2) = w^2``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BRANCH_MARGIN = 1e-3
SAME_POINT_TOL = 1e-9


class BranchProximity(ValueError):
    """The requested value lies too close to a branch image."""


class InconsistentCount(RuntimeError):
    pass


@dataclass(frozen=True)
class PillowcasePoint:
    u: float
    v: float
    w: float

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v, self.w])

    def relation_defect(self) -> float:
        return abs((1 - self.u**2) * (1 - self.v**2) - self.w**2)


def reduce_mod1(p) -> tuple[float, float]:
    a, b = np.mod(np.asarray(p, dtype=float), 1.0)
    # fold values within roundoff of 1 back to 0
    a = 0.0 if abs(a - 1.0) < 1e-12 else float(a)
    b = 0.0 if abs(b - 1.0) < 1e-12 else float(b)
    return a, b


def _torus_close(p, q, tol=SAME_POINT_TOL) -> bool:
    d = np.asarray(p) - np.asarray(q)
    d -= np.round(d)
    return bool(np.all(np.abs(d) < tol))


def weyl_orbit(p) -> list[tuple[float, float]]:
    """The orbit of p under W, reduced mod Z^2 (one point at fixed points)."""
    first = reduce_mod1(p)
    second = reduce_mod1(-np.asarray(first))
    return [first] if _torus_close(first, second) else [first, second]


def fixed_points() -> list[tuple[float, float]]:
    return [(0.0, 0.0), (0.0, 0.5), (0.5, 0.0), (0.5, 0.5)]


def quotient_map(p) -> PillowcasePoint:
    a, b = p
    sa, sb = np.sin(2 * np.pi * a), np.sin(2 * np.pi * b)
    return PillowcasePoint(float(np.cos(2 * np.pi * a)), float(np.cos(2 * np.pi * b)), float(sa * sb))


def jacobian(p) -> np.ndarray:
    """3x2 derivative of quotient_map at p (columns d/da, d/db)."""
    a, b = 2 * np.pi * np.asarray(p, dtype=float)
    tp = 2 * np.pi
    return tp * np.array(
        [
            [-np.sin(a), 0.0],
            [0.0, -np.sin(b)],
            [np.cos(a) * np.sin(b), np.sin(a) * np.cos(b)],
        ]
    )


def surface_normal(q: PillowcasePoint) -> np.ndarray:
    """Outward normal: minus the gradient of ``(1-u^2)(1-v^2) - w^2``.

    The function is positive inside the pillowcase, so its gradient points
    inward.
    """
    return np.array(
        [2 * q.u * (1 - q.v**2), 2 * q.v * (1 - q.u**2), 2 * q.w]
    )


BRANCH_IMAGES = np.array([quotient_map(p).as_array() for p in fixed_points()])


def branch_distance(q: PillowcasePoint) -> float:
    return float(np.min(np.linalg.norm(BRANCH_IMAGES - q.as_array(), axis=1)))


def preimages(q: PillowcasePoint, margin: float = BRANCH_MARGIN) -> list[tuple[float, float]]:
    """All torus points mapping to q, solved in closed form.

    Cosines fix ``a`` and ``b`` up to sign. With ``alpha, beta`` in
    ``[0, 1/2]`` both sines are non-negative, so the sign of ``w`` picks the
    pair of sign choices; at ``w == 0`` all four are kept and duplicates
    merged.
    """
    if branch_distance(q) < margin:
        raise BranchProximity(f"{q} lies within {margin:g} of a branch image")
    if q.relation_defect() > 1e-8:
        raise ValueError(f"{q} is not on the image surface")
    alpha = np.arccos(np.clip(q.u, -1, 1)) / (2 * np.pi)
    beta = np.arccos(np.clip(q.v, -1, 1)) / (2 * np.pi)
    if q.w > 0:
        signs = [(1, 1), (-1, -1)]
    elif q.w < 0:
        signs = [(1, -1), (-1, 1)]
    else:
        signs = [(1, 1), (-1, -1), (1, -1), (-1, 1)]
    found: list[tuple[float, float]] = []
    for sa, sb in signs:
        cand = reduce_mod1((sa * alpha, sb * beta))
        if np.linalg.norm(quotient_map(cand).as_array() - q.as_array()) > 1e-6:
            continue
        if not any(_torus_close(cand, f) for f in found):
            found.append(cand)
    return found


def local_sign(p) -> int:
    """Orientation sign of the quotient map at a regular point."""
    j = jacobian(p)
    n = surface_normal(quotient_map(p))
    det = np.linalg.det(np.column_stack([j[:, 0], j[:, 1], n]))
    if abs(det) < 1e-12:
        raise BranchProximity(f"map is not a local diffeomorphism at {p}")
    return 1 if det > 0 else -1


def preimage_count(q: PillowcasePoint, signed: bool = False) -> int:
    pts = preimages(q)
    return sum(local_sign(p) for p in pts) if signed else len(pts)


def covering_degree(samples: int, rng: np.random.Generator, max_tries: int = 1000) -> int:
    """Count preimages of random regular values; all counts must agree."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    counts = []
    tries = 0
    while len(counts) < samples:
        tries += 1
        if tries > max_tries * samples:
            raise RuntimeError("could not find regular values")
        q = quotient_map(rng.uniform(0.0, 1.0, size=2))
        try:
            unsigned = preimage_count(q)
            signed = preimage_count(q, signed=True)
        except BranchProximity:
            continue
        if abs(signed) != unsigned:
            raise InconsistentCount(f"preimages at {q} have mixed orientation signs")
        counts.append(signed)
    if len(set(counts)) != 1:
        raise InconsistentCount(f"preimage counts differ across samples: {sorted(set(counts))}")
    return counts[0]
