"""The representation variety Hom(pi_1 Sigma_g, SU(2))."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .lie import (
    IDENTITY,
    SU2Element,
    Su2Vector,
    X,
    exp_map,
    group_commutator,
    product,
    random_su2,
    rotation_between,
)
from .surface import Word, collapse_map, standard_presentation

FLAT_TOL = 1e-10
RANK_TOL = 1e-8


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class Representation:
    genus: int
    holonomies: tuple[SU2Element, ...]

    def __post_init__(self):
        if self.genus < 1:
            raise ValueError("genus must be >= 1")
        if len(self.holonomies) != 2 * self.genus:
            raise ValueError(
                f"expected {2 * self.genus} holonomies, got {len(self.holonomies)}"
            )
        object.__setattr__(self, "holonomies", tuple(self.holonomies))

    def is_flat(self, tol: float = FLAT_TOL) -> bool:
        return relator_defect(self) <= tol

    def allclose(self, other: "Representation", atol: float = 1e-12) -> bool:
        return self.genus == other.genus and all(
            a.allclose(b, atol) for a, b in zip(self.holonomies, other.holonomies)
        )

    def to_dict(self) -> dict:
        return {
            "genus": self.genus,
            "holonomies": [h.q.tolist() for h in self.holonomies],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Representation":
        return cls(int(d["genus"]), tuple(SU2Element(q) for q in d["holonomies"]))


def eval_word(rho: Representation, w) -> SU2Element:
    hol = rho.holonomies
    factors = []
    for gen, e in w:
        if not 0 <= gen < len(hol):
            raise IndexError(f"generator {gen} out of range for genus {rho.genus}")
        factors.append(hol[gen] if e == 1 else hol[gen].inverse())
    return product(factors)


def relator_defect(rho: Representation) -> float:
    """Operator norm of ``R - I`` for the evaluated surface relator R."""
    return eval_word(rho, standard_presentation(rho.genus).relator).distance(IDENTITY)


def torus_pair(alpha: float, beta: float, frame: SU2Element = IDENTITY) -> Representation:
    """Genus-1 pair ``(C exp(alpha X) C^-1, C exp(beta X) C^-1)``."""
    a, b = exp_map(alpha * X), exp_map(beta * X)
    return conjugate(Representation(1, (a, b)), frame)


def sample_commuting_pair(rng: np.random.Generator) -> Representation:
    alpha, beta = rng.uniform(-np.pi, np.pi, size=2)
    return torus_pair(alpha, beta, random_su2(rng))


def _angle(g: SU2Element) -> float:
    return float(np.arctan2(np.linalg.norm(g.vec), g.w))


_Y = Su2Vector([1.0, 0.0, 0.0])


def _trial_commutator(s: float) -> SU2Element:
    return group_commutator(exp_map(s * X), exp_map(s * _Y))


def solve_commutator(c: SU2Element) -> tuple[SU2Element, SU2Element]:
    """Return (A, B) with ``A B A^-1 B^-1 = c``.

    A = exp(sX), B = exp(sY) for perpendicular X, Y; the rotation angle of the
    commutator increases from 0 to pi as s runs over [0, pi/2]. Matching the
    angle (rather than the trace, which is ill-conditioned near +-I) and then
    conjugating gives the solution.
    """
    target = _angle(c)
    if target == 0.0:
        return IDENTITY, IDENTITY
    if target >= np.pi:
        s = np.pi / 2
    else:
        try:
            s = brentq(lambda s: _angle(_trial_commutator(s)) - target, 0.0, np.pi / 2,
                       xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
        except (RuntimeError, ValueError) as exc:
            raise ConvergenceError(f"commutator root-find failed: {exc}") from exc
    a, b = exp_map(s * X), exp_map(s * _Y)
    k = group_commutator(a, b)
    if np.linalg.norm(c.vec) > 0 and np.linalg.norm(k.vec) > 0:
        g = rotation_between(k.vec, c.vec)
        a, b = g * a * g.inverse(), g * b * g.inverse()
    if group_commutator(a, b).distance(c) > 1e-10:
        raise ConvergenceError("commutator solution misses the target")
    return a, b


def sample_flat(g: int, rng: np.random.Generator) -> Representation:
    if g < 1:
        raise ValueError("genus must be >= 1")
    if g == 1:
        return sample_commuting_pair(rng)
    hol = [random_su2(rng) for _ in range(2 * g - 2)]
    partial = product(
        group_commutator(hol[2 * i], hol[2 * i + 1]) for i in range(g - 1)
    )
    a, b = solve_commutator(partial.inverse())
    return Representation(g, tuple(hol) + (a, b))


def _commutant_dimension(rho: Representation, tol: float = RANK_TOL) -> int:
    eye = np.eye(2)
    blocks = []
    for h in rho.holonomies:
        m = h.matrix()
        # vec(M Z - Z M) for column-stacked vec
        blocks.append(np.kron(eye, m) - np.kron(m.T, eye))
    s = np.linalg.svd(np.vstack(blocks), compute_uv=False)
    return int(np.sum(s <= tol * max(1.0, s[0])))


def is_irreducible(rho: Representation, tol: float = RANK_TOL) -> bool:
    """True iff only scalar matrices commute with every holonomy."""
    return _commutant_dimension(rho, tol) == 1


def conjugate(rho: Representation, g: SU2Element) -> Representation:
    gi = g.inverse()
    return Representation(rho.genus, tuple(g * h * gi for h in rho.holonomies))


def pullback(rho1: Representation, g: int, tol: float = FLAT_TOL) -> Representation:
    """Pull a torus representation back along the collapse map of genus g."""
    if rho1.genus != 1:
        raise ValueError("pullback expects a genus-1 representation")
    if not rho1.is_flat(tol):
        raise ValueError(f"representation is not flat (defect {relator_defect(rho1):.3e})")
    cm = collapse_map(g)
    hol = tuple(eval_word(rho1, img) for img in cm.images)
    return Representation(g, hol)


def trace_coordinates(rho: Representation, words) -> list[float]:
    return [eval_word(rho, Word(w)).trace() for w in words]


def dump_dataset(reps, metadata: dict) -> str:
    """Serialise representations (with per-sample metadata) to JSON text."""
    reps = list(reps)
    genera = {r.genus for r, _ in reps}
    if len(genera) > 1:
        raise ValueError("dataset mixes genera")
    doc = {
        "genus": genera.pop() if genera else metadata.get("genus"),
        "metadata": metadata,
        "representations": [
            {"holonomies": [h.q.tolist() for h in r.holonomies], **meta}
            for r, meta in reps
        ],
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def load_dataset(text: str, tol: float = FLAT_TOL):
    """Parse a dataset and re-validate every representation.

    Returns ``(genus, metadata, [(Representation, per-sample-metadata)])``.
    """
    doc = json.loads(text)
    genus = int(doc["genus"])
    out = []
    for i, entry in enumerate(doc["representations"]):
        qs = np.array(entry["holonomies"], dtype=float)
        if qs.shape != (2 * genus, 4):
            raise ValueError(f"sample {i}: expected {2 * genus} quaternions")
        if np.any(np.abs(np.linalg.norm(qs, axis=1) - 1) > 1e-12):
            raise ValueError(f"sample {i}: quaternions are not unit length")
        rho = Representation(genus, tuple(SU2Element(q) for q in qs))
        d = relator_defect(rho)
        if d > tol:
            raise ValueError(f"sample {i}: relator defect {d:.3e} exceeds {tol:.1e}")
        meta = {k: v for k, v in entry.items() if k != "holonomies"}
        out.append((rho, meta))
    return genus, doc.get("metadata", {}), out
