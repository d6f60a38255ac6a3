"""Combinatorial closed oriented surfaces of genus g >= 1.

Generators are numbered ``0 .. 2g-1`` with ``a_i = 2*(i-1)`` and
``b_i = 2*(i-1) + 1``; a letter is a pair ``(generator, exponent)``.

The Delta-complex cones the 4g-gon (boundary word = relator, read
counterclockwise) from its barycentre:

* vertex 0 is the single perimeter vertex, vertex 1 is the centre;
* edges ``0 .. 2g-1`` are the perimeter edges, edge ``j`` carries generator j;
* edges ``2g + k`` (k = 0 .. 4g-1) are radial, oriented corner k -> centre;
* triangle k sits over relator letter k. Its ordered vertices are
  (tail corner, head corner, centre), where tail/head refer to the
  orientation of the perimeter edge. The triangle is positively oriented
  (counterclockwise) iff the letter has exponent +1.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

Letter = tuple[int, int]


def free_reduce(letters) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for gen, e in letters:
        if e not in (1, -1):
            raise ValueError(f"exponent must be +-1, got {e}")
        if out and out[-1] == (gen, -e):
            out.pop()
        else:
            out.append((int(gen), int(e)))
    return tuple(out)


class Word(tuple):
    """Freely reduced word in the surface generators."""

    def __new__(cls, letters=()):
        return super().__new__(cls, free_reduce(letters))

    def inverse(self) -> "Word":
        return Word((g, -e) for g, e in reversed(self))

    def __add__(self, other) -> "Word":
        return Word(tuple(self) + tuple(other))

    def to_ints(self) -> list[int]:
        """Signed 1-based encoding: generator j with exponent e -> e*(j+1)."""
        return [e * (g + 1) for g, e in self]

    @classmethod
    def from_ints(cls, ints) -> "Word":
        return cls((abs(k) - 1, 1 if k > 0 else -1) for k in ints)


def generator_name(j: int) -> str:
    return f"{'ab'[j % 2]}{j // 2 + 1}"


@dataclass(frozen=True)
class SurfacePresentation:
    genus: int
    generators: tuple[str, ...]
    relator: Word

    def to_dict(self) -> dict:
        return {
            "genus": self.genus,
            "generators": list(self.generators),
            "relator": self.relator.to_ints(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SurfacePresentation":
        p = standard_presentation(int(d["genus"]))
        if Word.from_ints(d["relator"]) != p.relator:
            raise ValueError("relator does not match the standard presentation")
        return p


def standard_presentation(g: int) -> SurfacePresentation:
    """Presentation with relator ``prod_i a_i b_i a_i^-1 b_i^-1``."""
    if int(g) != g or g < 1:
        raise ValueError(f"genus must be a positive integer, got {g!r}")
    g = int(g)
    letters = []
    for i in range(g):
        a, b = 2 * i, 2 * i + 1
        letters += [(a, 1), (b, 1), (a, -1), (b, -1)]
    rel = Word(letters)
    assert len(rel) == 4 * g
    return SurfacePresentation(g, tuple(generator_name(j) for j in range(2 * g)), rel)


@dataclass(frozen=True)
class Triangle:
    vertices: tuple[int, int, int]
    # edges opposite in the order [v0 v1], [v1 v2], [v0 v2]
    e01: int
    e12: int
    e02: int
    sign: int
    corners: tuple[int, int]  # polygon corner indices of (v0, v1)


@dataclass(frozen=True)
class DeltaSurface:
    presentation: SurfacePresentation
    edges: tuple[tuple[int, int], ...]  # (tail, head) vertex indices
    triangles: tuple[Triangle, ...]
    n_vertices: int = 2
    perimeter_label: dict = field(default_factory=dict)  # edge -> generator

    @property
    def genus(self) -> int:
        return self.presentation.genus

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_triangles

    def radial_edge(self, corner: int) -> int:
        return 2 * self.genus + corner % (4 * self.genus)

    @property
    def fundamental_cycle(self) -> np.ndarray:
        return np.array([t.sign for t in self.triangles], dtype=int)

    def boundary1(self) -> np.ndarray:
        d = np.zeros((self.n_vertices, self.n_edges), dtype=int)
        for j, (tail, head) in enumerate(self.edges):
            d[head, j] += 1
            d[tail, j] -= 1
        return d

    def boundary2(self) -> np.ndarray:
        d = np.zeros((self.n_edges, self.n_triangles), dtype=int)
        for k, t in enumerate(self.triangles):
            d[t.e12, k] += 1
            d[t.e02, k] -= 1
            d[t.e01, k] += 1
        return d

    def to_dict(self) -> dict:
        return {
            "presentation": self.presentation.to_dict(),
            "vertices": self.n_vertices,
            "edges": [list(e) for e in self.edges],
            "triangles": [
                {
                    "vertices": list(t.vertices),
                    "edges": [t.e01, t.e12, t.e02],
                    "sign": t.sign,
                }
                for t in self.triangles
            ],
            "fundamental_cycle": self.fundamental_cycle.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "DeltaSurface":
        built = build_delta_complex(SurfacePresentation.from_dict(d["presentation"]))
        if built.to_dict() != d:
            raise ValueError("complex does not match the canonical cone of its presentation")
        return built


def build_delta_complex(p: SurfacePresentation) -> DeltaSurface:
    g = p.genus
    n = 4 * g
    edges = [(0, 0)] * (2 * g) + [(0, 1)] * n
    triangles = []
    for k, (gen, e) in enumerate(p.relator):
        tail, head = (k, k + 1) if e == 1 else (k + 1, k)
        triangles.append(
            Triangle(
                vertices=(0, 0, 1),
                e01=gen,
                e12=2 * g + head % n,
                e02=2 * g + tail % n,
                sign=e,
                corners=(tail % n, head % n),
            )
        )
    return DeltaSurface(
        presentation=p,
        edges=tuple(edges),
        triangles=tuple(triangles),
        perimeter_label={j: j for j in range(2 * g)},
    )


@dataclass(frozen=True)
class CollapseMap:
    """Degree-one map from genus g onto the torus killing handles 2..g."""

    source_genus: int
    images: tuple[Word, ...]

    def apply(self, w: Word) -> Word:
        out: list[Letter] = []
        for gen, e in w:
            img = self.images[gen]
            out.extend(img if e == 1 else img.inverse())
        return Word(out)


def collapse_map(g: int) -> CollapseMap:
    if g < 1:
        raise ValueError("genus must be >= 1")
    images = [Word([(0, 1)]), Word([(1, 1)])] + [Word()] * (2 * g - 2)
    cm = CollapseMap(g, tuple(images))
    if cm.apply(standard_presentation(g).relator) != standard_presentation(1).relator:
        raise AssertionError("collapse map is not compatible with the relators")
    return cm
