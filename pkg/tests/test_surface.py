import json
from collections import Counter

import numpy as np
import pytest

from csbundle.surface import (
    DeltaSurface,
    SurfacePresentation,
    Word,
    build_delta_complex,
    collapse_map,
    standard_presentation,
)


@pytest.mark.parametrize("g", [1, 2, 3, 4, 5])
def test_presentation_relator(g):
    p = standard_presentation(g)
    assert len(p.relator) == 4 * g
    assert Word(p.relator) == p.relator  # already freely reduced
    assert all(e in (1, -1) for _, e in p.relator)
    assert len(p.generators) == 2 * g


def test_genus_one_relator():
    p = standard_presentation(1)
    assert p.relator == Word([(0, 1), (1, 1), (0, -1), (1, -1)])
    assert p.generators == ("a1", "b1")


def test_genus_zero_rejected():
    with pytest.raises(ValueError):
        standard_presentation(0)


def test_free_reduction():
    assert Word([(0, 1), (1, 1), (1, -1), (0, -1)]) == Word()
    w = Word([(0, 1), (2, -1)])
    assert w + w.inverse() == Word()
    assert Word.from_ints(w.to_ints()) == w


def count_cells(g):
    """Independent count: coned 4g-gon with the standard edge identifications."""
    n = 4 * g
    return 2, 2 * g + n, n  # corners all identified + centre; 2g labels + n spokes; n cones


def test_genus_one_cells():
    d = build_delta_complex(standard_presentation(1))
    assert (d.n_vertices, d.n_edges, d.n_triangles) == (2, 6, 4)
    assert d.euler_characteristic() == 0


@pytest.mark.parametrize("g", [1, 2, 3, 4, 5])
def test_delta_complex_invariants(g):
    d = build_delta_complex(standard_presentation(g))
    assert (d.n_vertices, d.n_edges, d.n_triangles) == count_cells(g)
    assert d.euler_characteristic() == 2 - 2 * g
    assert not np.any(d.boundary1() @ d.boundary2())
    assert not np.any(d.boundary2() @ d.fundamental_cycle)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_perimeter_edges_used_twice_with_opposite_signs(g):
    d = build_delta_complex(standard_presentation(g))
    uses = Counter(t.e01 for t in d.triangles)
    assert set(uses) == set(range(2 * g))
    assert all(v == 2 for v in uses.values())
    for j in range(2 * g):
        assert sorted(t.sign for t in d.triangles if t.e01 == j) == [-1, 1]


def test_triangle_orientation_follows_relator():
    d = build_delta_complex(standard_presentation(1))
    assert d.fundamental_cycle.tolist() == [1, 1, -1, -1]
    # triangles with exponent -1 read their perimeter edge backwards
    assert d.triangles[2].corners == (3, 2)


def test_json_roundtrip():
    d = build_delta_complex(standard_presentation(2))
    doc = json.loads(d.to_json())
    assert doc["presentation"]["relator"] == [1, 2, -1, -2, 3, 4, -3, -4]
    assert DeltaSurface.from_dict(doc).to_dict() == d.to_dict()
    p = SurfacePresentation.from_dict(doc["presentation"])
    assert p == standard_presentation(2)
    doc["presentation"]["relator"][0] = 2
    with pytest.raises(ValueError):
        SurfacePresentation.from_dict(doc["presentation"])


def test_collapse_map():
    assert collapse_map(1).images == (Word([(0, 1)]), Word([(1, 1)]))
    cm = collapse_map(2)
    assert cm.images[2] == Word() and cm.images[3] == Word()
    assert collapse_map(3).apply(standard_presentation(3).relator) == standard_presentation(1).relator
