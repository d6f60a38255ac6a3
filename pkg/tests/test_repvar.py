import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csbundle.lie import IDENTITY, X, SU2Element, exp_map, group_commutator, multiply, random_su2
from csbundle.repvar import (
    ConvergenceError,
    Representation,
    conjugate,
    dump_dataset,
    eval_word,
    is_irreducible,
    load_dataset,
    pullback,
    relator_defect,
    sample_commuting_pair,
    sample_flat,
    solve_commutator,
    torus_pair,
    trace_coordinates,
)
from csbundle.surface import Word, standard_presentation

I1 = SU2Element([0, 1, 0, 0])
I2 = SU2Element([0, 0, 1, 0])
MINUS_I = SU2Element([-1, 0, 0, 0])


def brute_commutant_dim(rho):
    """Dimension of {M in gl(2,C) : M h = h M for all holonomies}, by least squares."""
    rows = []
    basis = [np.eye(2)[:, [i]] @ np.eye(2)[[j], :] for i in range(2) for j in range(2)]
    for h in rho.holonomies:
        hm = h.matrix()
        rows.append(np.column_stack([(e @ hm - hm @ e).reshape(-1) for e in basis]))
    s = np.linalg.svd(np.vstack(rows), compute_uv=False)
    return int(np.sum(s < 1e-8))


def test_genus_two_example_is_flat_and_irreducible():
    rho = Representation(2, (I1, I2, I2, I1))
    assert relator_defect(rho) < 1e-15
    assert is_irreducible(rho)
    assert brute_commutant_dim(rho) == 1


def test_abelian_representations_are_reducible(rng):
    for _ in range(20):
        rho = sample_commuting_pair(rng)
        assert relator_defect(rho) < 1e-14
        assert not is_irreducible(rho)
        assert brute_commutant_dim(rho) >= 2


def test_eval_word():
    rho = torus_pair(0.1, 0.2)
    assert eval_word(rho, Word()).allclose(IDENTITY)
    assert eval_word(rho, Word([(0, 1), (0, -1)])).allclose(IDENTITY)
    assert eval_word(rho, Word([(0, 1), (1, 1)])).allclose(exp_map(0.3 * X), 1e-14)
    with pytest.raises(IndexError):
        eval_word(rho, Word([(2, 1)]))


def test_torus_pair_holonomies():
    rho = torus_pair(np.pi / 2, np.pi)
    assert rho.holonomies[0].allclose(SU2Element([0, 0, 0, 1]), 1e-15)
    assert rho.holonomies[1].allclose(MINUS_I, 1e-15)


def test_solve_commutator_examples():
    for c in (IDENTITY, MINUS_I, exp_map(0.7 * X), exp_map(3.0 * X)):
        a, b = solve_commutator(c)
        assert group_commutator(a, b).distance(c) < 1e-12


def test_solve_commutator_random(rng):
    worst = 0.0
    for _ in range(200):
        c = random_su2(rng)
        a, b = solve_commutator(c)
        worst = max(worst, group_commutator(a, b).distance(c))
    assert worst < 1e-12


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_sample_flat(g, rng):
    for _ in range(20):
        rho = sample_flat(g, rng)
        assert rho.genus == g and len(rho.holonomies) == 2 * g
        assert relator_defect(rho) < 1e-12


def test_generic_samples_irreducible_and_match_brute_force(rng):
    for g in (2, 3):
        for _ in range(20):
            rho = sample_flat(g, rng)
            assert is_irreducible(rho) == (brute_commutant_dim(rho) == 1)
            assert is_irreducible(rho)


def test_sampling_is_seeded():
    a = sample_flat(2, np.random.default_rng(5))
    b = sample_flat(2, np.random.default_rng(5))
    assert a.allclose(b, 0.0)


def test_conjugation_preserves_flatness_and_traces(rng):
    rho = sample_flat(2, rng)
    g = random_su2(rng)
    sigma = conjugate(rho, g)
    assert relator_defect(sigma) < 1e-12
    words = [Word([(0, 1)]), Word([(0, 1), (2, -1)]), Word([(1, 1), (3, 1), (0, -1)])]
    assert np.allclose(trace_coordinates(rho, words), trace_coordinates(sigma, words), atol=1e-12)


@pytest.mark.parametrize("g", [2, 3, 4])
def test_pullback(g, rng):
    rho1 = sample_commuting_pair(rng)
    rho = pullback(rho1, g)
    assert relator_defect(rho) < 1e-15
    assert all(a.allclose(b, 0.0) for a, b in zip(rho.holonomies, rho1.holonomies))
    assert all(h.allclose(IDENTITY) for h in rho.holonomies[2:])
    with pytest.raises(ValueError):
        pullback(Representation(1, (I1, I2)), g)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_dataset_roundtrip_is_byte_identical(g, seed):
    rng = np.random.default_rng(seed)
    reps = [(sample_flat(g, rng), {"index": k}) for k in range(3)]
    text = dump_dataset(reps, {"genus": g, "seed": seed})
    genus, meta, loaded = load_dataset(text)
    assert genus == g and meta["seed"] == seed
    assert all(a.allclose(b, 0.0) for (a, _), (b, _) in zip(reps, loaded))
    assert dump_dataset(loaded, meta) == text


def test_load_rejects_bad_data():
    text = dump_dataset([(torus_pair(0.1, 0.3), {})], {})
    doc = json.loads(text)
    doc["representations"][0]["holonomies"][0] = [1.0, 1.0, 0.0, 0.0]
    with pytest.raises(ValueError, match="unit"):
        load_dataset(json.dumps(doc))
    doc = json.loads(text)
    doc["representations"][0]["holonomies"][0] = [0.0, 1.0, 0.0, 0.0]
    doc["representations"][0]["holonomies"][1] = [0.0, 0.0, 1.0, 0.0]
    with pytest.raises(ValueError, match="defect"):
        load_dataset(json.dumps(doc))
    doc = json.loads(text)
    doc["representations"][0]["holonomies"].pop()
    with pytest.raises(ValueError):
        load_dataset(json.dumps(doc))


def test_relator_defect_examples():
    assert relator_defect(Representation(2, (IDENTITY,) * 4)) == 0
    assert relator_defect(torus_pair(0.4, -1.7)) < 1e-12
    assert relator_defect(Representation(1, (I1, I2))) == pytest.approx(2.0)


def test_trace_coordinate_examples(rng):
    ident = Representation(1, (IDENTITY, IDENTITY))
    assert trace_coordinates(ident, [Word([(0, 1), (1, -1)])]) == [2.0]
    rho = torus_pair(0.8, 0.1)
    assert trace_coordinates(rho, [Word([(0, 1)])])[0] == pytest.approx(2 * np.cos(0.8))


def test_irreducibility_examples():
    assert not is_irreducible(Representation(2, (IDENTITY,) * 4))
    assert not is_irreducible(torus_pair(0.3, 0.9, SU2Element([0.5, 0.5, 0.5, 0.5])))


def test_double_conjugation_composes(rng):
    rho = sample_flat(2, rng)
    g, h = random_su2(rng), random_su2(rng)
    assert conjugate(conjugate(rho, h), g).allclose(conjugate(rho, multiply(g, h)))
    assert conjugate(rho, IDENTITY).allclose(rho, 0.0)


def test_pullback_of_trivial_pair():
    rho = pullback(Representation(1, (IDENTITY, IDENTITY)), 2)
    assert all(h.allclose(IDENTITY, 0.0) for h in rho.holonomies)


def test_genus_two_many_seeds():
    for seed in range(100):
        assert relator_defect(sample_flat(2, np.random.default_rng(seed))) <= 1e-9
