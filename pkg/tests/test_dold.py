from __future__ import annotations

import json
from math import comb

import pytest

from billiard_bounds.cells import BouquetSpec, rd3_bouquet_assembly
from billiard_bounds.dold import (
    FDModule,
    FDModuleError,
    QuotientReport,
    alternating_complex,
    check_axioms,
    distinct_orbit_count,
    homology_through_degree,
    moore_complex,
    permute_basis,
    point_module,
    product,
    random_module,
    rd2_homology,
    rd3_homology,
    smash_rd3_homology,
    sphere_model,
    sym_quotient3,
    triple_product,
    wedge_model,
    zero_module,
)
from billiard_bounds.gf2 import rank_of_vectors


def test_sphere_model_levels():
    for m in range(0, 4):
        K = sphere_model(m, q_max=m + 3)
        assert K.levels == tuple(comb(q, m) for q in range(m + 4))
        assert K.levels[m] == 1 and all(K.levels[q] == 0 for q in range(m))
    P = sphere_model(1, q_max=4, pointed=True)
    assert P.levels == (1, 2, 3, 4, 5)


def test_axioms_examples():
    assert check_axioms(sphere_model(1, 5)) is None
    assert check_axioms(sphere_model(2, 5, pointed=True)) is None
    assert check_axioms(product(sphere_model(1, 4), sphere_model(2, 4))) is None
    K = sphere_model(1, 4)
    faces = [list(f) for f in K.faces]
    bad_level = [list(c) for c in faces[3]]
    bad_level[0][0] ^= 1  # corrupt d^0 on level 3
    faces[3] = [tuple(c) for c in bad_level]
    broken = FDModule(K.levels, tuple(tuple(f) for f in faces), K.degeneracies, K.labels)
    v = check_axioms(broken)
    assert v is not None and v.axiom and v.q >= 3
    with pytest.raises(FDModuleError):
        moore_complex(broken)


def test_moore_examples():
    for m in (1, 2, 3):
        K = sphere_model(m, q_max=m + 3)
        assert homology_through_degree(K, m + 2).values == tuple(int(q == m) for q in range(m + 3))
    assert sum(moore_complex(zero_module(4)).dims) == 0
    assert sum(alternating_complex(zero_module(4)).dims) == 0
    # level 2 of the S^1 model has the surjections 001 and 011; d^0 kills only 011,
    # which d^1 sends to the generator, so the joint kernel is zero
    cx = moore_complex(sphere_model(1, 3))
    assert cx.dims[1] == 1 and cx.dims[2] == 0
    assert homology_through_degree(sphere_model(2, 5), 3).values == (0, 0, 1, 0)


def test_homology_needs_guard_level():
    with pytest.raises(FDModuleError):
        homology_through_degree(sphere_model(1, 3), 3)


@pytest.mark.parametrize("seed", range(20))
def test_moore_agrees_with_alternating(seed):
    K = random_module(seed)
    assert check_axioms(K) is None
    d = K.q_max - 1
    assert homology_through_degree(K, d).same_as(homology_through_degree(K, d, route="alternating"))


def test_wedge_and_sphere_models():
    spec = BouquetSpec(1, (2,), duality=False)
    W = wedge_model(spec, q_max=4)
    assert homology_through_degree(W, 2).values[:2] == (0, 2)
    S = wedge_model(BouquetSpec.sphere(2), q_max=7)
    assert homology_through_degree(S, 5).same_as(homology_through_degree(sphere_model(2, 7), 5))
    with pytest.raises(FDModuleError):
        wedge_model(BouquetSpec.sphere(2), q_max=6)


def test_product_examples():
    X = sphere_model(1, 4)
    unit = product(X, point_module(4))
    assert unit.levels == X.levels
    assert homology_through_degree(unit, 3).same_as(homology_through_degree(X, 3))
    # reduced models: S^1 smash S^1 = S^2
    assert homology_through_degree(product(X, X), 3).values == (0, 0, 1, 0)
    T = triple_product(sphere_model(1, 4, pointed=True))
    assert T.levels == tuple(n**3 for n in (1, 2, 3, 4, 5))
    with pytest.raises(FDModuleError):
        product(X, sphere_model(1, 5))


def test_degenerate_bookkeeping():
    # dim of the normalized part plus dim of the degenerate span gives the level size
    for K in (sphere_model(1, 5), sphere_model(2, 5, pointed=True), product(sphere_model(1, 4), sphere_model(1, 4))):
        cx = moore_complex(K)
        for q in range(1, K.q_max + 1):
            degen = [c for s in K.degeneracies[q - 1] for c in s]
            assert cx.dims[q] + rank_of_vectors(degen) == K.levels[q]


def test_sym_quotient_dimensions_match_orbit_count():
    X = sphere_model(1, 5, pointed=True)
    rep = QuotientReport()
    Q = sym_quotient3(triple_product(X), rep)
    assert Q.levels == tuple(distinct_orbit_count(n, 3) for n in X.levels)
    assert Q.levels == (0, 0, 1, 4, 10, 20)
    assert rep.descends
    assert all(rep.other_repeats_in_span)
    assert check_axioms(Q) is None


def test_sym_quotient_of_zero_and_idempotence():
    Z = sym_quotient3(triple_product(sphere_model(1, 3)))
    assert sym_quotient3(Z).levels == Z.levels
    Q = sym_quotient3(triple_product(sphere_model(1, 5, pointed=True)))
    rep = QuotientReport()
    Q2 = sym_quotient3(Q, rep)
    assert Q2.levels == Q.levels
    assert all(d == 0 for d in rep.span_dims)


def test_rd3_of_circle_and_sphere():
    b1 = rd3_homology(BouquetSpec.sphere(1))
    assert b1.total == 2 and b1.degrees() == [2, 3]
    b2 = rd2_homology(BouquetSpec.sphere(1))
    assert b2.padded(4) == (0, 1, 1, 0)


@pytest.mark.slow
def test_rd3_of_two_sphere():
    b = rd3_homology(BouquetSpec.sphere(2))
    assert b.total == 4 and b.degrees() == [3, 4, 5, 6]


def test_rd3_of_wedge_of_two_circles():
    spec = BouquetSpec(1, (2,), duality=False)
    b = rd3_homology(spec)
    assert b.total == rd3_bouquet_assembly(spec).total == 7


def test_rd2_of_torus_bouquet():
    spec = BouquetSpec(2, (2, 1))
    assert rd2_homology(spec).total == 10


def test_smash_model_loses_the_fat_wedge():
    # quotienting the reduced cube collapses more than the diagonal: only half survives
    assert smash_rd3_homology(BouquetSpec.sphere(1)).total == 1


def test_relabeling_invariance():
    X = sphere_model(1, 5, pointed=True)
    perms = [list(reversed(range(n))) for n in X.levels]
    Y = permute_basis(X, perms)
    a = homology_through_degree(sym_quotient3(triple_product(X)), 4)
    b = homology_through_degree(sym_quotient3(triple_product(Y)), 4)
    assert a.same_as(b)


def test_json_roundtrip():
    K = random_module(3)
    doc = json.loads(json.dumps(K.to_json()))
    again = FDModule.from_json(doc)
    assert again.levels == K.levels
    assert again.faces == K.faces and again.degeneracies == K.degeneracies
    assert homology_through_degree(again, 4).same_as(homology_through_degree(K, 4))
