from __future__ import annotations

import pathlib

import pytest

from billiard_bounds.chain import betti, euler_characteristic, is_valid
from billiard_bounds.power import (
    CellCapExceeded,
    PowerEngineError,
    SimplicialComplex,
    dihedral_group,
    estimate_cells,
    fubini,
    octahedron_boundary,
    product_complex,
    quotient_and_contract,
    rd_power,
    rd_power_homology,
    regularity_violations,
    regularize,
    single_edge,
    single_vertex,
    square_boundary,
    tetrahedron_boundary,
    triangle_boundary,
    trivial_product,
)

DATA = pathlib.Path(__file__).parent / "data"


def test_parse_facet_file():
    K = SimplicialComplex.load(DATA / "square_boundary.facets")
    assert K.n_vertices == 4 and len(K.facets) == 4
    assert K == square_boundary()
    assert SimplicialComplex.parse(K.dumps()) == K
    with pytest.raises(PowerEngineError):
        SimplicialComplex.parse("# nothing\n")
    with pytest.raises(PowerEngineError):
        SimplicialComplex.parse("0 x\n")


def test_facets_are_maximal():
    K = SimplicialComplex.from_facets([(0, 1, 2), (0, 1), (2,)])
    assert K.facets == ((0, 1, 2),)
    assert len(K.faces()) == 7


def test_base_complexes_have_expected_homology():
    assert betti(triangle_boundary().chain_complex()).values == (1, 1)
    assert betti(square_boundary().chain_complex()).values == (1, 1)
    assert betti(tetrahedron_boundary().chain_complex()).values == (1, 0, 1)
    assert betti(octahedron_boundary().chain_complex()).values == (1, 0, 1)


def test_dihedral_groups():
    assert len(dihedral_group(2)) == 2
    assert len(dihedral_group(3)) == 6
    assert dihedral_group(1) == [(0,)]


def test_product_examples():
    P = product_complex(triangle_boundary(), 2)
    assert len(P.cells) == 36
    assert P.orbit_count() == 21
    assert len(product_complex(single_vertex(), 3).cells) == 1
    with pytest.raises(PowerEngineError):
        product_complex(triangle_boundary(), 4)


def test_action_commutes_with_incidence():
    P = product_complex(triangle_boundary(), 3)
    for g in P.group:
        for c in P.cells[::7]:
            below = {P.act(g, b) for b in P.below(c)}
            assert below == set(P.below(P.act(g, c)))


def test_product_cellular_homology_is_kunneth():
    assert betti(product_complex(triangle_boundary(), 2).chain_complex()).values == (1, 2, 1)
    assert betti(product_complex(triangle_boundary(), 3).chain_complex()).values == (1, 3, 3, 1)


def test_single_edge_subdivision():
    T = regularize(trivial_product(single_edge()), 1)
    assert T.counts() == [3, 2]


def test_subdivision_preserves_homology():
    for K, p in [(triangle_boundary(), 2), (square_boundary(), 2)]:
        P = product_complex(K, p)
        before = betti(P.chain_complex())
        for rounds in (1, 2):
            after = betti(regularize(P, rounds).chain_complex())
            assert after.values == before.values


def test_regularity_after_two_rounds():
    T = regularize(product_complex(square_boundary(), 2), 2)
    assert T.rounds == 2
    assert regularity_violations(T) == []


def test_stabilizers_off_the_diagonal_are_trivial():
    T = regularize(product_complex(triangle_boundary(), 3), 1)
    for s in T.all_simplices():
        if T.is_diagonal(s):
            continue
        fixed = [g for g in range(len(T.action)) if T.image(g, s) == s]
        assert len(fixed) == 1


def test_flag_counts_are_fubini_numbers():
    assert [fubini(n) for n in range(5)] == [1, 1, 3, 13, 75]


def test_estimate_is_exact_orbit_count():
    for K, p, r in [(triangle_boundary(), 2, 1), (triangle_boundary(), 2, 2), (triangle_boundary(), 3, 1)]:
        P = product_complex(K, p)
        T = regularize(P, r)
        assert estimate_cells(P, r) == sum(T.counts()) // len(P.group)


@pytest.mark.parametrize("K", [triangle_boundary(), square_boundary()], ids=["triangle", "square"])
def test_circle_square_power(K):
    assert rd_power_homology(K, 2).padded(3) == (0, 1, 1)
    assert rd_power_homology(K, 2, rounds=2).padded(3) == (0, 1, 1)


def test_circle_cube_power():
    res = rd_power(triangle_boundary(), 3)
    assert res.betti.total == 2
    assert res.betti.degrees() == [2, 3]
    assert res.euler == res.burnside_euler


def test_two_sphere_square_power():
    res = rd_power(tetrahedron_boundary(), 2)
    assert res.betti.total == 3 and res.betti.degrees() == [2, 3, 4]
    assert res.euler == res.burnside_euler == sum((-1) ** q * b for q, b in enumerate(res.betti.values))


@pytest.mark.slow
def test_triangulation_independence_two_sphere():
    a = rd_power_homology(tetrahedron_boundary(), 2)
    b = rd_power_homology(octahedron_boundary(), 2)
    assert a.same_as(b)


def test_quotient_complex_is_valid():
    T = regularize(product_complex(square_boundary(), 3), 1)
    cx = quotient_and_contract(T)
    assert is_valid(cx)
    assert betti(cx).total == 2
    assert euler_characteristic(cx) == sum((-1) ** q * b for q, b in enumerate(betti(cx).values))


def test_cell_cap(monkeypatch):
    with pytest.raises(CellCapExceeded) as exc:
        rd_power_homology(tetrahedron_boundary(), 3, cap=1000)
    assert exc.value.estimate > 1000
    monkeypatch.setenv("BILLIARD_BOUNDS_CELL_CAP", "10")
    with pytest.raises(CellCapExceeded):
        rd_power_homology(triangle_boundary(), 2)
