from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb

import pytest

from billiard_bounds.cells import (
    BouquetSpec,
    CellModelError,
    count_u_cells,
    rd2_bouquet_assembly,
    rd2_sphere_complex,
    rd3_bouquet_assembly,
    rd3_sphere_complex,
    rd3_sphere_uv_cells,
    sign_vector_cells,
    smith_feasibility,
    smith_sequence_dims,
    split_rd2,
    u_cells,
    u_subcomplex,
    v_subcomplex,
    weak_orders,
)
from billiard_bounds.chain import betti, direct_sum, euler_characteristic, is_valid
from billiard_bounds.reproduce import spec_population


@pytest.mark.parametrize("m", range(1, 7))
def test_rd2_sphere_pattern(m):
    cx = rd2_sphere_complex(m)
    assert is_valid(cx)
    b = betti(cx)
    assert b.padded(2 * m + 1) == tuple(int(m <= q <= 2 * m) for q in range(2 * m + 1))
    assert b.total == m + 1
    assert euler_characteristic(cx) == sum((-1) ** q for q in range(m, 2 * m + 1))


def test_rd2_cell_counts():
    # canonical sign vectors (3^m - 1)/2 plus the special m-cell
    for m in range(1, 6):
        assert sum(rd2_sphere_complex(m).dims) == (3**m - 1) // 2 + 1
    assert sum(rd2_sphere_complex(3).dims) == 14
    m1 = rd2_sphere_complex(1)
    assert m1.dims == (0, 1, 1)


def test_sign_vector_cells_are_canonical():
    for m in range(1, 5):
        cells = sign_vector_cells(m)
        pairs = [c for c in cells if c.kind == "pair-cell"]
        for c in pairs:
            assert set(c.pattern) != {"="}
            flipped = c.pattern.translate(str.maketrans("<>", "><"))
            assert c.pattern <= flipped
            assert c.dimension == 2 * m - c.pattern.count("=")
        assert all(c.kind == "pair-cell" for c in cells)


@pytest.mark.parametrize("m", range(1, 6))
def test_split_rd2(m):
    b, s = split_rd2(m)
    assert s.dims[m] == 1 and sum(s.dims) == 1 and s.boundary(m).is_zero()
    full = rd2_sphere_complex(m)
    n = len(full.dims)
    bb, bs = betti(b), betti(s)
    assert tuple(bb[q] + bs[q] for q in range(n)) == betti(full).values
    assert tuple((b.dims[q] if q < len(b.dims) else 0) + (s.dims[q] if q < len(s.dims) else 0) for q in range(n)) == full.dims
    assert betti(direct_sum([b, s])).values == betti(full).values
    if m == 1:
        assert bs.values[1] == 1


def test_smith_examples():
    assert smith_feasibility((1, 1)).feasible
    assert smith_feasibility((1, 2, 1)).feasible
    r = smith_feasibility((1, 3, 1))
    assert not r.feasible and r.position == 3


@pytest.mark.parametrize("m", range(1, 7))
def test_smith_sequence_of_sphere_square(m):
    assert smith_feasibility(smith_sequence_dims(m, betti(rd2_sphere_complex(m)))).feasible


def test_smith_detects_wrong_homology():
    from billiard_bounds.chain import BettiVector

    wrong = BettiVector((0, 0, 1, 0, 1))
    assert not smith_feasibility(smith_sequence_dims(2, wrong)).feasible


# -- bouquets ---------------------------------------------------------------


def test_bouquet_spec_validation():
    assert BouquetSpec.sphere(3).B == 2
    assert BouquetSpec(2, (2, 1)).B == 4
    with pytest.raises(CellModelError):
        BouquetSpec(2, (2, 0))
    with pytest.raises(CellModelError):
        BouquetSpec(1, (3,))  # (1, 3) is not Poincare dual
    BouquetSpec(1, (3,), duality=False)
    with pytest.raises(CellModelError):
        BouquetSpec(2, (1, -1), duality=False)


def test_rd2_assembly_examples():
    for m in range(1, 7):
        assert rd2_bouquet_assembly(BouquetSpec.sphere(m)).total == m + 1
    a = rd2_bouquet_assembly(BouquetSpec(2, (2, 1)))
    assert a.total == 10 and a.match
    assert a.contributions["A"] == 4 - 1 + 2 * 4 // 2
    # the (m=1, k=(3)) example evaluates the formula at B=4, m=1 outside duality mode
    free = rd2_bouquet_assembly(BouquetSpec(1, (3,), duality=False))
    assert Fraction(4**2 + 0, 2) == 8
    assert free.total == 3 * 2 + comb(3, 2)


def test_rd3_assembly_examples():
    for m in range(1, 7):
        assert rd3_bouquet_assembly(BouquetSpec.sphere(m)).total == 2 * m
    assert rd3_bouquet_assembly(BouquetSpec(1, (1,))).total == 2
    a = rd3_bouquet_assembly(BouquetSpec(2, (2, 1)))
    assert a.total == 20 and a.match
    d = a.as_dict()
    assert set(d) >= {"m", "spec", "contributions", "total", "formula", "match"}


def rd3_term_by_term(k: dict[int, int]) -> Fraction:
    """Independent evaluation of the eight contribution rows."""
    ps = list(k)
    m = max(p for p in ps if k[p])
    B = 1 + sum(k.values())
    total = Fraction(m * B)
    total += sum(p * k[p] * (k[p] - 1) for p in ps)
    total += Fraction(sum(k[p] * (k[p] - 1) for p in ps), 2)
    total += sum(p * k[p] * k[q] for p in ps for q in ps if p != q)
    total += sum(k[p] * k[q] for p in ps for q in ps if p < q)
    total += Fraction(sum(k[p] * (k[p] - 1) * (k[p] - 2) for p in ps), 6)
    total += Fraction(sum(k[p] * (k[p] - 1) * k[q] for p in ps for q in ps if p != q), 2)
    total += sum(k[p] * k[q] * k[r] for p, q, r in itertools.combinations(ps, 3))
    return total


def test_population_assemblies_match_closed_forms():
    pop = spec_population(200, seed=5)
    assert len(pop) == 200
    for sp in pop:
        B, m = sp.B, sp.m
        assert sp.m <= 6 and B <= 30
        a2 = rd2_bouquet_assembly(sp)
        a3 = rd3_bouquet_assembly(sp)
        assert isinstance(a2.total, int) and a2.total >= 0
        assert isinstance(a3.total, int) and a3.total >= 0
        assert 2 * a2.total == B * B + (m - 1) * B
        assert 6 * a3.total == B**3 + 3 * (m - 1) * B * B + 2 * B
        assert a3.total == rd3_term_by_term({p: sp.kp(p) for p in range(1, m + 1)})
        ch = a3.checks
        assert ch["groups_match"] and ch["intermediate_equals_group_sum"] and ch["intermediate_equals_plus_2B"]
        assert not ch["intermediate_equals_minus_2B"]


def test_minus_2b_line_is_a_typo():
    # the S^m case pins the sign: 2m = (8 + 12(m-1) + 4)/6
    for m in range(1, 8):
        assert Fraction(8 + 12 * (m - 1) + 4, 6) == 2 * m
        assert Fraction(8 + 12 * (m - 1) - 4, 6) != 2 * m


def test_sphere_routes_agree_in_cell_models():
    for m in range(1, 5):
        assert rd2_bouquet_assembly(BouquetSpec.sphere(m)).total == betti(rd2_sphere_complex(m)).total


# -- RD^3 cells ---------------------------------------------------------------


def test_weak_orders():
    assert len(weak_orders()) == 13


@pytest.mark.parametrize("m", [1, 2, 3])
def test_u_census_matches_inclusion_exclusion(m):
    assert len(u_cells(m)) == count_u_cells(m)


def test_u_census_invariant_under_relabeling():
    from billiard_bounds.cells import _canonical_u, _parse_wo

    for m in (1, 2):
        cells = set(u_cells(m))
        for perm in itertools.permutations("012"):
            table = str.maketrans("012", "".join(perm))
            for c in cells:
                moved = [_parse_wo(w.translate(table)) for w in c.label]
                assert _canonical_u(moved) == c


@pytest.mark.parametrize("m", [1, 2, 3])
def test_rd3_sphere_total(m):
    cx = rd3_sphere_complex(m)
    assert is_valid(cx)
    b = betti(cx)
    assert b.total == 2 * m
    assert b.degrees() == list(range(m + 1, 3 * m + 1))


def test_rd3_census_m1():
    census = rd3_sphere_uv_cells(1)
    assert census.betti().total == 2
    assert len(census.u) == 1
    # after the swap quotient the V-census of S^1 has a single cell
    assert len(census.v) == 1


def test_uv_incidence_observation():
    # U and V parts each carry m classes; U cells do hit V cells for m >= 2
    for m in (1, 2, 3):
        assert betti(u_subcomplex(m)).total == m
        assert betti(v_subcomplex(m)).total == m
    assert rd3_sphere_uv_cells(1).u_to_v_incidences == 0
    assert rd3_sphere_uv_cells(2).u_to_v_incidences > 0
    assert rd3_sphere_uv_cells(2).v_to_u_incidences == 0
