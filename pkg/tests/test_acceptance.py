"""One test per acceptance criterion; each prints a single PASS/FAIL line."""
from __future__ import annotations

import time
from fractions import Fraction

import pytest

from billiard_bounds import reproduce
from billiard_bounds.billiards import (
    SHIPPED_SHAPES,
    Ellipse,
    find_orbits,
    gradient_check,
    parse_shape,
)
from billiard_bounds.bounds import bt2_lower_bound, bt3_lower_bound, duality_weighted_sum, duality_weighted_sum3
from billiard_bounds.cells import (
    rd2_bouquet_assembly,
    rd2_sphere_complex,
    rd3_bouquet_assembly,
    smith_feasibility,
    smith_sequence_dims,
)
from billiard_bounds.chain import betti

POP = reproduce.spec_population(200, seed=0)


@pytest.fixture
def report(acceptance_log):
    def emit(row):
        line = row.line()
        print(line)
        acceptance_log.append(line)
        assert row.passed, line

    return emit


def test_criterion_1_rd2_sphere_homology(report):
    t = time.perf_counter()
    for m in range(1, 6):
        b = betti(rd2_sphere_complex(m))
        assert b.padded(2 * m + 1) == tuple(int(m <= q <= 2 * m) for q in range(2 * m + 1))
        assert b.total == m + 1
    assert time.perf_counter() - t < 1.0
    report(reproduce.row1())


def test_criterion_2_smith_feasibility(report):
    for m in range(1, 6):
        assert smith_feasibility(smith_sequence_dims(m, betti(rd2_sphere_complex(m)))).feasible
    report(reproduce.row2())


def test_criterion_3_rd2_assembly(report):
    assert len(POP) == 200 and all(sp.m <= 6 and sp.B <= 30 and sp.duality for sp in POP)
    t = time.perf_counter()
    for sp in POP:
        assert rd2_bouquet_assembly(sp).total == Fraction(sp.B**2 + (sp.m - 1) * sp.B, 2)
    assert time.perf_counter() - t < 1.0
    report(reproduce.row3(POP))


def test_criterion_4_rd3_assembly(report):
    t = time.perf_counter()
    for sp in POP:
        B, m = sp.B, sp.m
        total = rd3_bouquet_assembly(sp).total
        assert total == Fraction(B**3 + 3 * (m - 1) * B**2 + 2 * B, 6)
        assert total == Fraction(B**3 - 3 * B**2 + 3 * B - 1 + 3 * m * B**2 - B + 1, 6)
        assert total != Fraction(B**3 + 3 * (m - 1) * B**2 - 2 * B, 6)
    assert time.perf_counter() - t < 1.0
    report(reproduce.row4(POP))


def test_criterion_5_counting_lemmas(report):
    for sp in POP:
        vals = (1,) + sp.k
        assert duality_weighted_sum(vals)[2] and duality_weighted_sum3(vals)[2]
    report(reproduce.row5(POP))


def test_criterion_6_dold_route(report):
    report(reproduce.row6())


def test_criterion_7_geometric_route(report):
    report(reproduce.row7())


def test_criterion_8_cross_route_agreement(report):
    row = reproduce.row8()
    for m, routes in row.detail.items():
        assert set(routes["rd2"].values()) == {m + 1}
        assert set(routes["rd3"].values()) == {2 * m}
    report(row)


def test_criterion_9_period_two(report):
    orbits = find_orbits(Ellipse(2, 1), 2)
    assert len(orbits) == 2 == bt2_lower_bound(2, 1)
    assert sorted(o.length for o in orbits) == pytest.approx([4.0, 8.0], abs=1e-8)
    report(reproduce.row9())


def test_criterion_10_period_three(report):
    row = reproduce.row10()
    d = row.detail
    assert d["count"] == d["doubled_count"] >= bt3_lower_bound(2, 1) == 2
    assert d["stable"] and d["bound"]["status"] == "pass"
    report(row)


def test_criterion_11_gradient_check(report):
    for spec in SHIPPED_SHAPES:
        for p in (2, 3):
            assert gradient_check(parse_shape(spec), p, n=100, seed=p) <= 1e-6
    report(reproduce.row11())
