from __future__ import annotations

import itertools
import random

import pytest

from billiard_bounds.bounds import (
    BoundsError,
    bound_report,
    bt2_lower_bound,
    bt3_lower_bound,
    duality_weighted_sum,
    duality_weighted_sum3,
)


def test_bt2_examples():
    for m in range(1, 8):
        assert bt2_lower_bound(2, m) == m + 1
    assert bt2_lower_bound(2, 1) == 2
    assert bt2_lower_bound(4, 2) == 10


def test_bt3_examples():
    for m in range(1, 8):
        assert bt3_lower_bound(2, m) == 2 * m
    assert bt3_lower_bound(2, 1) == 2
    assert bt3_lower_bound(4, 2) == 20


def test_bad_arguments():
    with pytest.raises(BoundsError):
        bt2_lower_bound(0, 2)
    with pytest.raises(BoundsError):
        bt3_lower_bound(2, 0)


def realizable(B, m):
    # odd-dimensional closed manifolds have Euler characteristic 0, so B is even
    return m % 2 == 0 or B % 2 == 0


def test_divisibility_holds_when_realizable():
    for B, m in itertools.product(range(1, 60), range(1, 12)):
        if realizable(B, m):
            bt2_lower_bound(B, m)
            bt3_lower_bound(B, m)
        else:
            with pytest.raises(BoundsError):
                bt2_lower_bound(B, m)
            with pytest.raises(BoundsError):
                bt3_lower_bound(B, m)


def test_bounds_at_least_two():
    for B, m in itertools.product(range(2, 30), range(1, 8)):
        if not realizable(B, m):
            continue
        assert bt2_lower_bound(B, m) >= 2 and bt3_lower_bound(B, m) >= 2


def test_monotonicity():
    pairs = [(B, m) for B in range(2, 40) for m in range(1, 10) if realizable(B, m)]
    for (B, m), (B2, m2) in itertools.product(pairs, pairs):
        if (B, m) != (B2, m2) and B <= B2 and m <= m2:
            assert bt2_lower_bound(B2, m2) > bt2_lower_bound(B, m)
            assert bt3_lower_bound(B2, m2) > bt3_lower_bound(B, m)


def test_duality_sum_examples():
    for m in range(1, 6):
        sphere = (1,) + (0,) * (m - 1) + (1,)
        assert duality_weighted_sum(sphere) == (m, m, True)
        assert duality_weighted_sum3(sphere) == (m, m, True)
    assert duality_weighted_sum((1, 2, 1)) == (4, 4, True)
    assert duality_weighted_sum((1, 4, 1)) == (6, 6, True)
    assert duality_weighted_sum3((1, 2, 1)) == (12, 12, True)
    # (1,4,1): 1*16 + 2*1 squares, 1*4*1 + 2*1*4 cross terms
    assert duality_weighted_sum3((1, 4, 1)) == (16 + 2 + 4 + 8, 30, True)


def test_duality_violation_rejected():
    with pytest.raises(BoundsError):
        duality_weighted_sum((1, 3))
    with pytest.raises(BoundsError):
        duality_weighted_sum3((1, 2, 0))


def random_manifold_betti(rng, max_B=40, max_m=8):
    m = rng.randint(1, max_m)
    full = [0] * (m + 1)
    full[0] = full[m] = 1
    budget = max_B - 2
    for i in range(1, m // 2 + 1):
        j = m - i
        x = rng.randint(0, budget if i == j else budget // 2)
        budget -= x if i == j else 2 * x
        full[i] = full[j] = x
    return tuple(full)


def test_identities_on_random_population():
    rng = random.Random(0)
    for _ in range(500):
        k = random_manifold_betti(rng)
        assert sum(k) <= 40
        assert duality_weighted_sum(k)[2]
        assert duality_weighted_sum3(k)[2]


def test_bound_report_with_betti():
    r = bound_report(betti=(1, 2, 1))
    assert (r.B, r.m, r.bt2, r.bt3) == (4, 2, 10, 20)
    assert r.lemma_checks["duality_weighted_sum"]["equal"]
    assert r.lemma_checks["rd3_assembly_total"] == 20
    assert "bouquet-assembly" in r.provenance
    d = r.as_dict()
    assert d["betti"] == [1, 2, 1]


def test_bound_report_requires_input():
    with pytest.raises(BoundsError):
        bound_report()
    assert bound_report(2, 3).as_dict()["bt3"] == 6
