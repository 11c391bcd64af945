"""Closed-form lower bounds for 2- and 3-periodic billiard trajectories.

Everything here is exact integer arithmetic.  Divisions are asserted to be
exact rather than floored, so a mistyped formula fails loudly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .chain import BettiVector


class BoundsError(ValueError):
    pass


def _exact_div(num: int, den: int, what: str) -> int:
    q, r = divmod(num, den)
    if r:
        raise BoundsError(f"{what}: {num}/{den} is not an integer")
    return q


def _check(B: int, m: int) -> None:
    if B < 1 or m < 1:
        raise BoundsError(f"need B >= 1 and m >= 1, got B={B}, m={m}")


def bt2_lower_bound(B: int, m: int) -> int:
    """(B^2 + (m-1)B) / 2."""
    _check(B, m)
    return _exact_div(B * B + (m - 1) * B, 2, "bt2")


def bt3_lower_bound(B: int, m: int) -> int:
    """(B^3 + 3(m-1)B^2 + 2B) / 6."""
    _check(B, m)
    return _exact_div(B**3 + 3 * (m - 1) * B * B + 2 * B, 6, "bt3")


def _manifold_betti(k) -> tuple[int, ...]:
    vals = tuple(k.values) if isinstance(k, BettiVector) else tuple(int(x) for x in k)
    bv = BettiVector(vals)
    try:
        bv.validate_manifold()
    except ValueError as exc:
        raise BoundsError(str(exc)) from None
    return vals


def duality_weighted_sum(k) -> tuple[int, int, bool]:
    """Both sides of  sum_{i>=1} i k_i = m B / 2  for a closed-manifold Betti vector.

    Returns ``(lhs, 2*rhs/2, equal)`` with the right side computed as an exact
    integer when ``mB`` is even; a half-integer right side compares unequal.
    """
    vals = _manifold_betti(k)
    m = len(vals) - 1
    B = sum(vals)
    lhs = sum(i * ki for i, ki in enumerate(vals) if i >= 1)
    rhs2 = m * B
    rhs = rhs2 // 2 if rhs2 % 2 == 0 else rhs2 / 2
    return lhs, rhs, 2 * lhs == rhs2


def duality_weighted_sum3(k) -> tuple[int, int, bool]:
    """Both sides of the quadratic identity

        sum_{1<=i} i k_i^2 + sum_{1<=i!=j} i k_i k_j = (m B^2 - m B) / 2

    where the indices run over 1..m (the inner ``j`` in the cross term is
    also restricted to 1..m).
    """
    vals = _manifold_betti(k)
    m = len(vals) - 1
    B = sum(vals)
    idx = range(1, m + 1)
    squares = sum(i * vals[i] ** 2 for i in idx)
    cross = sum(i * vals[i] * vals[j] for i in idx for j in idx if i != j)
    lhs = squares + cross
    rhs2 = m * B * B - m * B
    rhs = rhs2 // 2 if rhs2 % 2 == 0 else rhs2 / 2
    return lhs, rhs, 2 * lhs == rhs2


@dataclass
class BoundReport:
    B: int
    m: int
    bt2: int
    bt3: int
    lemma_checks: dict = field(default_factory=dict)
    provenance: list = field(default_factory=list)
    betti: tuple | None = None

    def as_dict(self) -> dict:
        out = {
            "B": self.B,
            "m": self.m,
            "bt2": self.bt2,
            "bt3": self.bt3,
            "lemma_checks": self.lemma_checks,
            "provenance": self.provenance,
        }
        if self.betti is not None:
            out["betti"] = list(self.betti)
        return out


def bound_report(B: int | None = None, m: int | None = None, betti: Sequence[int] | None = None) -> BoundReport:
    """Evaluate both bounds from either ``(B, m)`` or a full Betti vector."""
    checks: dict = {}
    prov = ["closed-form"]
    if betti is not None:
        vals = _manifold_betti(betti)
        B, m = sum(vals), len(vals) - 1
        l1, r1, ok1 = duality_weighted_sum(vals)
        l3, r3, ok3 = duality_weighted_sum3(vals)
        checks = {
            "duality_weighted_sum": {"lhs": l1, "rhs": r1, "equal": ok1},
            "duality_weighted_sum3": {"lhs": l3, "rhs": r3, "equal": ok3},
        }
        from .cells import BouquetSpec, rd2_bouquet_assembly, rd3_bouquet_assembly

        spec = BouquetSpec.from_betti(vals)
        a2 = rd2_bouquet_assembly(spec)
        a3 = rd3_bouquet_assembly(spec)
        checks["rd2_assembly_total"] = a2.total
        checks["rd3_assembly_total"] = a3.total
        prov.append("bouquet-assembly")
    if B is None or m is None:
        raise BoundsError("give either B and m, or a Betti vector")
    report = BoundReport(B, m, bt2_lower_bound(B, m), bt3_lower_bound(B, m), checks, prov,
                         tuple(betti) if betti is not None else None)
    if betti is not None and (checks["rd2_assembly_total"] != report.bt2 or checks["rd3_assembly_total"] != report.bt3):
        raise BoundsError("bouquet assembly disagrees with the closed form")
    return report
