"""Explicit cell models for reduced dihedral squares and cubes of spheres.

A sphere S^m is the cube [0,1]^m with its boundary collapsed to the base
point O.  Points of the open cube pair are sorted into cells by comparing
coordinates: for two factors each coordinate is one of ``<``, ``>``, ``=``;
for three factors each coordinate carries a weak order of the factor labels.

The bouquet assemblies count how the cells of RD^2(X) and RD^3(X) split into
subcomplexes when X is a wedge of spheres.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .chain import BettiVector, ChainComplex, betti, direct_sum

LT, GT, EQ = "<", ">", "="
_FLIP = {LT: GT, GT: LT, EQ: EQ}


class CellModelError(ValueError):
    pass


# ---------------------------------------------------------------------------
# two factors


def flip(pattern: str) -> str:
    return "".join(_FLIP[c] for c in pattern)


def canonical_pattern(pattern: str) -> str:
    """Representative of ``{pattern, flip(pattern)}``; the factor swap exchanges them."""
    return min(pattern, flip(pattern))


@dataclass(frozen=True, order=True)
class SignVectorCell:
    pattern: str
    kind: str = "pair-cell"

    def __post_init__(self):
        if self.kind == "special-m-cell":
            return
        if self.kind != "pair-cell":
            raise CellModelError(f"unknown cell kind {self.kind!r}")
        if not self.pattern or set(self.pattern) - {LT, GT, EQ}:
            raise CellModelError(f"bad sign pattern {self.pattern!r}")
        if set(self.pattern) == {EQ}:
            raise CellModelError("the all-equal pattern is the contracted diagonal")
        if self.pattern != canonical_pattern(self.pattern):
            raise CellModelError(f"{self.pattern!r} is not canonical")

    @property
    def m(self) -> int:
        return len(self.pattern)

    @property
    def dimension(self) -> int:
        if self.kind == "special-m-cell":
            return self.m
        return 2 * self.m - self.pattern.count(EQ)

    def __str__(self) -> str:
        return "s" + "*" * self.m if self.kind == "special-m-cell" else self.pattern


def sign_vector_cells(m: int) -> list[SignVectorCell]:
    """Canonical pair-cells, sorted by dimension then pattern."""
    seen = set()
    for pat in itertools.product((LT, EQ, GT), repeat=m):
        p = "".join(pat)
        if set(p) == {EQ}:
            continue
        seen.add(canonical_pattern(p))
    return sorted((SignVectorCell(p) for p in seen), key=lambda c: (c.dimension, c.pattern))


def _pattern_faces(pattern: str) -> list[str]:
    """Faces obtained by turning one strict sign into ``=``; the diagonal is dropped."""
    out = []
    for j, c in enumerate(pattern):
        if c == EQ:
            continue
        face = pattern[:j] + EQ + pattern[j + 1:]
        if set(face) != {EQ}:
            out.append(canonical_pattern(face))
    return out


def _complex_from_cells(cells_by_dim: dict[int, list], faces_of, top: int) -> ChainComplex:
    dims, columns, labels = [], [], []
    index: dict = {}
    for q in range(top + 1):
        cells = cells_by_dim.get(q, [])
        for i, c in enumerate(cells):
            index[c] = (q, i)
        dims.append(len(cells))
        labels.append([str(c) for c in cells])
    for q in range(top + 1):
        cols = []
        for c in cells_by_dim.get(q, []):
            v = 0
            for f in faces_of(c):
                fq, fi = index[f]
                if fq != q - 1:
                    raise CellModelError(f"face {f} of {c} has dimension {fq}, expected {q - 1}")
                v ^= 1 << fi
            cols.append(v)
        columns.append(cols)
    return ChainComplex.from_columns(dims, columns, labels)


def _check_m(m: int) -> None:
    if m < 1:
        raise CellModelError(f"sphere dimension must be >= 1, got {m}")


def _rd2_b_complex(m: int) -> ChainComplex:
    by_dim: dict[int, list] = {}
    for c in sign_vector_cells(m):
        by_dim.setdefault(c.dimension, []).append(c)
    return _complex_from_cells(by_dim, lambda c: [SignVectorCell(f) for f in _pattern_faces(c.pattern)], 2 * m)


def _rd2_s_complex(m: int) -> ChainComplex:
    special = SignVectorCell(EQ * m, "special-m-cell")
    return _complex_from_cells({m: [special]}, lambda c: [], 2 * m)


def rd2_sphere_complex(m: int) -> ChainComplex:
    """Reduced cellular chain complex of RD^2(S^m) = (S^m x S^m / Z2) / diagonal.

    Cells are the flip classes of sign patterns plus one special m-cell, the
    image of the two wedge cells ``{x = O}`` and ``{y = O}``.  The basepoint
    is dropped, so the homology is relative to the contracted diagonal.
    """
    _check_m(m)
    return direct_sum([_rd2_b_complex(m), _rd2_s_complex(m)])


def split_rd2(m: int) -> tuple[ChainComplex, ChainComplex]:
    """The pair-cell subcomplex and the one-cell special subcomplex."""
    _check_m(m)
    return _rd2_b_complex(m), _rd2_s_complex(m)


def rd2_sphere_betti(m: int) -> BettiVector:
    return betti(rd2_sphere_complex(m))


# ---------------------------------------------------------------------------
# Smith sequence bookkeeping


@dataclass(frozen=True)
class SmithResult:
    feasible: bool
    position: int | None
    r: tuple[int, ...]

    def __bool__(self) -> bool:
        return self.feasible


def smith_feasibility(dims: Sequence[int]) -> SmithResult:
    """Can ``0 -> V_1 -> ... -> V_n -> 0`` with these dimensions be exact?

    Exactness forces ``dims[i] = r_i + r_{i+1}`` with ``r`` the ranks of the
    incoming maps, ``r_0 = r_n = 0``.  The ranks are determined greedily; the
    first negative rank (or a nonzero final rank) is reported by its index.
    """
    r = [0]
    for i, d in enumerate(dims):
        nxt = d - r[-1]
        r.append(nxt)
        if nxt < 0:
            return SmithResult(False, i + 1, tuple(r))
    if r[-1] != 0:
        return SmithResult(False, len(dims), tuple(r))
    return SmithResult(True, None, tuple(r))


def smith_sequence_dims(m: int, relative: BettiVector) -> list[int]:
    """Dimensions along the Smith sequence of the swap on S^m x S^m.

    Terms run ``H_q(Y/G, F) + H_q(F) -> H_q(Y) -> H_q(Y/G, F)`` for
    q = 2m, ..., 0, with Y = S^m x S^m and F = S^m the fixed diagonal.
    """
    def sphere(q):
        return int(q == 0) + int(q == m)

    def square(q):
        return int(q == 0) + 2 * int(q == m) + int(q == 2 * m)

    out = []
    for q in range(2 * m, -1, -1):
        out += [relative[q] + sphere(q), square(q), relative[q]]
    return out


# ---------------------------------------------------------------------------
# bouquets


@dataclass(frozen=True)
class BouquetSpec:
    """A wedge of spheres: ``k[p-1]`` copies of S^p for p = 1..m."""

    m: int
    k: tuple[int, ...]
    duality: bool = True

    def __post_init__(self):
        k = tuple(int(x) for x in self.k)
        object.__setattr__(self, "k", k)
        if self.m < 1 or len(k) != self.m:
            raise CellModelError(f"need m >= 1 and {self.m} multiplicities, got {k}")
        if any(x < 0 for x in k):
            raise CellModelError(f"negative multiplicity in {k}")
        if k[-1] < 1:
            raise CellModelError("k_m must be >= 1")
        if self.duality:
            full = (1,) + k
            if k[-1] != 1 or any(full[i] != full[self.m - i] for i in range(self.m + 1)):
                raise CellModelError(f"{full} violates Poincare duality")

    @classmethod
    def sphere(cls, m: int) -> "BouquetSpec":
        return cls(m, (0,) * (m - 1) + (1,))

    @classmethod
    def from_betti(cls, values: Sequence[int], duality: bool = True) -> "BouquetSpec":
        vals = tuple(values)
        if not vals or vals[0] != 1:
            raise CellModelError(f"Betti vector must start with b_0 = 1, got {vals}")
        return cls(len(vals) - 1, vals[1:], duality)

    @property
    def B(self) -> int:
        return 1 + sum(self.k)

    def kp(self, p: int) -> int:
        return self.k[p - 1]

    def as_dict(self) -> dict:
        return {"m": self.m, "k": list(self.k), "B": self.B, "duality": self.duality}


@dataclass
class Assembly:
    spec: BouquetSpec
    contributions: dict
    total: int
    formula: int | Fraction
    formula_text: str
    checks: dict = field(default_factory=dict)

    @property
    def match(self) -> bool:
        return self.total == self.formula

    def as_dict(self) -> dict:
        return {
            "m": self.spec.m,
            "spec": self.spec.as_dict(),
            "contributions": self.contributions,
            "total": self.total,
            "formula": _num(self.formula),
            "formula_text": self.formula_text,
            "match": self.match,
            "checks": {k: _num(v) if isinstance(v, Fraction) else v for k, v in self.checks.items()},
        }


def _num(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    return x


def rd2_bouquet_assembly(spec: BouquetSpec) -> Assembly:
    """Contributions of the RD^2 summands of a bouquet to the Betti sum.

    Rows: ``A`` one RD^2(S^p) per sphere (p+1 each); ``B`` one top product
    cell per unordered pair of equal-dimension spheres; ``C`` one per pair of
    spheres of different dimensions.
    """
    m, B = spec.m, spec.B
    ps = range(1, m + 1)
    k = spec.kp
    a = sum((p + 1) * k(p) for p in ps)
    b = sum(comb(k(p), 2) for p in ps)
    c = sum(k(p) * k(q) for p in ps for q in ps if p < q)
    total = a + b + c
    formula = Fraction(B * B + (m - 1) * B, 2)
    checks = {"A_closed_form": Fraction(2 * (B - 1) + m * B, 2), "A_matches_closed_form": Fraction(a) == Fraction(2 * (B - 1) + m * B, 2)}
    return Assembly(spec, {"A": a, "B": b, "C": c}, total, _int_if_whole(formula), "(B^2+(m-1)B)/2", checks)


def _int_if_whole(x: Fraction):
    return int(x) if x.denominator == 1 else x


def rd3_bouquet_assembly(spec: BouquetSpec) -> Assembly:
    """Contributions of the RD^3 summands of a bouquet to the reduced Betti sum.

    Besides the total, the four groups of rows are compared against the
    closed forms they reduce to under Poincare duality, and the sum of those
    closed forms is checked against both the +2B and the -2B versions of the
    final formula.
    """
    m, B = spec.m, spec.B
    S = B - 1
    ps = range(1, m + 1)
    k = spec.kp
    rows = {
        "u+v": 2 * sum(p * k(p) for p in ps),
        "w(B)": sum(p * k(p) * (k(p) - 1) for p in ps),
        "w~(B)": sum(comb(k(p), 2) for p in ps),
        "w(D)": sum(p * k(p) * k(q) for p in ps for q in ps if p != q),
        "w~(D)": sum(k(p) * k(q) for p in ps for q in ps if p < q),
        "s(C)": sum(comb(k(p), 3) for p in ps),
        "s(E)": sum(comb(k(p), 2) * k(q) for p in ps for q in ps if p != q),
        "s(F)": sum(k(p) * k(q) * k(r) for p, q, r in itertools.combinations(ps, 3)),
    }
    total = sum(rows.values())
    F = Fraction
    groups_closed = {
        "u+v": F(m * B),
        "w": F(m * B * B, 2) - F(m * B, 2) - F(m * B, 2),
        "w~": F(S * S, 2) - F(S, 2),
        "s": F(S**3, 6) - F(S * S, 2) + F(S, 3),
    }
    groups_rows = {
        "u+v": rows["u+v"],
        "w": rows["w(B)"] + rows["w(D)"],
        "w~": rows["w~(B)"] + rows["w~(D)"],
        "s": rows["s(C)"] + rows["s(E)"] + rows["s(F)"],
    }
    intermediate = F(B**3 - 3 * B * B + 3 * B - 1 + 3 * m * B * B - B + 1, 6)
    closed = F(B**3 + 3 * (m - 1) * B * B + 2 * B, 6)
    final_line = F(B**3 + 3 * (m - 1) * B * B - 2 * B, 6)
    checks = {
        "groups_match": all(groups_rows[g] == groups_closed[g] for g in groups_rows),
        "group_rows": groups_rows,
        "group_closed_forms": {g: _num(v) for g, v in groups_closed.items()},
        "intermediate": intermediate,
        "intermediate_equals_group_sum": sum(groups_closed.values()) == intermediate,
        "intermediate_equals_plus_2B": intermediate == closed,
        "intermediate_equals_minus_2B": intermediate == final_line,
    }
    return Assembly(spec, rows, total, _int_if_whole(closed), "(B^3+3(m-1)B^2+2B)/6", checks)


# ---------------------------------------------------------------------------
# three factors: U and V cells of RD^3(S^m)

FACTORS = (0, 1, 2)
PAIRS = ((0, 1), (0, 2), (1, 2))


def weak_orders() -> list[tuple[frozenset, ...]]:
    """All 13 weak orders of the three factor labels, as ascending block tuples."""
    out = []
    for nblocks in (1, 2, 3):
        for assign in itertools.product(range(nblocks), repeat=3):
            if set(assign) != set(range(nblocks)):
                continue
            out.append(tuple(frozenset(f for f in FACTORS if assign[f] == b) for b in range(nblocks)))
    return out


def _wo_str(wo) -> str:
    return "<".join("".join(str(f) for f in sorted(b)) for b in wo)


def _wo_relabel(wo, perm) -> tuple[frozenset, ...]:
    return tuple(frozenset(perm[f] for f in b) for b in wo)


def _separated(coords, a, b) -> bool:
    return any(not any(a in blk and b in blk for blk in wo) for wo in coords)


_PERMS = list(itertools.permutations(FACTORS))


@dataclass(frozen=True, order=True)
class TripleCell:
    kind: str
    label: tuple

    @property
    def dimension(self) -> int:
        if self.kind == "U":
            return sum(s.count("<") + 1 for s in self.label)
        if self.kind == "V":
            return 2 * len(self.label[0]) - self.label[0].count(EQ)
        raise CellModelError(self.kind)

    def __str__(self) -> str:
        if self.kind == "U":
            return "U[" + ",".join(self.label) + "]"
        return "V[" + self.label[0] + "|O]"


def _canonical_u(coords) -> TripleCell | None:
    """Canonical U-cell of a tuple of weak orders, or None if it lies in the diagonal."""
    if not all(_separated(coords, a, b) for a, b in PAIRS):
        return None
    best = min(tuple(_wo_str(_wo_relabel(wo, perm)) for wo in coords) for perm in _PERMS)
    return TripleCell("U", best)


def _parse_wo(s: str) -> tuple[frozenset, ...]:
    return tuple(frozenset(int(ch) for ch in blk) for blk in s.split("<"))


def u_cells(m: int) -> list[TripleCell]:
    wos = weak_orders()
    seen = set()
    for coords in itertools.product(wos, repeat=m):
        c = _canonical_u(coords)
        if c is not None:
            seen.add(c)
    return sorted(seen, key=lambda c: (c.dimension, c.label))


def v_cells(m: int) -> list[TripleCell]:
    return sorted((TripleCell("V", (c.pattern,)) for c in sign_vector_cells(m)), key=lambda c: (c.dimension, c.label))


def _pair_pattern(coords, a: int, b: int) -> str:
    out = []
    for wo in coords:
        pos = {f: i for i, blk in enumerate(wo) for f in blk}
        out.append(LT if pos[a] < pos[b] else GT if pos[a] > pos[b] else EQ)
    return "".join(out)


def _u_faces(cell: TripleCell) -> list[TripleCell]:
    coords = [_parse_wo(s) for s in cell.label]
    faces = []
    for alpha, wo in enumerate(coords):
        # two adjacent blocks meet
        for i in range(len(wo) - 1):
            merged = wo[:i] + (wo[i] | wo[i + 1],) + wo[i + 2:]
            f = _canonical_u(coords[:alpha] + [merged] + coords[alpha + 1:])
            if f is not None:
                faces.append(f)
        # an extreme singleton block reaches the cube boundary: that factor goes to O
        for blk in {wo[0], wo[-1]}:
            if len(blk) != 1 or len(wo) == 1:
                continue
            (a,) = blk
            alone = sum(1 for w in coords if frozenset({a}) in w)
            if alone != 1:
                continue  # image has lower dimension
            b, c = [f for f in FACTORS if f != a]
            pat = _pair_pattern(coords, b, c)
            if set(pat) != {EQ}:
                faces.append(TripleCell("V", (canonical_pattern(pat),)))
    return faces


def _v_faces(cell: TripleCell) -> list[TripleCell]:
    return [TripleCell("V", (f,)) for f in _pattern_faces(cell.label[0])]


def _faces3(cell: TripleCell) -> list[TripleCell]:
    return _u_faces(cell) if cell.kind == "U" else _v_faces(cell)


@dataclass
class TripleCensus:
    m: int
    u: list[TripleCell]
    v: list[TripleCell]
    complex: ChainComplex
    u_to_v_incidences: int
    v_to_u_incidences: int

    def counts_by_dimension(self, kind: str) -> dict[int, int]:
        out: dict[int, int] = {}
        for c in self.u if kind == "U" else self.v:
            out[c.dimension] = out.get(c.dimension, 0) + 1
        return dict(sorted(out.items()))

    def betti(self) -> BettiVector:
        return betti(self.complex)

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "U": {"count": len(self.u), "by_dimension": self.counts_by_dimension("U")},
            "V": {"count": len(self.v), "by_dimension": self.counts_by_dimension("V")},
            "u_to_v_incidences": self.u_to_v_incidences,
            "v_to_u_incidences": self.v_to_u_incidences,
            "betti": list(self.betti().values),
        }


def rd3_sphere_complex(m: int) -> ChainComplex:
    return rd3_sphere_uv_cells(m).complex


def rd3_sphere_uv_cells(m: int) -> TripleCensus:
    """Canonical U- and V-cells of RD^3(S^m) and their reduced chain complex.

    U-cells have all three points in the open cube and record a weak order of
    the factors per coordinate; V-cells have one point at O and record the
    sign pattern of the other two.  Cells inside the contracted diagonal
    (some pair never separated) are dropped.  The mod-2 incidence counts
    between the two families are returned alongside the complex.
    """
    _check_m(m)
    us, vs = u_cells(m), v_cells(m)
    by_dim: dict[int, list] = {}
    for c in vs + us:
        by_dim.setdefault(c.dimension, []).append(c)
    cx = _complex_from_cells(by_dim, _faces3, 3 * m)
    u_to_v = 0
    for c in us:
        counts: dict = {}
        for f in _u_faces(c):
            if f.kind == "V":
                counts[f] = counts.get(f, 0) ^ 1
        u_to_v += sum(counts.values())
    v_to_u = sum(1 for c in vs for f in _v_faces(c) if f.kind == "U")
    return TripleCensus(m, us, vs, cx, u_to_v, v_to_u)


def u_subcomplex(m: int) -> ChainComplex:
    us = u_cells(m)
    by_dim: dict[int, list] = {}
    for c in us:
        by_dim.setdefault(c.dimension, []).append(c)
    return _complex_from_cells(by_dim, lambda c: [f for f in _u_faces(c) if f.kind == "U"], 3 * m)


def v_subcomplex(m: int) -> ChainComplex:
    vs = v_cells(m)
    by_dim: dict[int, list] = {}
    for c in vs:
        by_dim.setdefault(c.dimension, []).append(c)
    return _complex_from_cells(by_dim, _v_faces, 3 * m)


def count_u_cells(m: int) -> int:
    """Orbit count of U-cells by inclusion-exclusion, independent of enumeration.

    Tuples separating every pair are counted with inclusion-exclusion over
    the set of pairs forced equal; the action of S_3 on them is free.
    """
    # weak orders in which a given set of pairs is tied
    tied_counts = {}
    for pairs in itertools.chain.from_iterable(itertools.combinations(PAIRS, r) for r in range(4)):
        n = 0
        for wo in weak_orders():
            if all(any(a in b_ and c in b_ for b_ in wo) for a, c in pairs):
                n += 1
        tied_counts[pairs] = n
    total = sum((-1) ** len(pairs) * n**m for pairs, n in tied_counts.items())
    return total // 6
