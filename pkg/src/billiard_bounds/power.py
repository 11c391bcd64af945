"""Dihedral powers of a triangulated space, computed geometrically.

The p-fold product of a simplicial complex is a polytopal complex whose
cells are p-tuples of faces.  Its barycentric subdivision (the order complex
of the cell poset) is a simplicial complex on which the dihedral group acts
simplicially, with every simplex stabilizer fixing that simplex pointwise.
The orbit complex, relative to the image of the diagonal, gives
H_*(K^p / D_p, Delta; Z/2).
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from .chain import BettiVector, ChainComplex, betti, euler_characteristic

DEFAULT_CELL_CAP = 5_000_000
CAP_ENV = "BILLIARD_BOUNDS_CELL_CAP"


class PowerEngineError(ValueError):
    pass


class CellCapExceeded(PowerEngineError):
    def __init__(self, estimate: int, cap: int):
        super().__init__(f"estimated {estimate} orbit cells exceeds the cap of {cap}")
        self.estimate = estimate
        self.cap = cap


def cell_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    return int(raw) if raw else DEFAULT_CELL_CAP


# ---------------------------------------------------------------------------
# simplicial complexes


@dataclass(frozen=True)
class SimplicialComplex:
    n_vertices: int
    facets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        fs = {tuple(sorted(set(f))) for f in self.facets}
        if any(not f for f in fs):
            raise PowerEngineError("empty facet")
        if any(v < 0 or v >= self.n_vertices for f in fs for v in f):
            raise PowerEngineError("facet uses a vertex outside the vertex range")
        maximal = sorted(f for f in fs if not any(set(f) < set(g) for g in fs))
        object.__setattr__(self, "facets", tuple(maximal))

    @classmethod
    def from_facets(cls, facets: Iterable[Sequence[int]]) -> "SimplicialComplex":
        facets = [tuple(f) for f in facets]
        n = 1 + max(v for f in facets for v in f)
        return cls(n, tuple(facets))

    @classmethod
    def parse(cls, text: str) -> "SimplicialComplex":
        """One facet per line as whitespace- or comma-separated vertex ids; ``#`` starts a comment."""
        facets = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].replace(",", " ").strip()
            if not line:
                continue
            try:
                facets.append(tuple(int(tok) for tok in line.split()))
            except ValueError:
                raise PowerEngineError(f"line {lineno}: expected integer vertex ids") from None
        if not facets:
            raise PowerEngineError("no facets given")
        return cls.from_facets(facets)

    @classmethod
    def load(cls, path) -> "SimplicialComplex":
        with open(path) as fh:
            return cls.parse(fh.read())

    def dumps(self) -> str:
        return "".join(" ".join(map(str, f)) + "\n" for f in self.facets)

    @property
    def dimension(self) -> int:
        return max(len(f) for f in self.facets) - 1

    def faces(self) -> list[tuple[int, ...]]:
        """All nonempty faces, sorted by dimension then vertices."""
        out = set()
        for f in self.facets:
            for r in range(1, len(f) + 1):
                out.update(itertools.combinations(f, r))
        return sorted(out, key=lambda s: (len(s), s))

    def chain_complex(self) -> ChainComplex:
        """Simplicial chains (unreduced)."""
        return _simplicial_chains(self.faces())


def triangle_boundary() -> SimplicialComplex:
    return SimplicialComplex.from_facets([(0, 1), (1, 2), (0, 2)])


def square_boundary() -> SimplicialComplex:
    return SimplicialComplex.from_facets([(0, 1), (1, 2), (2, 3), (0, 3)])


def tetrahedron_boundary() -> SimplicialComplex:
    return SimplicialComplex.from_facets(itertools.combinations(range(4), 3))


def octahedron_boundary() -> SimplicialComplex:
    return SimplicialComplex.from_facets(
        [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)]
    )


def single_vertex() -> SimplicialComplex:
    return SimplicialComplex(1, ((0,),))


def single_edge() -> SimplicialComplex:
    return SimplicialComplex(2, ((0, 1),))


def _simplicial_chains(simplices: Sequence[tuple]) -> ChainComplex:
    by_dim: dict[int, list] = {}
    for s in simplices:
        by_dim.setdefault(len(s) - 1, []).append(s)
    top = max(by_dim) if by_dim else 0
    index = {}
    for d, ss in by_dim.items():
        for i, s in enumerate(ss):
            index[s] = i
    dims = [len(by_dim.get(d, [])) for d in range(top + 1)]
    columns = []
    for d in range(top + 1):
        cols = []
        for s in by_dim.get(d, []):
            v = 0
            if d > 0:
                for k in range(len(s)):
                    v ^= 1 << index[s[:k] + s[k + 1:]]
            cols.append(v)
        columns.append(cols)
    return ChainComplex.from_columns(dims, columns)


# ---------------------------------------------------------------------------
# products


def dihedral_group(p: int) -> list[tuple[int, ...]]:
    """Slot permutations generated by the p-cycle and the reflection."""
    if p == 1:
        return [(0,)]
    out = set()
    for r in range(p):
        rot = tuple((i + r) % p for i in range(p))
        out.add(rot)
        out.add(tuple(rot[(-i) % p] for i in range(p)))
    return sorted(out)


def adjacent_pairs(p: int) -> list[tuple[int, int]]:
    if p < 2:
        return []
    if p == 2:
        return [(0, 1)]
    return [(i, (i + 1) % p) for i in range(p)]


@dataclass
class CwProduct:
    """Cells are p-tuples of faces of ``base``; the group permutes slots.

    ``group[g][k]`` is the slot whose face lands in slot ``k``.
    """

    base: SimplicialComplex
    p: int
    cells: list[tuple[tuple[int, ...], ...]]
    group: list[tuple[int, ...]]

    def __post_init__(self):
        self.index = {c: i for i, c in enumerate(self.cells)}

    def dimension(self, cell) -> int:
        return sum(len(s) - 1 for s in cell)

    def act(self, g: Sequence[int], cell) -> tuple:
        return tuple(cell[g[k]] for k in range(self.p))

    def below(self, cell) -> list[tuple]:
        """Cells strictly contained in ``cell``."""
        per_slot = [[f for r in range(1, len(s) + 1) for f in itertools.combinations(s, r)] for s in cell]
        return [c for c in itertools.product(*per_slot) if c != cell]

    def diagonal_mask(self, cell) -> int:
        """Bit k set when the cell lies in ``{x_i = x_j}`` for the k-th adjacent pair."""
        mask = 0
        for k, (i, j) in enumerate(adjacent_pairs(self.p)):
            if cell[i] == cell[j]:
                mask |= 1 << k
        return mask

    def orbit_count(self) -> int:
        return len({min(self.act(g, c) for g in self.group) for c in self.cells})

    def chain_complex(self) -> ChainComplex:
        """Cellular chains of the product (no quotient), boundary mod 2."""
        by_dim: dict[int, list] = {}
        for c in self.cells:
            by_dim.setdefault(self.dimension(c), []).append(c)
        top = max(by_dim)
        pos = {c: i for d in by_dim for i, c in enumerate(by_dim[d])}
        dims = [len(by_dim.get(d, [])) for d in range(top + 1)]
        columns = []
        for d in range(top + 1):
            cols = []
            for c in by_dim.get(d, []):
                v = 0
                for k, s in enumerate(c):
                    if len(s) < 2:
                        continue
                    for drop in range(len(s)):
                        face = c[:k] + (s[:drop] + s[drop + 1:],) + c[k + 1:]
                        v ^= 1 << pos[face]
                cols.append(v)
            columns.append(cols)
        return ChainComplex.from_columns(dims, columns)


def _product(K: SimplicialComplex, p: int) -> CwProduct:
    faces = K.faces()
    cells = sorted(itertools.product(faces, repeat=p), key=lambda c: (sum(len(s) for s in c), c))
    return CwProduct(K, p, cells, dihedral_group(p))


def product_complex(K: SimplicialComplex, p: int) -> CwProduct:
    """All p-tuples of faces of K with the D_p slot action (p = 2 or 3)."""
    if p not in (2, 3):
        raise PowerEngineError(f"only p = 2 or 3 is supported, got {p}")
    return _product(K, p)


def trivial_product(K: SimplicialComplex) -> CwProduct:
    """K itself viewed as a one-slot product with the trivial group."""
    return _product(K, 1)


# ---------------------------------------------------------------------------
# barycentric regularization


@dataclass
class Regularized:
    """A simplicial complex with a simplicial group action.

    ``simplices[d]`` lists d-simplices as vertex tuples ordered by the
    subdivision flag; ``action[g][v]`` is the image of vertex v under group
    element g; ``diag[v]`` is the adjacent-pair mask of vertex v.
    """

    simplices: list[list[tuple[int, ...]]]
    action: list[list[int]]
    diag: list[int]
    rounds: int
    p: int
    vertex_labels: list = field(default_factory=list, repr=False)

    @property
    def n_vertices(self) -> int:
        return len(self.diag)

    def counts(self) -> list[int]:
        return [len(s) for s in self.simplices]

    def all_simplices(self) -> list[tuple[int, ...]]:
        return [s for ss in self.simplices for s in ss]

    def is_diagonal(self, s: Sequence[int]) -> bool:
        mask = -1
        for v in s:
            mask &= self.diag[v]
        return mask != 0

    def image(self, g: int, s: Sequence[int]) -> tuple[int, ...]:
        a = self.action[g]
        return tuple(a[v] for v in s)

    def chain_complex(self) -> ChainComplex:
        return _simplicial_chains([tuple(sorted(s)) for s in self.all_simplices()])


@lru_cache(maxsize=None)
def fubini(n: int) -> int:
    """Number of ordered set partitions of an n-set."""
    if n == 0:
        return 1
    return sum(comb(n, k) * fubini(n - k) for k in range(1, n + 1))


def estimate_cells(P: CwProduct, rounds: int) -> int:
    """Exact simplex count after ``rounds`` subdivisions, divided by the group order."""
    below = {c: P.below(c) for c in P.cells}
    # f-vector of the first subdivision: chains ending at c, bucketed by chain length
    fvec: dict[int, int] = {}
    by_len_memo: dict = {}

    def by_len(c):
        if c not in by_len_memo:
            acc = {0: 1}
            for d in below[c]:
                for k, n in by_len(d).items():
                    acc[k + 1] = acc.get(k + 1, 0) + n
            by_len_memo[c] = acc
        return by_len_memo[c]

    for c in P.cells:
        for k, n in by_len(c).items():
            fvec[k] = fvec.get(k, 0) + n
    for _ in range(rounds - 1):
        new: dict[int, int] = {}
        for k, n in fvec.items():
            # chains in the face lattice of a k-simplex ending at the top, by length
            for length, cnt in _flag_lengths(k).items():
                new[length] = new.get(length, 0) + n * cnt
        fvec = new
    return sum(fvec.values()) // max(len(P.group), 1)


@lru_cache(maxsize=None)
def _flag_lengths(k: int) -> dict[int, int]:
    """Chains of nonempty faces of a k-simplex ending at the whole simplex, by (length - 1)."""
    n = k + 1
    # a chain ending at the full set with j+1 members is an ordered partition into j+1 blocks
    out = {}
    for blocks in range(1, n + 1):
        out[blocks - 1] = _surjection_count(n, blocks)
    return out


def _surjection_count(n: int, k: int) -> int:
    return sum((-1) ** i * comb(k, i) * (k - i) ** n for i in range(k + 1))


def _order_complex_of_product(P: CwProduct) -> Regularized:
    cells = P.cells
    index = P.index
    below = [[index[b] for b in P.below(c)] for c in cells]
    chains_memo: dict[int, list[tuple[int, ...]]] = {}

    def chains_ending(v):
        if v not in chains_memo:
            out = [(v,)]
            for u in below[v]:
                out.extend(ch + (v,) for ch in chains_ending(u))
            chains_memo[v] = out
        return chains_memo[v]

    by_dim: dict[int, list] = {}
    for v in range(len(cells)):
        for ch in chains_ending(v):
            by_dim.setdefault(len(ch) - 1, []).append(ch)
    top = max(by_dim)
    action = [[index[P.act(g, c)] for c in cells] for g in P.group]
    return Regularized(
        [sorted(by_dim.get(d, [])) for d in range(top + 1)],
        action,
        [P.diagonal_mask(c) for c in cells],
        1,
        P.p,
        list(cells),
    )


def _subdivide(T: Regularized) -> Regularized:
    """Barycentric subdivision of a regularized complex (one more round)."""
    simplices = [tuple(sorted(s)) for s in T.all_simplices()]
    index = {s: i for i, s in enumerate(simplices)}
    faces_below = []
    for s in simplices:
        faces_below.append(
            [index[f] for r in range(1, len(s)) for f in itertools.combinations(s, r)]
        )
    memo: dict[int, list[tuple[int, ...]]] = {}

    def chains_ending(v):
        if v not in memo:
            out = [(v,)]
            for u in faces_below[v]:
                out.extend(ch + (v,) for ch in chains_ending(u))
            memo[v] = out
        return memo[v]

    by_dim: dict[int, list] = {}
    for v in range(len(simplices)):
        for ch in chains_ending(v):
            by_dim.setdefault(len(ch) - 1, []).append(ch)
    action = []
    for a in T.action:
        action.append([index[tuple(sorted(a[x] for x in s))] for s in simplices])
    diag = []
    for s in simplices:
        mask = -1
        for x in s:
            mask &= T.diag[x]
        diag.append(mask)
    top = max(by_dim)
    return Regularized(
        [sorted(by_dim.get(d, [])) for d in range(top + 1)], action, diag, T.rounds + 1, T.p, simplices
    )


def regularity_violations(T: Regularized) -> list[tuple[int, tuple]]:
    """Simplices mapped to themselves by a group element that moves one of their vertices."""
    bad = []
    for g, a in enumerate(T.action):
        if all(a[v] == v for v in range(T.n_vertices)):
            continue
        for s in T.all_simplices():
            img = tuple(a[v] for v in s)
            if img != s and set(img) == set(s):
                bad.append((g, s))
    return bad


def regularize(P: CwProduct, rounds: int = 1, max_rounds: int = 3, check: bool = True) -> Regularized:
    """Iterated barycentric subdivision of the product cell poset.

    Raises if, after ``max_rounds``, some simplex is still mapped onto itself
    by a group element that does not fix it pointwise.
    """
    if rounds < 1:
        raise PowerEngineError("rounds must be >= 1")
    T = _order_complex_of_product(P)
    while T.rounds < rounds:
        T = _subdivide(T)
    if check:
        while regularity_violations(T):
            if T.rounds >= max_rounds:
                raise PowerEngineError(f"action is not regular after {T.rounds} rounds; request more rounds")
            T = _subdivide(T)
    return T


# ---------------------------------------------------------------------------
# quotient


def _canonical(T: Regularized, s: tuple) -> tuple:
    return min(tuple(a[v] for v in s) for a in T.action)


def orbit_cells(T: Regularized) -> list[list[tuple]]:
    """Canonical representatives of orbits of off-diagonal simplices, by dimension."""
    out = []
    for ss in T.simplices:
        reps = {_canonical(T, s) for s in ss if not T.is_diagonal(s)}
        out.append(sorted(reps))
    return out


def quotient_and_contract(T: Regularized) -> ChainComplex:
    """Chains of the orbit complex relative to the image of the diagonal.

    The stabilizer of each off-diagonal simplex is trivial, so orbit cells are
    genuine cells and the incidence of a face orbit is the number of faces of
    the representative that land in it, mod 2.
    """
    cells = orbit_cells(T)
    pos = [{c: i for i, c in enumerate(cs)} for cs in cells]
    columns = []
    for d, cs in enumerate(cells):
        cols = []
        for s in cs:
            v = 0
            if d > 0:
                for k in range(len(s)):
                    f = s[:k] + s[k + 1:]
                    if T.is_diagonal(f):
                        continue
                    v ^= 1 << pos[d - 1][_canonical(T, f)]
            cols.append(v)
        columns.append(cols)
    return ChainComplex.from_columns([len(cs) for cs in cells], columns)


def burnside_euler(T: Regularized) -> int:
    """Relative Euler characteristic from fixed-simplex counts (Burnside's lemma)."""
    order = len(T.action)
    total = 0
    for d, ss in enumerate(T.simplices):
        fixed_all = fixed_diag = 0
        for a in T.action:
            for s in ss:
                if tuple(a[v] for v in s) == s:
                    fixed_all += 1
                    if T.is_diagonal(s):
                        fixed_diag += 1
        if (fixed_all - fixed_diag) % order:
            raise PowerEngineError("Burnside count is not an integer")
        total += (-1) ** d * (fixed_all - fixed_diag) // order
    return total


@dataclass
class PowerResult:
    betti: BettiVector
    complex: ChainComplex
    rounds: int
    simplex_counts: list[int]
    orbit_counts: list[int]
    euler: int
    burnside_euler: int

    def as_dict(self) -> dict:
        return {
            "betti": list(self.betti.values),
            "total": self.betti.total,
            "rounds": self.rounds,
            "simplex_counts": self.simplex_counts,
            "orbit_counts": self.orbit_counts,
            "euler": self.euler,
            "burnside_euler": self.burnside_euler,
        }


def rd_power(K: SimplicialComplex, p: int, rounds: int = 1, cap: int | None = None) -> PowerResult:
    P = product_complex(K, p)
    cap = cell_cap() if cap is None else cap
    est = estimate_cells(P, rounds)
    if est > cap:
        raise CellCapExceeded(est, cap)
    T = regularize(P, rounds)
    cx = quotient_and_contract(T)
    return PowerResult(betti(cx), cx, T.rounds, T.counts(), list(cx.dims), euler_characteristic(cx), burnside_euler(T))


def rd_power_homology(K: SimplicialComplex, p: int, rounds: int = 1, cap: int | None = None) -> BettiVector:
    """H_*(K^p / D_p, Delta; Z/2) through the subdivided orbit complex."""
    return rd_power(K, p, rounds, cap).betti
