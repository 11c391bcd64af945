"""Simplicial modules over GF(2) (FD-modules) and the homology of their quotients.

A module is stored levelwise: ``levels[q]`` is the basis size of K_q and the
face/degeneracy operators are kept as column lists (the image of each basis
vector as a bitmask).  ``face_matrix``/``degeneracy_matrix`` expose them as
:class:`Gf2Matrix` objects.

The sphere models are the reduced (or pointed) chains of the simplicial set
Delta^m / boundary: a q-simplex is a monotone surjection [q] -> [m], written
as its value sequence, and every non-surjective map is the base point.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .cells import BouquetSpec
from .chain import BettiVector, ChainComplex, betti, validate
from .gf2 import Gf2Matrix, Reducer, Subspace, iter_bits

BASEPOINT = "*"


class FDModuleError(ValueError):
    pass


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    q: int
    i: int
    j: int | None = None

    def __str__(self) -> str:
        js = f", j={self.j}" if self.j is not None else ""
        return f"axiom {self.axiom} fails at level {self.q} (i={self.i}{js})"


def _compose(outer: Sequence[int], inner: Sequence[int]) -> list[int]:
    """Columns of ``outer @ inner``."""
    out = []
    for col in inner:
        acc = 0
        for b in iter_bits(col):
            acc ^= outer[b]
        out.append(acc)
    return out


def _apply(cols: Sequence[int], v: int) -> int:
    acc = 0
    for b in iter_bits(v):
        acc ^= cols[b]
    return acc


@dataclass(frozen=True, eq=False)
class FDModule:
    """A truncated simplicial GF(2)-module.

    ``faces[q][i]`` (0 <= i <= q, q >= 1) maps K_q -> K_{q-1};
    ``degeneracies[q][i]`` (0 <= i <= q, q < q_max) maps K_q -> K_{q+1}.
    ``faces[0]`` is empty.  ``aliases[q]`` optionally sends labels that are
    not basis elements (e.g. non-representatives after a quotient) to vectors.
    """

    levels: tuple[int, ...]
    faces: tuple[tuple[tuple[int, ...], ...], ...]
    degeneracies: tuple[tuple[tuple[int, ...], ...], ...]
    labels: tuple[tuple, ...] | None = None
    aliases: tuple[dict, ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        n = len(self.levels)
        if n == 0:
            raise FDModuleError("a module needs at least level 0")
        if len(self.faces) != n or len(self.degeneracies) != n:
            raise FDModuleError("faces/degeneracies must be listed for every level")
        for q in range(n):
            if len(self.faces[q]) != (q + 1 if q > 0 else 0):
                raise FDModuleError(f"level {q} needs {q + 1 if q else 0} faces")
            want = q + 1 if q < n - 1 else 0
            if len(self.degeneracies[q]) != want:
                raise FDModuleError(f"level {q} needs {want} degeneracies")
            for cols in self.faces[q]:
                if len(cols) != self.levels[q] or any(c >> self.levels[q - 1] for c in cols):
                    raise FDModuleError(f"face at level {q} has the wrong shape")
            for cols in self.degeneracies[q]:
                if len(cols) != self.levels[q] or any(c >> self.levels[q + 1] for c in cols):
                    raise FDModuleError(f"degeneracy at level {q} has the wrong shape")
        if self.labels is not None and [len(lv) for lv in self.labels] != list(self.levels):
            raise FDModuleError("labels do not match level sizes")

    @property
    def q_max(self) -> int:
        return len(self.levels) - 1

    def face_matrix(self, q: int, i: int) -> Gf2Matrix:
        if i > q or q == 0:
            return Gf2Matrix(self.levels[q - 1] if q else 0, self.levels[q])
        return Gf2Matrix.from_columns(self.levels[q - 1], self.faces[q][i])

    def degeneracy_matrix(self, q: int, i: int) -> Gf2Matrix:
        if q >= self.q_max:
            raise FDModuleError(f"degeneracies out of level {q} are truncated")
        if i > q:
            return Gf2Matrix(self.levels[q + 1], self.levels[q])
        return Gf2Matrix.from_columns(self.levels[q + 1], self.degeneracies[q][i])

    def vector_of(self, q: int, label) -> int:
        index = self._label_index(q)
        if label in index:
            return 1 << index[label]
        if self.aliases is not None and label in self.aliases[q]:
            return self.aliases[q][label]
        raise KeyError(label)

    def _label_index(self, q: int) -> dict:
        cache = self.__dict__.setdefault("_index_cache", {})
        if q not in cache:
            if self.labels is None:
                raise FDModuleError("module has no labels")
            cache[q] = {lab: i for i, lab in enumerate(self.labels[q])}
        return cache[q]

    def truncate(self, q_max: int) -> "FDModule":
        if q_max > self.q_max:
            raise FDModuleError(f"cannot extend truncation from {self.q_max} to {q_max}")
        n = q_max + 1
        degs = list(self.degeneracies[:n])
        degs[-1] = ()
        return FDModule(
            self.levels[:n],
            self.faces[:n],
            tuple(degs),
            self.labels[:n] if self.labels is not None else None,
            self.aliases[:n] if self.aliases is not None else None,
        )

    def to_json(self) -> dict:
        def hexcols(cols, rows):
            return [format(r, "x") for r in Gf2Matrix.from_columns(rows, cols).row_bits]

        return {
            "levels": list(self.levels),
            "faces": [[hexcols(c, self.levels[q - 1]) for c in self.faces[q]] for q in range(len(self.levels))],
            "degeneracies": [
                [hexcols(c, self.levels[q + 1]) for c in self.degeneracies[q]] for q in range(len(self.levels))
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "FDModule":
        levels = [int(x) for x in doc["levels"]]

        def cols(hexrows, rows, ncols):
            return tuple(Gf2Matrix(rows, ncols, [int(h, 16) for h in hexrows]).columns())

        faces = tuple(
            tuple(cols(h, levels[q - 1], levels[q]) for h in doc["faces"][q]) for q in range(len(levels))
        )
        degs = tuple(
            tuple(cols(h, levels[q + 1], levels[q]) for h in doc["degeneracies"][q]) for q in range(len(levels))
        )
        return cls(tuple(levels), faces, degs)


# ---------------------------------------------------------------------------
# axioms


def check_axioms(K: FDModule) -> AxiomViolation | None:
    """Exhaustively check the simplicial identities below the truncation.

    Vanishing for i > q holds by construction (such operators are not stored).
    """
    F, S, L = K.faces, K.degeneracies, K.levels
    top = K.q_max
    # d^i d^j = d^{j-1} d^i  (i < j)
    for q in range(2, top + 1):
        for j in range(q + 1):
            for i in range(j):
                if _compose(F[q - 1][i], F[q][j]) != _compose(F[q - 1][j - 1], F[q][i]):
                    return AxiomViolation("face-face", q, i, j)
    # s^i s^j = s^{j+1} s^i  (i <= j)
    for q in range(0, top - 1):
        for j in range(q + 1):
            for i in range(j + 1):
                if _compose(S[q + 1][i], S[q][j]) != _compose(S[q + 1][j + 1], S[q][i]):
                    return AxiomViolation("degeneracy-degeneracy", q, i, j)
    for q in range(0, top):
        ident = [1 << b for b in range(L[q])]
        for j in range(q + 1):
            for i in range(q + 2):
                lhs = _compose(F[q + 1][i], S[q][j])
                if i < j:
                    rhs = _compose(S[q - 1][j - 1], F[q][i])
                    name = "face-degeneracy (i<j)"
                elif i in (j, j + 1):
                    rhs = ident
                    name = "face-degeneracy (identity)"
                else:
                    rhs = _compose(S[q - 1][j], F[q][i - 1])
                    name = "face-degeneracy (i>j+1)"
                if lhs != rhs:
                    return AxiomViolation(name, q, i, j)
    return None


def _require_axioms(K: FDModule) -> None:
    v = check_axioms(K)
    if v is not None:
        raise FDModuleError(str(v))


# ---------------------------------------------------------------------------
# chain complexes


def moore_complex(K: FDModule, check: bool = True) -> ChainComplex:
    """Joint kernel of the faces d^0..d^{q-1} in each level, with boundary d^q."""
    if check:
        _require_axioms(K)
    spaces: list[Subspace] = []
    for q, n in enumerate(K.levels):
        if q == 0:
            spaces.append(Subspace(n, [1 << b for b in range(n)]))
            continue
        nrows = K.levels[q - 1]
        stacked = [0] * n
        for i in range(q):
            shift = i * nrows
            for b, col in enumerate(K.faces[q][i]):
                stacked[b] |= col << shift
        spaces.append(Subspace.kernel(stacked, n))
    dims = [s.dim for s in spaces]
    columns: list[list[int]] = [[0] * dims[0]]
    for q in range(1, len(K.levels)):
        last = K.faces[q][q]
        target = spaces[q - 1]
        columns.append([target.coordinates(_apply(last, v)) for v in spaces[q].basis])
    cx = ChainComplex.from_columns(dims, columns)
    if validate(cx) is not None:
        raise FDModuleError("Moore complex fails d∘d = 0")
    return cx


def alternating_complex(K: FDModule, check: bool = True) -> ChainComplex:
    """Full levels with boundary the sum of all faces (signs vanish mod 2)."""
    if check:
        _require_axioms(K)
    columns: list[list[int]] = [[0] * K.levels[0]]
    for q in range(1, len(K.levels)):
        cols = [0] * K.levels[q]
        for face in K.faces[q]:
            cols = [a ^ b for a, b in zip(cols, face)]
        columns.append(cols)
    cx = ChainComplex.from_columns(K.levels, columns)
    if validate(cx) is not None:
        raise FDModuleError("alternating complex fails d∘d = 0")
    return cx


def homology_through_degree(K: FDModule, d: int, check: bool = True, route: str = "moore") -> BettiVector:
    """Betti numbers in degrees 0..d; needs one guard level above d."""
    if K.q_max < d + 1:
        raise FDModuleError(f"truncation {K.q_max} is too low for degree {d} (need >= {d + 1})")
    build = moore_complex if route == "moore" else alternating_complex
    cx = build(K.truncate(d + 1), check=check)
    return BettiVector(betti(cx).values[: d + 1])


def reliable_degrees(K: FDModule) -> range:
    return range(0, K.q_max)


# ---------------------------------------------------------------------------
# constructions


def _build(levels_labels: list[list], face_fn: Callable, degen_fn: Callable) -> FDModule:
    """Module spanned by labelled simplices; ``face_fn(label, i)`` returns a label or None."""
    index = [{lab: k for k, lab in enumerate(lv)} for lv in levels_labels]
    n = len(levels_labels)
    faces, degs = [], []
    for q, lv in enumerate(levels_labels):
        fq = []
        if q > 0:
            for i in range(q + 1):
                cols = []
                for lab in lv:
                    img = face_fn(lab, i)
                    cols.append(0 if img is None else 1 << index[q - 1][img])
                fq.append(tuple(cols))
        faces.append(tuple(fq))
        dq = []
        if q < n - 1:
            for i in range(q + 1):
                cols = []
                for lab in lv:
                    img = degen_fn(lab, i)
                    cols.append(0 if img is None else 1 << index[q + 1][img])
                dq.append(tuple(cols))
        degs.append(tuple(dq))
    return FDModule(tuple(len(lv) for lv in levels_labels), tuple(faces), tuple(degs),
                    tuple(tuple(lv) for lv in levels_labels))


def _surjections(q: int, m: int) -> list[tuple[int, ...]]:
    out = []
    for jumps in itertools.combinations(range(1, q + 1), m):
        seq, v = [], 0
        js = set(jumps)
        for t in range(q + 1):
            if t in js:
                v += 1
            seq.append(v)
        out.append(tuple(seq))
    return out


def sphere_model(m: int, q_max: int | None = None, pointed: bool = False) -> FDModule:
    """Chains of Delta^m / boundary, reduced at the base point unless ``pointed``.

    Level q has C(q, m) surjections (plus the base point when pointed).
    """
    if m < 0:
        raise FDModuleError("sphere dimension must be >= 0")
    q_max = 3 * m + 2 if q_max is None else q_max
    levels = []
    for q in range(q_max + 1):
        lv = [(0, s) for s in _surjections(q, m)] if m > 0 or q == 0 else []
        if m == 0 and q > 0:
            lv = [(0, (0,) * (q + 1))]
        if pointed:
            lv = [BASEPOINT] + lv
        levels.append(lv)
    return _build(levels, _simplex_face(pointed, m), _simplex_degeneracy)


def _simplex_face(pointed: bool, m_of) -> Callable:
    def face(label, i):
        if label == BASEPOINT:
            return BASEPOINT
        sphere, seq = label
        img = seq[:i] + seq[i + 1:]
        top = m_of(sphere) if callable(m_of) else m_of
        if img[0] != 0 or img[-1] != top or any(b - a > 1 for a, b in zip(img, img[1:])):
            return BASEPOINT if pointed else None
        return (sphere, img)

    return face


def _simplex_degeneracy(label, i):
    if label == BASEPOINT:
        return BASEPOINT
    sphere, seq = label
    return (sphere, seq[: i + 1] + seq[i:])


def point_module(q_max: int) -> FDModule:
    """The constant simplicial module with one basis element per level (unit for products)."""
    levels = [[BASEPOINT] for _ in range(q_max + 1)]
    return _build(levels, lambda lab, i: BASEPOINT, lambda lab, i: BASEPOINT)


def zero_module(q_max: int) -> FDModule:
    return _build([[] for _ in range(q_max + 1)], lambda lab, i: None, lambda lab, i: None)


def wedge_model(spec: BouquetSpec, q_max: int | None = None, pointed: bool = False) -> FDModule:
    """Wedge of spheres: levelwise sum of reduced sphere models (one base point if pointed).

    Labels are ``(sphere_id, surjection)`` with sphere ids ``"S{p}_{i}"``.
    """
    dims_of = {}
    for p in range(1, spec.m + 1):
        for i in range(spec.kp(p)):
            dims_of[f"S{p}_{i + 1}"] = p
    q_max = 3 * spec.m + 2 if q_max is None else q_max
    if q_max < 3 * spec.m + 1:
        raise FDModuleError(f"wedge models need q_max >= {3 * spec.m + 1}")
    levels = []
    for q in range(q_max + 1):
        lv = [BASEPOINT] if pointed else []
        for name, p in dims_of.items():
            lv += [(name, s) for s in _surjections(q, p)]
        levels.append(lv)
    return _build(levels, _simplex_face(pointed, dims_of.__getitem__), _simplex_degeneracy)


def _tensor(cols1, cols2, n2_target: int, a: int, b: int) -> int:
    out = 0
    for x in iter_bits(cols1[a]):
        base = x * n2_target
        for y in iter_bits(cols2[b]):
            out ^= 1 << (base + y)
    return out


def product(K1: FDModule, K2: FDModule) -> FDModule:
    """Levelwise tensor product with the diagonal face and degeneracy action."""
    if K1.q_max != K2.q_max:
        raise FDModuleError(f"truncation mismatch: {K1.q_max} vs {K2.q_max}")
    L1, L2 = K1.levels, K2.levels
    n = len(L1)
    faces, degs = [], []
    for q in range(n):
        fq = []
        if q > 0:
            for i in range(q + 1):
                c1, c2 = K1.faces[q][i], K2.faces[q][i]
                fq.append(tuple(_tensor(c1, c2, L2[q - 1], a, b) for a in range(L1[q]) for b in range(L2[q])))
        faces.append(tuple(fq))
        dq = []
        if q < n - 1:
            for i in range(q + 1):
                c1, c2 = K1.degeneracies[q][i], K2.degeneracies[q][i]
                dq.append(tuple(_tensor(c1, c2, L2[q + 1], a, b) for a in range(L1[q]) for b in range(L2[q])))
        degs.append(tuple(dq))
    labels = None
    if K1.labels is not None and K2.labels is not None:
        labels = tuple(tuple((x, y) for x in K1.labels[q] for y in K2.labels[q]) for q in range(n))
    return FDModule(tuple(a * b for a, b in zip(L1, L2)), tuple(faces), tuple(degs), labels)


def triple_product(K: FDModule) -> FDModule:
    """K x K x K with flat ``(a, b, c)`` labels."""
    return relabel(product(product(K, K), K), lambda lab: (lab[0][0], lab[0][1], lab[1]))


def direct_sum_modules(modules: Sequence[FDModule]) -> FDModule:
    q_max = modules[0].q_max
    if any(M.q_max != q_max for M in modules):
        raise FDModuleError("truncation mismatch")
    n = q_max + 1
    levels = [sum(M.levels[q] for M in modules) for q in range(n)]

    def stack(get, q, rows_level):
        out = [[] for _ in get(modules[0], q)]
        for i in range(len(out)):
            off = 0
            for M in modules:
                out[i].extend(c << off for c in get(M, q)[i])
                off += M.levels[rows_level]
        return tuple(tuple(c) for c in out)

    faces = tuple(stack(lambda M, q: M.faces[q], q, q - 1) if q else () for q in range(n))
    degs = tuple(stack(lambda M, q: M.degeneracies[q], q, q + 1) if q < n - 1 else () for q in range(n))
    labels = None
    if all(M.labels is not None for M in modules):
        labels = tuple(tuple((k, lab) for k, M in enumerate(modules) for lab in M.labels[q]) for q in range(n))
    return FDModule(tuple(levels), faces, degs, labels)


def relabel(K: FDModule, rename: Callable) -> FDModule:
    """Same module with basis labels mapped through ``rename`` (must stay injective)."""
    labels = tuple(tuple(rename(lab) for lab in lv) for lv in K.labels)
    return FDModule(K.levels, K.faces, K.degeneracies, labels)


def permute_basis(K: FDModule, perms: Sequence[Sequence[int]]) -> FDModule:
    """Reorder each level's basis; ``perms[q][k]`` is the old index placed at position k."""
    new_pos = [{old: k for k, old in enumerate(p)} for p in perms]

    def remap(v, q):
        out = 0
        for b in iter_bits(v):
            out |= 1 << new_pos[q][b]
        return out

    n = K.q_max + 1
    faces = tuple(
        tuple(tuple(remap(cols[old], q - 1) for old in perms[q]) for cols in K.faces[q]) if q else ()
        for q in range(n)
    )
    degs = tuple(
        tuple(tuple(remap(cols[old], q + 1) for old in perms[q]) for cols in K.degeneracies[q]) if q < n - 1 else ()
        for q in range(n)
    )
    labels = None
    if K.labels is not None:
        labels = tuple(tuple(K.labels[q][old] for old in perms[q]) for q in range(n))
    return FDModule(K.levels, faces, degs, labels)


# ---------------------------------------------------------------------------
# symmetric quotients


def _flat_triple(label) -> tuple:
    if isinstance(label, tuple) and len(label) == 3:
        return label
    raise FDModuleError(f"label {label!r} is not a flat triple; build the cube with triple_product")


@dataclass
class QuotientReport:
    """Bookkeeping from a symmetric quotient, level by level."""

    generators: list[int] = field(default_factory=list)
    span_dims: list[int] = field(default_factory=list)
    other_repeats_in_span: list[bool] = field(default_factory=list)
    descends: bool = True


def _quotient(K: FDModule, gen_fn: Callable, flat: Callable, report: QuotientReport) -> FDModule:
    n = K.q_max + 1
    projections: list[list[int]] = []
    keep: list[list[int]] = []
    reducers: list[Reducer] = []
    for q in range(n):
        idx = {flat(lab): i for i, lab in enumerate(K.labels[q])}
        alias = {}
        if K.aliases is not None:
            alias = {flat(lab): v for lab, v in K.aliases[q].items()}

        def vec(t, idx=idx, alias=alias):
            if t in idx:
                return 1 << idx[t]
            return alias[t]

        red = Reducer()
        count, extra_in_span = gen_fn(K.labels[q], flat, vec, red)
        reducers.append(red)
        report.generators.append(count)
        report.span_dims.append(len(red))
        report.other_repeats_in_span.append(extra_in_span)
        pivots = set(red.pivots)
        kept = [j for j in range(K.levels[q]) if j not in pivots]
        pos = {j: k for k, j in enumerate(kept)}
        proj = []
        for j in range(K.levels[q]):
            r = red.reduce(1 << j)
            out = 0
            for b in iter_bits(r):
                out |= 1 << pos[b]
            proj.append(out)
        projections.append(proj)
        keep.append(kept)

    faces, degs = [], []
    for q in range(n):
        fq = []
        if q > 0:
            for i in range(q + 1):
                cols = K.faces[q][i]
                fq.append(tuple(_apply(projections[q - 1], cols[j]) for j in keep[q]))
                for row in reducers[q].pivots.values():
                    if _apply(projections[q - 1], _apply(cols, row)):
                        report.descends = False
        faces.append(tuple(fq))
        dq = []
        if q < n - 1:
            for i in range(q + 1):
                cols = K.degeneracies[q][i]
                dq.append(tuple(_apply(projections[q + 1], cols[j]) for j in keep[q]))
                for row in reducers[q].pivots.values():
                    if _apply(projections[q + 1], _apply(cols, row)):
                        report.descends = False
        degs.append(tuple(dq))
    if not report.descends:
        raise FDModuleError("face/degeneracy operators do not preserve the symmetric submodule")
    labels = tuple(tuple(flat(K.labels[q][j]) for j in keep[q]) for q in range(n))
    aliases = []
    for q in range(n):
        kept = set(keep[q])
        al = {flat(lab): projections[q][j] for j, lab in enumerate(K.labels[q]) if j not in kept}
        if K.aliases is not None:
            for lab, v in K.aliases[q].items():
                al[flat(lab)] = _apply(projections[q], v)
        aliases.append(al)
    return FDModule(tuple(len(k) for k in keep), tuple(faces), tuple(degs), labels, tuple(aliases))


def _sym3_generators(labels, flat, vec, red: Reducer) -> tuple[int, bool]:
    count = 0
    others = []
    for lab in labels:
        a, b, c = flat(lab)
        t = vec((a, b, c))
        for g in (t ^ vec((b, c, a)), t ^ vec((b, a, c))):
            count += 1
            red.add(g)
        if a == b:
            count += 1
            red.add(t)
        elif a == c or b == c:
            others.append(t)
    # repeats in other slot pairs: record whether the symmetrization family already spans them
    in_span = all(red.reduce(t) == 0 for t in others)
    for t in others:
        count += 1
        red.add(t)
    return count, in_span


def _sym2_generators(labels, flat, vec, red: Reducer) -> tuple[int, bool]:
    count = 0
    for lab in labels:
        a, b = flat(lab)
        t = vec((a, b))
        count += 1
        red.add(t ^ vec((b, a)))
        if a == b:
            count += 1
            red.add(t)
    return count, True


def _flat_pair(label) -> tuple:
    if isinstance(label, tuple) and len(label) == 2:
        return label
    raise FDModuleError(f"label {label!r} is not a pair")


def sym_quotient3(K: FDModule, report: QuotientReport | None = None) -> FDModule:
    """Quotient of a triple product by the symmetric submodule.

    The submodule is spanned by ``t + cyclic(t)``, ``t + swap12(t)`` and the
    triples with equal first two entries; repeats in the other slot pairs are
    added too, and ``report.other_repeats_in_span`` records whether they were
    already in the span.  Closure under faces and degeneracies is verified.
    """
    if K.labels is None:
        raise FDModuleError("sym_quotient3 needs triple-structured labels")
    report = QuotientReport() if report is None else report
    return _quotient(K, _sym3_generators, _flat_triple, report)


def sym_quotient2(K: FDModule, report: QuotientReport | None = None) -> FDModule:
    """Quotient of a square by swap-symmetrization and the diagonal pairs."""
    if K.labels is None:
        raise FDModuleError("sym_quotient2 needs pair-structured labels")
    report = QuotientReport() if report is None else report
    return _quotient(K, _sym2_generators, _flat_pair, report)


def distinct_orbit_count(n: int, p: int = 3) -> int:
    """Number of S_p-orbits of p-tuples with pairwise distinct entries from n symbols."""
    out = 1
    for i in range(p):
        out *= n - i
    for i in range(2, p + 1):
        out //= i
    return out


# ---------------------------------------------------------------------------
# routes


def rd3_homology(spec: BouquetSpec, q_max: int | None = None) -> BettiVector:
    """Reduced homology of RD^3(X) for a bouquet X, through degree 3m.

    Uses the pointed model: a simplex with one coordinate at the base point is
    not killed; only the symmetric submodule is.
    """
    q_max = 3 * spec.m + 2 if q_max is None else q_max
    X = wedge_model(spec, q_max, pointed=True)
    Q = sym_quotient3(triple_product(X))
    return homology_through_degree(Q, 3 * spec.m + 1, check=False)


def rd2_homology(spec: BouquetSpec, q_max: int | None = None) -> BettiVector:
    """Homology of (X^2/Z2, diagonal) for a bouquet X, through degree 2m."""
    q_max = 3 * spec.m + 2 if q_max is None else q_max
    X = wedge_model(spec, q_max, pointed=True)
    Q = sym_quotient2(product(X, X))
    return homology_through_degree(Q, 2 * spec.m + 1, check=False)


def smash_rd3_homology(spec: BouquetSpec, q_max: int | None = None) -> BettiVector:
    """Same construction on the reduced model: computes the quotient with the fat wedge collapsed too."""
    q_max = 3 * spec.m + 2 if q_max is None else q_max
    X = wedge_model(spec, q_max, pointed=False)
    Q = sym_quotient3(triple_product(X))
    return homology_through_degree(Q, 3 * spec.m + 1, check=False)


def random_module(seed: int, q_max: int = 5) -> FDModule:
    """A random valid module: a direct sum of small sphere, point and product
    models with each level's basis shuffled."""
    import random

    rng = random.Random(seed)
    pieces = []
    for _ in range(rng.randint(1, 3)):
        kind = rng.choice(["sphere", "sphere", "point", "product"])
        if kind == "sphere":
            pieces.append(sphere_model(rng.randint(0, 2), q_max, pointed=rng.random() < 0.5))
        elif kind == "point":
            pieces.append(point_module(q_max))
        else:
            a = sphere_model(rng.randint(0, 1), q_max, pointed=rng.random() < 0.5)
            b = sphere_model(rng.randint(1, 2), q_max, pointed=rng.random() < 0.5)
            pieces.append(product(a, b))
    K = direct_sum_modules(pieces)
    perms = []
    for n in K.levels:
        p = list(range(n))
        rng.shuffle(p)
        perms.append(p)
    return permute_basis(K, perms)
