"""Chain complexes over GF(2) and their Betti numbers."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .gf2 import Gf2Matrix, iter_bits


class ChainComplexError(ValueError):
    """Raised for malformed complexes (shape mismatch, nonzero d∘d)."""


@dataclass(frozen=True)
class Violation:
    degree: int
    element: int
    label: object = None

    def __str__(self) -> str:
        name = f" ({self.label})" if self.label is not None else ""
        return f"d∘d != 0 at degree {self.degree}, basis element {self.element}{name}"


@dataclass(frozen=True)
class BettiVector:
    """Homology dimensions by degree."""

    values: tuple[int, ...]
    top_degree: int | None = None

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        if any(v < 0 for v in vals):
            raise ValueError(f"negative Betti number in {vals}")
        object.__setattr__(self, "values", vals)
        if self.top_degree is None:
            object.__setattr__(self, "top_degree", max(len(vals) - 1, 0))

    @property
    def total(self) -> int:
        return sum(self.values)

    def __getitem__(self, q: int) -> int:
        return self.values[q] if 0 <= q < len(self.values) else 0

    def __len__(self) -> int:
        return len(self.values)

    def trimmed(self) -> "BettiVector":
        vals = list(self.values)
        while len(vals) > 1 and vals[-1] == 0:
            vals.pop()
        return BettiVector(tuple(vals))

    def padded(self, n: int) -> tuple[int, ...]:
        return tuple(self[q] for q in range(n))

    def same_as(self, other: "BettiVector") -> bool:
        n = max(len(self), len(other))
        return self.padded(n) == other.padded(n)

    def is_poincare_dual(self) -> bool:
        m = self.top_degree
        vals = self.padded(m + 1)
        return vals[0] == 1 and all(vals[i] == vals[m - i] for i in range(m + 1))

    def validate_manifold(self) -> None:
        if not self.is_poincare_dual() or len(self.trimmed()) > self.top_degree + 1:
            raise ValueError(f"{self.values} is not the Z/2 Betti vector of a closed {self.top_degree}-manifold")

    def degrees(self) -> list[int]:
        """Degrees carrying nonzero homology."""
        return [q for q, v in enumerate(self.values) if v]


@dataclass(frozen=True)
class ChainComplex:
    """Graded GF(2) vector spaces with boundary maps.

    ``boundaries[q]`` maps degree ``q`` to degree ``q - 1`` and has shape
    ``dims[q-1] x dims[q]``; ``boundaries[0]`` is the zero map out of degree 0.
    """

    dims: tuple[int, ...]
    boundaries: tuple[Gf2Matrix, ...]
    labels: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        bds = tuple(self.boundaries)
        if len(bds) != len(dims):
            raise ChainComplexError(f"{len(dims)} degrees but {len(bds)} boundary maps")
        for q, (d, b) in enumerate(zip(dims, bds)):
            expected = (dims[q - 1] if q > 0 else 0, d)
            if b.shape != expected:
                raise ChainComplexError(f"boundary[{q}] has shape {b.shape}, expected {expected}")
        object.__setattr__(self, "boundaries", bds)
        if self.labels is not None:
            labels = tuple(tuple(lv) for lv in self.labels)
            if len(labels) != len(dims) or any(len(lv) != d for lv, d in zip(labels, dims)):
                raise ChainComplexError("labels do not match dims")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_columns(cls, dims: Sequence[int], columns: Sequence[Sequence[int]], labels=None) -> "ChainComplex":
        """Build from per-degree column lists (images of basis elements)."""
        dims = list(dims)
        bds = []
        for q, d in enumerate(dims):
            rows = dims[q - 1] if q > 0 else 0
            cols = list(columns[q]) if q < len(columns) else [0] * d
            if q == 0:
                cols = [0] * d
            bds.append(Gf2Matrix.from_columns(rows, cols) if d else Gf2Matrix(rows, 0))
        return cls(tuple(dims), tuple(bds), labels)

    @classmethod
    def zero(cls) -> "ChainComplex":
        return cls((0,), (Gf2Matrix(0, 0),))

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def boundary(self, q: int) -> Gf2Matrix:
        if 0 <= q < len(self.dims):
            return self.boundaries[q]
        if q == len(self.dims):
            return Gf2Matrix(self.dims[-1], 0)
        raise IndexError(q)

    def label(self, q: int, i: int):
        return self.labels[q][i] if self.labels is not None else None

    # -- serialization --------------------------------------------------
    def to_json(self) -> dict:
        doc = {
            "dims": list(self.dims),
            "boundaries": [[format(r, "x") for r in b.row_bits] for b in self.boundaries],
        }
        if self.labels is not None:
            doc["labels"] = [[str(x) for x in lv] for lv in self.labels]
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, doc: dict) -> "ChainComplex":
        dims = [int(d) for d in doc["dims"]]
        rows = doc["boundaries"]
        if len(rows) != len(dims):
            raise ChainComplexError("boundaries list does not match dims")
        bds = []
        for q, d in enumerate(dims):
            r = dims[q - 1] if q > 0 else 0
            bds.append(Gf2Matrix(r, d, [int(h, 16) for h in rows[q]]))
        return cls(tuple(dims), tuple(bds), doc.get("labels"))

    @classmethod
    def loads(cls, text: str) -> "ChainComplex":
        return cls.from_json(json.loads(text))


def validate(c: ChainComplex) -> Violation | None:
    """Check d∘d = 0 in every degree.

    Returns None when the complex is valid, otherwise the first degree ``q``
    and basis element of degree ``q`` whose image under d∘d is nonzero.
    """
    if not c.boundaries[0].is_zero():
        raise ChainComplexError("boundary[0] must be the zero map")
    for q in range(2, len(c.dims)):
        lower = c.boundaries[q - 1].columns()
        for j, col in enumerate(c.boundaries[q].columns()):
            acc = 0
            for i in iter_bits(col):
                acc ^= lower[i]
            if acc:
                return Violation(q, j, c.label(q, j))
    return None


def is_valid(c: ChainComplex) -> bool:
    return validate(c) is None


def _require_valid(c: ChainComplex) -> None:
    v = validate(c)
    if v is not None:
        raise ChainComplexError(str(v))


def betti(c: ChainComplex, check: bool = True) -> BettiVector:
    """Betti numbers dims[q] - rank d_q - rank d_{q+1}."""
    if check:
        _require_valid(c)
    ranks = [b.rank() for b in c.boundaries] + [0]
    return BettiVector(tuple(c.dims[q] - ranks[q] - ranks[q + 1] for q in range(len(c.dims))))


def euler_characteristic(c: ChainComplex) -> int:
    return sum((-1) ** q * d for q, d in enumerate(c.dims))


def direct_sum(complexes: Sequence[ChainComplex]) -> ChainComplex:
    """Block-diagonal sum; degrees are padded with zero spaces."""
    if not complexes:
        return ChainComplex.zero()
    top = max(len(c.dims) for c in complexes)
    dims = [sum(c.dims[q] if q < len(c.dims) else 0 for c in complexes) for q in range(top)]
    columns: list[list[int]] = [[] for _ in range(top)]
    labels: list[list] | None = [[] for _ in range(top)] if all(c.labels is not None for c in complexes) else None
    offsets = [0] * top
    for c in complexes:
        for q in range(top):
            if q >= len(c.dims):
                continue
            shift = offsets[q - 1] if q > 0 else 0
            for col in c.boundaries[q].columns():
                columns[q].append(col << shift)
            if labels is not None:
                labels[q].extend(c.labels[q])
        for q in range(top):
            if q < len(c.dims):
                offsets[q] += c.dims[q]
    return ChainComplex.from_columns(dims, columns, labels)


def from_boundary_dict(dims: Sequence[int], faces: dict[tuple[int, int], Sequence[int]]) -> ChainComplex:
    """Complex from ``{(q, j): [indices of degree q-1 faces]}``, counted mod 2."""
    columns = [[0] * d for d in dims]
    for (q, j), idx in faces.items():
        v = 0
        for i in idx:
            v ^= 1 << i
        columns[q][j] = v
    return ChainComplex.from_columns(dims, columns)


__all__ = [
    "BettiVector",
    "ChainComplex",
    "ChainComplexError",
    "Violation",
    "betti",
    "direct_sum",
    "euler_characteristic",
    "is_valid",
    "validate",
    "from_boundary_dict",
]
