"""Dense GF(2) matrices stored as bit-packed rows.

Each row is held as a Python ``int`` whose bit ``j`` is the entry in
column ``j``.  Arbitrary-precision integers give word-packed storage and a
fast XOR, and keep sparse boundary matrices cheap to eliminate.
"""
from __future__ import annotations

from typing import Iterable, Iterator, Sequence

import numpy as np


def iter_bits(x: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``x`` in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def popcount(x: int) -> int:
    return bin(x).count("1")


def lowest_bit(x: int) -> int:
    return (x & -x).bit_length() - 1


class Gf2Matrix:
    """An immutable ``rows x cols`` matrix over the two-element field."""

    __slots__ = ("rows", "cols", "_bits", "_rank")

    def __init__(self, rows: int, cols: int, bits: Iterable[int] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError(f"negative shape ({rows}, {cols})")
        self.rows = int(rows)
        self.cols = int(cols)
        data = tuple(int(b) for b in bits) if bits is not None else (0,) * self.rows
        if len(data) != self.rows:
            raise ValueError(f"expected {self.rows} rows, got {len(data)}")
        limit = 1 << self.cols
        for i, b in enumerate(data):
            if b < 0 or b >= limit:
                raise ValueError(f"row {i} has bits outside {self.cols} columns")
        self._bits = data
        self._rank: int | None = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Gf2Matrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls(n, n, (1 << i for i in range(n)))

    @classmethod
    def from_dense(cls, array) -> "Gf2Matrix":
        a = np.asarray(array, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError("dense input must be two-dimensional")
        rows, cols = a.shape
        bits = []
        for r in range(rows):
            v = 0
            for c in np.flatnonzero(a[r] & 1):
                v |= 1 << int(c)
            bits.append(v)
        return cls(rows, cols, bits)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[int]) -> "Gf2Matrix":
        """Build a matrix from its columns, each given as a bitmask over rows."""
        out = [0] * rows
        for j, col in enumerate(columns):
            bit = 1 << j
            for i in iter_bits(col):
                if i >= rows:
                    raise IndexError(f"column {j} has an entry in row {i} >= {rows}")
                out[i] |= bit
        return cls(rows, len(columns), out)

    # -- access -------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def row_bits(self) -> tuple[int, ...]:
        return self._bits

    def entry(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) outside shape {self.shape}")
        return (self._bits[i] >> j) & 1

    def columns(self) -> list[int]:
        """Columns as bitmasks over the rows."""
        cols = [0] * self.cols
        for i, row in enumerate(self._bits):
            bit = 1 << i
            for j in iter_bits(row):
                cols[j] |= bit
        return cols

    def to_dense(self) -> np.ndarray:
        a = np.zeros(self.shape, dtype=np.uint8)
        for i, row in enumerate(self._bits):
            for j in iter_bits(row):
                a[i, j] = 1
        return a

    def is_zero(self) -> bool:
        return not any(self._bits)

    def nnz(self) -> int:
        return sum(popcount(b) for b in self._bits)

    # -- algebra ------------------------------------------------------
    def transpose(self) -> "Gf2Matrix":
        return Gf2Matrix(self.cols, self.rows, self.columns())

    @property
    def T(self) -> "Gf2Matrix":
        return self.transpose()

    def apply(self, v: int) -> int:
        """Multiply by a column vector given as a bitmask over the columns."""
        out = 0
        for i, row in enumerate(self._bits):
            if popcount(row & v) & 1:
                out |= 1 << i
        return out

    def __matmul__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        ob = other._bits
        out = []
        for row in self._bits:
            acc = 0
            for j in iter_bits(row):
                acc ^= ob[j]
            out.append(acc)
        return Gf2Matrix(self.rows, other.cols, out)

    def __add__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.shape != other.shape:
            raise ValueError(f"cannot add {self.shape} and {other.shape}")
        return Gf2Matrix(self.rows, self.cols, (a ^ b for a, b in zip(self._bits, other._bits)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Gf2Matrix):
            return NotImplemented
        return self.shape == other.shape and self._bits == other._bits

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._bits))

    def __repr__(self) -> str:
        return f"Gf2Matrix({self.rows}x{self.cols}, nnz={self.nnz()})"

    def permute(self, row_order: Sequence[int], col_order: Sequence[int]) -> "Gf2Matrix":
        """Return the matrix with rows and columns reordered.

        ``row_order[k]`` is the source row placed at position ``k``; likewise
        for columns.
        """
        if sorted(row_order) != list(range(self.rows)) or sorted(col_order) != list(range(self.cols)):
            raise ValueError("orders must be permutations")
        new_pos = {src: k for k, src in enumerate(col_order)}
        out = []
        for src in row_order:
            v = 0
            for j in iter_bits(self._bits[src]):
                v |= 1 << new_pos[j]
            out.append(v)
        return Gf2Matrix(self.rows, self.cols, out)

    def rank(self) -> int:
        if self._rank is None:
            self._rank = rank_of_vectors(self._bits)
        return self._rank

    def nullspace(self) -> list[int]:
        """Basis of ``{x : A x = 0}`` as bitmasks over the columns."""
        return kernel_from_columns(self.columns(), self.cols)


def rank(a: Gf2Matrix) -> int:
    """Rank over GF(2) by elimination."""
    return a.rank()


def rank_of_vectors(vectors: Iterable[int]) -> int:
    """Dimension of the span of a family of bitmask vectors.

    Pivots on the lowest set bit, so the elimination order follows column
    order and is deterministic.
    """
    pivots: dict[int, int] = {}
    for v in vectors:
        while v:
            low = lowest_bit(v)
            p = pivots.get(low)
            if p is None:
                pivots[low] = v
                break
            v ^= p
    return len(pivots)


def kernel_from_columns(columns: Sequence[int], ncols: int | None = None) -> list[int]:
    """Kernel basis of the matrix whose ``j``-th column is ``columns[j]``.

    The returned vectors have pairwise distinct leading (highest) bits and
    are fully reduced: no vector has a bit set at another's leading position.
    """
    n = len(columns) if ncols is None else ncols
    pivots: dict[int, tuple[int, int]] = {}
    kernel: list[int] = []
    for j in range(n):
        v = columns[j]
        comb = 1 << j
        while v:
            low = lowest_bit(v)
            p = pivots.get(low)
            if p is None:
                pivots[low] = (v, comb)
                break
            v ^= p[0]
            comb ^= p[1]
        if not v:
            kernel.append(comb)
    return reduce_to_echelon(kernel)


def reduce_to_echelon(vectors: Sequence[int]) -> list[int]:
    """Fully reduce vectors that already have distinct leading bits."""
    ordered = sorted(vectors, key=lambda v: v.bit_length())
    if len({v.bit_length() for v in ordered}) != len(ordered) or (ordered and ordered[0] == 0):
        raise ValueError("vectors must be nonzero with distinct leading bits")
    by_lead: dict[int, int] = {}
    mask = 0
    for v in ordered:
        while True:
            hits = v & mask
            if not hits:
                break
            v ^= by_lead[hits.bit_length() - 1]
        lead = v.bit_length() - 1
        by_lead[lead] = v
        mask |= 1 << lead
    return list(by_lead.values())


class Subspace:
    """A subspace of GF(2)^n held in reduced echelon form.

    Coordinates of a member vector are read off at the leading positions.
    """

    __slots__ = ("ambient", "basis", "leads", "_lead_index")

    def __init__(self, ambient: int, basis: Sequence[int]):
        self.ambient = ambient
        self.basis = list(basis)
        self.leads = [v.bit_length() - 1 for v in self.basis]
        self._lead_index = {lead: k for k, lead in enumerate(self.leads)}
        mask = sum(1 << b for b in self._lead_index)
        if len(self._lead_index) != len(self.basis) or any(
            (v & mask) != (1 << lead) for v, lead in zip(self.basis, self.leads)
        ):
            raise ValueError("basis must be in reduced echelon form")

    @classmethod
    def kernel(cls, columns: Sequence[int], ncols: int) -> "Subspace":
        return cls(ncols, kernel_from_columns(columns, ncols))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, v: int) -> int:
        """Coordinates of ``v`` in this basis (``v`` must be a member)."""
        out = 0
        for b in iter_bits(v):
            k = self._lead_index.get(b)
            if k is not None:
                out |= 1 << k
        if __debug__ and self.expand(out) != v:
            raise ValueError("vector is not in the subspace")
        return out

    def expand(self, coords: int) -> int:
        v = 0
        for k in iter_bits(coords):
            v ^= self.basis[k]
        return v


class Reducer:
    """Incremental span with normal-form reduction.

    Pivots are leading (highest) bits; ``reduce`` returns the unique
    representative supported away from every pivot, so the non-pivot
    positions index a complement of the span.
    """

    __slots__ = ("pivots", "mask")

    def __init__(self):
        self.pivots: dict[int, int] = {}
        self.mask = 0

    def reduce(self, v: int) -> int:
        piv = self.pivots
        mask = self.mask
        while True:
            hits = v & mask
            if not hits:
                return v
            # a pivot row only carries bits at or below its leading bit
            v ^= piv[hits.bit_length() - 1]

    def add(self, v: int) -> bool:
        """Insert ``v``; return True if it enlarged the span."""
        v = self.reduce(v)
        if not v:
            return False
        lead = v.bit_length() - 1
        self.pivots[lead] = v
        self.mask |= 1 << lead
        return True

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    def __len__(self) -> int:
        return len(self.pivots)
