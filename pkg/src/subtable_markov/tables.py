"""Tables, subtable masks, marginals and moves.

Python-side indices are 0-based. The 1-based convention used in problem
files and CLI output is handled by the ``from_one_based``/``to_one_based``
helpers and by :mod:`subtable_markov.io`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import IndexOutOfRange, InvalidInput, NegativeCell, ShapeMismatch


@dataclass(frozen=True)
class Shape:
    rows: int
    cols: int

    def __post_init__(self):
        if int(self.rows) < 1 or int(self.cols) < 1:
            raise InvalidInput(f"shape must be at least 1x1, got {self.rows}x{self.cols}")

    @property
    def size(self) -> int:
        return self.rows * self.cols

    def transpose(self) -> "Shape":
        return Shape(self.cols, self.rows)

    def cells(self):
        for i in range(self.rows):
            for j in range(self.cols):
                yield (i, j)

    def __str__(self):
        return f"{self.rows}x{self.cols}"


class _IntArray:
    """Immutable wrapper around a 2-d int64 array."""

    __slots__ = ("_a", "_hash")

    def __init__(self, entries):
        a = np.array(entries, dtype=np.int64)
        if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
            raise InvalidInput(f"expected a non-empty 2-d array, got shape {a.shape}")
        a.setflags(write=False)
        self._a = a
        self._hash = None

    @property
    def entries(self) -> np.ndarray:
        return self._a

    @property
    def shape(self) -> Shape:
        return Shape(*self._a.shape)

    def tolist(self) -> list[list[int]]:
        return self._a.tolist()

    def key(self) -> tuple[int, ...]:
        """Row-major entries; sorting by this gives lexicographic order."""
        return tuple(self._a.ravel().tolist())

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self._a.shape == other._a.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._a.shape, self._a.tobytes()))
        return self._hash

    def __repr__(self):
        return f"{type(self).__name__}({self.tolist()})"


class Table(_IntArray):
    """R x C contingency table of nonnegative counts."""

    __slots__ = ()

    def __init__(self, entries):
        super().__init__(entries)
        if (self._a < 0).any():
            i, j = np.argwhere(self._a < 0)[0]
            raise NegativeCell(int(i), int(j), int(self._a[i, j]))

    @classmethod
    def zeros(cls, shape: Shape) -> "Table":
        return cls(np.zeros((shape.rows, shape.cols), dtype=np.int64))

    @property
    def total(self) -> int:
        return int(self._a.sum())

    def __sub__(self, other: "Table") -> "MoveArray":
        _check_shapes(self, other)
        return MoveArray(self._a - other._a)


class MoveArray(_IntArray):
    """Signed integer array; usually a difference of two tables or a move.

    Zero row and column sums are not enforced here, since the same type
    holds arbitrary differences ``X - Y``. Use :func:`is_move`.
    """

    __slots__ = ()

    def __neg__(self):
        return MoveArray(-self._a)

    def __add__(self, other):
        _check_shapes(self, other)
        return MoveArray(self._a + other.entries)

    @property
    def degree(self) -> int:
        return int(self._a[self._a > 0].sum())


class SubtableMask:
    """A set ``S`` of cells whose total is fixed in addition to the margins.

    Members are stored both as a boolean array and as one bitset per row
    (bit ``j`` of ``row_bits[i]`` set iff cell ``(i, j)`` is in ``S``).
    """

    __slots__ = ("shape", "members", "row_bits", "_array")

    def __init__(self, shape: Shape, members: Iterable[tuple[int, int]] = ()):
        cells = set()
        for cell in members:
            i, j = (int(c) for c in cell)
            if not (0 <= i < shape.rows and 0 <= j < shape.cols):
                raise IndexOutOfRange(f"cell ({i + 1},{j + 1}) outside {shape}")
            cells.add((i, j))
        bits = [0] * shape.rows
        arr = np.zeros((shape.rows, shape.cols), dtype=bool)
        for i, j in cells:
            bits[i] |= 1 << j
            arr[i, j] = True
        arr.setflags(write=False)
        self.shape = shape
        self.members = frozenset(cells)
        self.row_bits = tuple(bits)
        self._array = arr

    @classmethod
    def from_one_based(cls, rows: int, cols: int, cells) -> "SubtableMask":
        return cls(Shape(rows, cols), [(i - 1, j - 1) for i, j in cells])

    @classmethod
    def from_array(cls, array) -> "SubtableMask":
        a = np.asarray(array, dtype=bool)
        return cls(Shape(*a.shape), [tuple(c) for c in np.argwhere(a)])

    @classmethod
    def from_row_bits(cls, shape: Shape, bits) -> "SubtableMask":
        return cls(shape, [(i, j) for i, b in enumerate(bits)
                           for j in range(shape.cols) if b >> j & 1])

    @property
    def array(self) -> np.ndarray:
        return self._array

    def to_one_based(self) -> list[list[int]]:
        return [[i + 1, j + 1] for i, j in sorted(self.members)]

    def __contains__(self, cell) -> bool:
        i, j = cell
        return bool(self.row_bits[i] >> j & 1)

    def __len__(self):
        return len(self.members)

    def is_empty(self) -> bool:
        return not self.members

    def is_full(self) -> bool:
        return len(self.members) == self.shape.size

    def complement(self) -> "SubtableMask":
        return SubtableMask.from_array(~self._array)

    def transpose(self) -> "SubtableMask":
        return SubtableMask(self.shape.transpose(), [(j, i) for i, j in self.members])

    def permute(self, row_perm, col_perm) -> "SubtableMask":
        """Mask with row ``i`` moved to ``row_perm[i]`` and column ``j`` to ``col_perm[j]``."""
        return SubtableMask(self.shape, [(row_perm[i], col_perm[j]) for i, j in self.members])

    def __eq__(self, other):
        if not isinstance(other, SubtableMask):
            return NotImplemented
        return self.shape == other.shape and self.members == other.members

    def __hash__(self):
        return hash((self.shape, self.row_bits))

    def __repr__(self):
        return f"SubtableMask({self.shape}, {self.to_one_based()})"


@dataclass(frozen=True)
class Marginals:
    row_sums: tuple[int, ...]
    col_sums: tuple[int, ...]
    subtable_sum: int

    def __post_init__(self):
        object.__setattr__(self, "row_sums", tuple(int(v) for v in self.row_sums))
        object.__setattr__(self, "col_sums", tuple(int(v) for v in self.col_sums))
        object.__setattr__(self, "subtable_sum", int(self.subtable_sum))

    @property
    def total(self) -> int:
        return sum(self.row_sums)

    @property
    def shape(self) -> Shape:
        return Shape(len(self.row_sums), len(self.col_sums))

    def is_consistent(self) -> bool:
        return (min(self.row_sums + self.col_sums + (self.subtable_sum,)) >= 0
                and sum(self.row_sums) == sum(self.col_sums)
                and self.subtable_sum <= self.total)

    def as_vector(self) -> np.ndarray:
        """The constraint vector ``(row sums, column sums, x(S))``."""
        return np.array(self.row_sums + self.col_sums + (self.subtable_sum,), dtype=np.int64)

    def to_json(self) -> dict:
        return {"row_sums": list(self.row_sums), "col_sums": list(self.col_sums),
                "subtable_sum": self.subtable_sum}


def _check_shapes(a, b):
    if a.shape != b.shape:
        raise ShapeMismatch(f"shape {a.shape} does not match {b.shape}")


def marginals(table: Table, mask: SubtableMask) -> Marginals:
    _check_shapes(table, mask)
    a = table.entries
    return Marginals(a.sum(axis=1).tolist(), a.sum(axis=0).tolist(), int(a[mask.array].sum()))


def is_move(array: MoveArray, mask: SubtableMask) -> bool:
    """True iff ``array`` has zero row sums, zero column sums and zero S-sum."""
    _check_shapes(array, mask)
    a = array.entries
    return bool(not a.sum(axis=1).any() and not a.sum(axis=0).any()
                and a[mask.array].sum() == 0)


def apply_move(table: Table, move: MoveArray, times: int = 1) -> Table:
    """Return ``table + times * move``; raises :class:`NegativeCell` if infeasible."""
    _check_shapes(table, move)
    out = table.entries + times * move.entries
    if (out < 0).any():
        i, j = np.argwhere(out < 0)[0]
        raise NegativeCell(int(i), int(j), int(out[i, j]))
    return Table(out)


def l1_distance(x: _IntArray, y: _IntArray) -> int:
    _check_shapes(x, y)
    return int(np.abs(x.entries - y.entries).sum())


def configuration_matrix(mask: SubtableMask) -> np.ndarray:
    """The 0/1 matrix mapping row-major ``vec(X)`` to the marginals vector.

    Shape is ``(R + C + 1, R * C)``: R row-sum rows, C column-sum rows and a
    final row for the subtable sum.
    """
    R, C = mask.shape.rows, mask.shape.cols
    A = np.zeros((R + C + 1, R * C), dtype=np.int64)
    for i in range(R):
        for j in range(C):
            k = i * C + j
            A[i, k] = 1
            A[R + j, k] = 1
            A[R + C, k] = int((i, j) in mask)
    return A
