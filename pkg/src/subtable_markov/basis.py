"""Degree-two basic moves and the subset that preserves the subtable sum."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import IndexOutOfRange, ShapeTooSmall
from .tables import MoveArray, Shape, SubtableMask


@dataclass(frozen=True, order=True)
class BasicMove:
    """``+1`` at ``(i, j)`` and ``(i2, j2)``, ``-1`` at ``(i, j2)`` and ``(i2, j)``.

    Only the positive representative of ``+-B`` is stored; walkers pick the
    sign when they use it.
    """

    i: int
    i2: int
    j: int
    j2: int

    def __post_init__(self):
        if self.i == self.i2 or self.j == self.j2:
            raise ValueError("a basic move needs two distinct rows and two distinct columns")

    @property
    def plus_cells(self):
        return ((self.i, self.j), (self.i2, self.j2))

    @property
    def minus_cells(self):
        return ((self.i, self.j2), (self.i2, self.j))

    def check_in(self, shape: Shape):
        if not (0 <= self.i < shape.rows and 0 <= self.i2 < shape.rows
                and 0 <= self.j < shape.cols and 0 <= self.j2 < shape.cols):
            raise IndexOutOfRange(f"{self} does not fit a {shape} table")

    def to_array(self, shape: Shape, sign: int = 1) -> MoveArray:
        self.check_in(shape)
        a = np.zeros((shape.rows, shape.cols), dtype=np.int64)
        a[self.i, self.j] = a[self.i2, self.j2] = sign
        a[self.i, self.j2] = a[self.i2, self.j] = -sign
        return MoveArray(a)

    def to_json(self) -> dict:
        return {"rows": [self.i + 1, self.i2 + 1], "cols": [self.j + 1, self.j2 + 1]}

    def __str__(self):
        return f"B({self.i + 1},{self.i2 + 1};{self.j + 1},{self.j2 + 1})"


def s_balance(move: BasicMove, mask: SubtableMask) -> int:
    """Net change of ``x(S)`` when ``move`` is added; 0 iff the move preserves ``S``."""
    move.check_in(mask.shape)
    return (sum((c in mask) for c in move.plus_cells)
            - sum((c in mask) for c in move.minus_cells))


class MoveSet(tuple):
    """Canonically ordered, duplicate-free tuple of :class:`BasicMove`."""

    def __new__(cls, shape: Shape, moves=()):
        self = super().__new__(cls, sorted(set(moves)))
        self.shape = shape
        return self

    def arrays(self, sign: int = 1) -> list[MoveArray]:
        return [m.to_array(self.shape, sign) for m in self]

    def to_json(self) -> list[dict]:
        return [m.to_json() for m in self]


def all_basic_moves(shape: Shape):
    """Every basic move of the shape, one per sign pair, ``i < i2``, in lexicographic order."""
    for i, i2 in combinations(range(shape.rows), 2):
        # B(i,i2;j2,j) == -B(i,i2;j,j2), so j < j2 covers both signs
        for j, j2 in combinations(range(shape.cols), 2):
            yield BasicMove(i, i2, j, j2)


def generate_basic_moves(mask: SubtableMask) -> MoveSet:
    shape = mask.shape
    if shape.rows < 2 or shape.cols < 2:
        raise ShapeTooSmall(f"basic moves need at least a 2x2 table, got {shape}")
    return MoveSet(shape, [m for m in all_basic_moves(shape) if s_balance(m, mask) == 0])

