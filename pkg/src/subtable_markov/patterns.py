"""Deciding whether degree-two basic moves suffice for a subtable mask.

Two independent routes:

* :func:`contains_forbidden_pattern` scans every 2x3 and 3x2 window of ``S``
  and of its complement for the forbidden shape: exactly two member cells,
  in different rows and different columns, with the other four cells of the
  window outside the host set.
* :func:`classify` inspects each row's set of member columns and
  recognises triangular sets (slices totally ordered by inclusion) and 2x2
  block diagonal sets (two complementary slice classes).

The two agree on every mask; the test-suite checks this exhaustively on
small shapes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .errors import MaskDegenerate
from .tables import SubtableMask

BLOCK_DIAGONAL = "BlockDiagonal"
TRIANGULAR = "Triangular"
NEITHER = "Neither"


@dataclass(frozen=True)
class PatternWitness:
    """A window of ``host`` (``"S"`` or ``"Sc"``) holding the forbidden shape.

    For ``orientation == "2x3"``: ``rows = (r0, r1)``, ``cols = (c0, c1, c_empty)``
    and the host cells are ``(r0, c0)`` and ``(r1, c1)``; column ``c_empty``
    has no host cell inside the window. ``"3x2"`` is the transpose:
    ``rows = (r0, r1, r_empty)``, ``cols = (c0, c1)``.
    """

    orientation: str
    host: str
    rows: tuple[int, ...]
    cols: tuple[int, ...]

    @property
    def cells(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.rows[0], self.cols[0]), (self.rows[1], self.cols[1]))

    def validate(self, mask: SubtableMask) -> bool:
        R, C = mask.shape.rows, mask.shape.cols
        want = (2, 3) if self.orientation == "2x3" else (3, 2)
        if (len(self.rows), len(self.cols)) != want or self.host not in ("S", "Sc"):
            return False
        if len(set(self.rows)) != len(self.rows) or len(set(self.cols)) != len(self.cols):
            return False
        if not all(0 <= i < R for i in self.rows) or not all(0 <= j < C for j in self.cols):
            return False
        inside = {(i, j) for i in self.rows for j in self.cols
                  if ((i, j) in mask) == (self.host == "S")}
        return inside == set(self.cells)

    def to_json(self) -> dict:
        return {
            "orientation": self.orientation,
            "host": self.host,
            "rows": [i + 1 for i in self.rows],
            "cols": [j + 1 for j in self.cols],
            "cells": [[i + 1, j + 1] for i, j in self.cells],
        }


@dataclass(frozen=True)
class Classification:
    verdict: str
    row_classes: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None
    col_classes: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None
    row_order: Optional[tuple[int, ...]] = None
    chain: Optional[tuple[tuple[int, ...], ...]] = None
    witness: Optional[PatternWitness] = field(default=None)

    @property
    def basic_moves_suffice(self) -> bool:
        return self.verdict != NEITHER

    def to_json(self) -> dict:
        out: dict = {"verdict": self.verdict, "basic_moves_suffice": self.basic_moves_suffice}
        if self.verdict == BLOCK_DIAGONAL:
            out["row_classes"] = [[i + 1 for i in c] for c in self.row_classes]
            out["col_classes"] = [[j + 1 for j in c] for c in self.col_classes]
        elif self.verdict == TRIANGULAR:
            out["row_order"] = [i + 1 for i in self.row_order]
            out["chain"] = [[j + 1 for j in s] for s in self.chain]
        out["witness"] = self.witness.to_json() if self.witness else None
        return out


def require_proper(mask: SubtableMask):
    if mask.is_empty() or mask.is_full():
        raise MaskDegenerate("subtable must be a non-empty proper subset of the cells")


def _scan_2x3(bits, ncols):
    # bits: per-row bitsets of the host set
    for r0, r1 in combinations(range(len(bits)), 2):
        b0, b1 = bits[r0], bits[r1]
        for win in combinations(range(ncols), 3):
            in0 = [j for j in win if b0 >> j & 1]
            in1 = [j for j in win if b1 >> j & 1]
            if len(in0) == 1 and len(in1) == 1 and in0[0] != in1[0]:
                empty = next(j for j in win if j not in (in0[0], in1[0]))
                return (r0, r1), (in0[0], in1[0], empty)
    return None


def contains_forbidden_pattern(mask: SubtableMask) -> Optional[PatternWitness]:
    """Return a witness window for the forbidden pattern, or ``None``."""
    require_proper(mask)
    comp = mask.complement()
    for host, m in (("S", mask), ("Sc", comp)):
        bits = m.row_bits
        hit = _scan_2x3(bits, mask.shape.cols)
        if hit:
            return PatternWitness("2x3", host, hit[0], hit[1])
        tbits = m.transpose().row_bits
        hit = _scan_2x3(tbits, mask.shape.rows)
        if hit:
            cols, rows = hit
            return PatternWitness("3x2", host, rows, cols)
    return None


def _members(bits: int, width: int) -> tuple[int, ...]:
    return tuple(j for j in range(width) if bits >> j & 1)


def crossing_pattern(mask: SubtableMask) -> Optional[tuple[int, int, int, int]]:
    """Find ``(i, i', j, j')`` with ``j in J(i) - J(i')`` and ``j' in J(i') - J(i)``.

    Such a crossing exists exactly when the mask is not triangular.
    """
    bits = mask.row_bits
    for i, k in combinations(range(len(bits)), 2):
        a, b = bits[i] & ~bits[k], bits[k] & ~bits[i]
        if a and b:
            return i, k, (a & -a).bit_length() - 1, (b & -b).bit_length() - 1
    return None


def classify(mask: SubtableMask) -> Classification:
    require_proper(mask)
    R, C = mask.shape.rows, mask.shape.cols
    full = (1 << C) - 1
    bits = mask.row_bits
    distinct = sorted(set(bits), key=lambda b: (-b.bit_count(), b))

    if all(big & small == small for big, small in zip(distinct, distinct[1:])):
        order = tuple(sorted(range(R), key=lambda i: distinct.index(bits[i])))
        return Classification(TRIANGULAR, row_order=order,
                              chain=tuple(_members(b, C) for b in distinct))

    if len(distinct) == 2:
        a, b = sorted(distinct, key=lambda s: _members(s, C))
        if a and b and a & b == 0 and a | b == full:
            r1 = tuple(i for i in range(R) if bits[i] == a)
            r2 = tuple(i for i in range(R) if bits[i] == b)
            return Classification(BLOCK_DIAGONAL, row_classes=(r1, r2),
                                  col_classes=(_members(a, C), _members(b, C)))

    witness = contains_forbidden_pattern(mask)
    if witness is None:
        raise AssertionError(f"{mask!r} is neither triangular nor block diagonal "
                             "but has no forbidden window")
    return Classification(NEITHER, witness=witness)


def basic_moves_suffice(mask: SubtableMask) -> bool:
    """Whether the S-preserving basic moves form a Markov basis for ``mask``.

    When true they are also the unique minimal Markov basis.
    """
    return classify(mask).basic_moves_suffice
