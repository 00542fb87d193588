"""Fibers, fiber graphs and bounded Markov-basis verification."""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .basis import BasicMove, generate_basic_moves
from .errors import InconsistentMarginals, ShapeMismatch, WorkBoundExceeded
from .patterns import require_proper, classify
from .tables import Marginals, MoveArray, Shape, SubtableMask, Table, marginals

MoveLike = Union[BasicMove, MoveArray]

DEFAULT_MAX_TABLES = 2_000_000


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))
        self.count = n

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)
            self.count -= 1

    def labels(self):
        """Component label per element, numbered by first appearance."""
        seen = {}
        return [seen.setdefault(self.find(x), len(seen)) for x in range(len(self.parent))]


@dataclass(frozen=True)
class Fiber:
    marginals: Marginals
    mask: SubtableMask
    elements: tuple[Table, ...]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def index(self) -> dict[Table, int]:
        return {t: k for k, t in enumerate(self.elements)}

    def to_json(self) -> dict:
        return {"marginals": self.marginals.to_json(), "size": len(self.elements),
                "elements": [t.tolist() for t in self.elements]}


@dataclass(frozen=True)
class FiberGraph:
    fiber: Fiber
    adjacency: tuple[tuple[int, int], ...]
    labels: tuple[int, ...]

    @property
    def n_components(self) -> int:
        return len(set(self.labels))

    def component_sizes(self) -> list[int]:
        sizes = [0] * self.n_components
        for lab in self.labels:
            sizes[lab] += 1
        return sizes

    def neighbours(self) -> list[list[int]]:
        out = [[] for _ in self.labels]
        for u, v in self.adjacency:
            out[u].append(v)
            out[v].append(u)
        return out

    def to_json(self) -> dict:
        return {"components": self.n_components, "component_sizes": self.component_sizes(),
                "labels": list(self.labels)}


def _as_arrays(moves: Iterable[MoveLike], shape: Shape) -> list[np.ndarray]:
    out = []
    for m in moves:
        a = m.to_array(shape) if isinstance(m, BasicMove) else m
        if a.shape != shape:
            raise ShapeMismatch(f"move of shape {a.shape} used on a {shape} fiber")
        out.append(a.entries)
    return out


def enumerate_fiber(margins: Marginals, mask: Optional[SubtableMask] = None) -> Fiber:
    """All nonnegative tables with the given row, column and subtable sums.

    Cells are filled in row-major order; residual row and column capacities
    and a two-sided bound on the remaining achievable subtable sum prune the
    search. Elements come out in lexicographic (row-major) order. ``mask=None``
    means no subtable constraint.
    """
    R, C = len(margins.row_sums), len(margins.col_sums)
    if mask is None:
        mask = SubtableMask(Shape(R, C))
    if mask.shape != Shape(R, C):
        raise ShapeMismatch(f"marginals are {R}x{C} but mask is {mask.shape}")
    if not margins.is_consistent():
        raise InconsistentMarginals(f"inconsistent marginals {margins}")
    if mask.is_empty() and margins.subtable_sum != 0:
        return Fiber(margins, mask, ())

    inS = [[(i, j) in mask for j in range(C)] for i in range(R)]
    rres = list(margins.row_sums)
    cres = list(margins.col_sums)
    cur = [[0] * C for _ in range(R)]
    out: list[Table] = []
    s_need = margins.subtable_sum
    remaining = margins.total

    def reachable(i, j):
        # bounds on S-mass and Sc-mass still placeable from cell (i, j) on
        s_max = sc_max = 0
        for r in range(i, R):
            j0 = j if r == i else 0
            cs = sum(cres[c] for c in range(j0, C) if inS[r][c])
            cc = sum(cres[c] for c in range(j0, C) if not inS[r][c])
            s_max += min(rres[r], cs)
            sc_max += min(rres[r], cc)
        return s_max, sc_max

    def rec(k, s_left, left):
        if k == R * C:
            if s_left == 0:
                out.append(Table(cur))
            return
        i, j = divmod(k, C)
        s_max, sc_max = reachable(i, j)
        if s_left > s_max or left - s_left > sc_max or s_left < 0:
            return
        hi = min(rres[i], cres[j])
        if j == C - 1:
            lo = rres[i]
            if lo > hi:
                return
        elif i == R - 1:
            lo = cres[j]
            if lo > hi:
                return
        else:
            lo = 0
        s = inS[i][j]
        for v in range(lo, hi + 1):
            cur[i][j] = v
            rres[i] -= v
            cres[j] -= v
            rec(k + 1, s_left - v if s else s_left, left - v)
            rres[i] += v
            cres[j] += v
        cur[i][j] = 0

    rec(0, s_need, remaining)
    return Fiber(margins, mask, tuple(out))


def components(fiber: Fiber, moves: Iterable[MoveLike]) -> FiberGraph:
    """Connected components of the fiber under single ``+-move`` steps."""
    shape = fiber.mask.shape
    arrays = _as_arrays(moves, shape)
    index = fiber.index()
    uf = UnionFind(len(fiber.elements))
    edges = set()
    for u, t in enumerate(fiber.elements):
        a = t.entries
        for m in arrays:
            for nb in (a + m, a - m):
                if (nb < 0).any():
                    continue
                v = index.get(Table(nb))
                if v is not None and v != u:
                    edges.add((min(u, v), max(u, v)))
                    uf.union(u, v)
    return FiberGraph(fiber, tuple(sorted(edges)), tuple(uf.labels()))


def witness_marginals(mask: SubtableMask):
    """Marginals of a two-element fiber that basic moves cannot connect.

    Returns ``(witness, marginals)`` or ``None`` when basic moves suffice.
    """
    require_proper(mask)
    verdict = classify(mask)
    if verdict.basic_moves_suffice:
        return None
    w = verdict.witness
    R, C = mask.shape.rows, mask.shape.cols
    rows, cols = [0] * R, [0] * C
    if w.orientation == "2x3":
        r0, r1 = w.rows
        c0, c1, ce = w.cols
        rows[r0] = rows[r1] = 2
        cols[c0] = cols[c1] = 1
        cols[ce] = 2
    else:
        r0, r1, re = w.rows
        c0, c1 = w.cols
        cols[c0] = cols[c1] = 2
        rows[r0] = rows[r1] = 1
        rows[re] = 2
    # the host set carries exactly one unit; total is 4
    s_sum = 1 if w.host == "S" else 3
    return w, Marginals(rows, cols, s_sum)


def construct_witness(mask: SubtableMask) -> Optional[tuple[Marginals, Fiber]]:
    found = witness_marginals(mask)
    if found is None:
        return None
    _, m = found
    return m, enumerate_fiber(m, mask)


def enumerate_tables(shape: Shape, max_total: int) -> np.ndarray:
    """Every table with grand total <= ``max_total``, as rows of a (N, R*C) array."""
    n = shape.size
    out = np.zeros((1, 0), dtype=np.int64)
    for _ in range(n):
        sums = out.sum(axis=1)
        parts = []
        for v in range(max_total + 1):
            keep = out[sums + v <= max_total]
            if not len(keep):
                break
            parts.append(np.hstack([keep, np.full((len(keep), 1), v, dtype=np.int64)]))
        out = np.vstack(parts)
    return out


def count_tables(shape: Shape, max_total: int) -> int:
    return comb(max_total + shape.size, shape.size)


@dataclass(frozen=True)
class DisconnectedFiber:
    marginals: Marginals
    size: int
    component_sizes: tuple[int, ...]

    def to_json(self) -> dict:
        return {"marginals": self.marginals.to_json(), "size": self.size,
                "component_sizes": list(self.component_sizes)}


@dataclass(frozen=True)
class VerifyReport:
    max_total: int
    fibers_checked: int
    tables_checked: int
    disconnected: tuple[DisconnectedFiber, ...]

    @property
    def ok(self) -> bool:
        return not self.disconnected

    def to_json(self) -> dict:
        return {"max_total": self.max_total, "fibers_checked": self.fibers_checked,
                "tables_checked": self.tables_checked, "ok": self.ok,
                "disconnected": [d.to_json() for d in self.disconnected]}


def _encode(rows: np.ndarray, base: int) -> Optional[np.ndarray]:
    width = rows.shape[1]
    if width * np.log2(base) >= 62:
        return None
    weights = base ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return rows @ weights


def verify_bounded(mask: SubtableMask, moves: Optional[Sequence[MoveLike]] = None,
                   max_total: int = 4, max_tables: int = DEFAULT_MAX_TABLES) -> VerifyReport:
    """Check that ``moves`` connect every fiber with grand total <= ``max_total``.

    Every table up to the bound is generated once and grouped by its
    marginals, so each non-empty fiber is visited exactly once; empty fibers
    are trivially connected. ``moves`` defaults to the S-preserving basic moves.
    """
    shape = mask.shape
    if moves is None:
        moves = generate_basic_moves(mask)
    n_tables = count_tables(shape, max_total)
    if n_tables > max_tables:
        raise WorkBoundExceeded(
            f"{n_tables} tables of shape {shape} with total <= {max_total} exceeds {max_tables}")
    arrays = [m.ravel() for m in _as_arrays(moves, shape)]
    tables = enumerate_tables(shape, max_total)
    N = len(tables)
    R, C = shape.rows, shape.cols

    codes = _encode(tables, max_total + 1)
    lookup = None if codes is not None else {t.tobytes(): k for k, t in enumerate(tables)}
    if codes is not None:
        order = np.argsort(codes)
        sorted_codes = codes[order]

    src, dst = [], []
    for m in arrays:
        for sign in (1, -1):
            nb = tables + sign * m
            ok = np.flatnonzero((nb >= 0).all(axis=1))
            if codes is not None:
                nc = _encode(nb[ok], max_total + 1)
                pos = np.searchsorted(sorted_codes, nc)
                pos = np.minimum(pos, N - 1)
                hit = sorted_codes[pos] == nc
                src.append(ok[hit])
                dst.append(order[pos[hit]])
            else:
                for k in ok:
                    v = lookup.get(nb[k].tobytes())
                    if v is not None:
                        src.append([k])
                        dst.append([v])
    if src:
        s = np.concatenate([np.asarray(x, dtype=np.int64) for x in src])
        d = np.concatenate([np.asarray(x, dtype=np.int64) for x in dst])
    else:
        s = d = np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(len(s), dtype=np.int8), (s, d)), shape=(N, N))
    _, labels = connected_components(graph, directed=False)

    grid = tables.reshape(N, R, C)
    key = np.hstack([grid.sum(axis=2), grid.sum(axis=1),
                     tables[:, mask.array.ravel()].sum(axis=1, keepdims=True)])
    _, fiber_id = np.unique(key, axis=0, return_inverse=True)
    fiber_id = fiber_id.ravel()
    n_fibers = int(fiber_id.max()) + 1 if N else 0

    # a fiber is disconnected iff its members carry more than one label
    lo = np.full(n_fibers, np.iinfo(np.int64).max)
    hi = np.full(n_fibers, -1)
    np.minimum.at(lo, fiber_id, labels)
    np.maximum.at(hi, fiber_id, labels)
    bad = []
    for f in np.flatnonzero(lo != hi):
        members = np.flatnonzero(fiber_id == f)
        k = key[members[0]]
        _, sizes = np.unique(labels[members], return_counts=True)
        bad.append(DisconnectedFiber(Marginals(k[:R], k[R:R + C], k[-1]), len(members),
                                     tuple(sorted(sizes.tolist(), reverse=True))))
    bad.sort(key=lambda d: (d.marginals.total, d.marginals.row_sums,
                            d.marginals.col_sums, d.marginals.subtable_sum))
    return VerifyReport(max_total, n_fibers, N, tuple(bad))


def fiber_of(table: Table, mask: SubtableMask) -> Fiber:
    return enumerate_fiber(marginals(table, mask), mask)
