"""Explicit basic-move paths between two tables of the same fiber.

A round of :func:`reduction_sequence` moves ``X`` and/or ``Y`` by basic
moves, keeping both nonnegative after every step, until ``||X - Y||_1``
strictly drops. Intermediate steps must leave the norm unchanged; the first
step that lowers it ends the round. The search is breadth-first, so the
shortest sequence is returned, with ties broken by the smallest
``(side, move index, sign)`` sequence, Y side ordered first. :func:`connect` repeats rounds until
the two sides meet and stitches the steps into one path from ``X`` to ``Y``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .basis import BasicMove, MoveSet, generate_basic_moves
from .errors import (DifferentFiber, Disconnected, InvalidInput, NoReductionFound,
                     NotConnectedAtDepth, SameTable)
from .fiber import components, enumerate_fiber
from .tables import SubtableMask, Table, apply_move, marginals

X_SIDE = "X"
Y_SIDE = "Y"


@dataclass(frozen=True)
class PathStep:
    """Add ``sign * move`` to the table on ``side``."""

    side: str
    move: BasicMove
    sign: int

    def to_json(self) -> dict:
        return {"side": self.side, "sign": self.sign, **self.move.to_json()}


@dataclass(frozen=True)
class ConnectorConfig:
    max_sequence_depth: int = 6
    bfs_fallback_limit: int = 10_000

    def __post_init__(self):
        if self.max_sequence_depth < 1 or self.bfs_fallback_limit < 1:
            raise InvalidInput("connector limits must be positive")


def _flat_moves(moves: MoveSet, ncols: int):
    out = []
    for m in moves:
        plus = tuple(i * ncols + j for i, j in m.plus_cells)
        minus = tuple(i * ncols + j for i, j in m.minus_cells)
        out.append((plus, minus))
    return out


def _shift(t, plus, minus, sign):
    """``t + sign * move`` on a flat tuple, or ``None`` if a cell goes negative."""
    up, down = (plus, minus) if sign > 0 else (minus, plus)
    if t[down[0]] == 0 or t[down[1]] == 0:
        return None
    lst = list(t)
    lst[up[0]] += 1
    lst[up[1]] += 1
    lst[down[0]] -= 1
    lst[down[1]] -= 1
    return tuple(lst)


def _norm_delta(x, y, plus, minus, sign):
    # change of ||x - y||_1 when sign * move is added to x - y
    d = 0
    for cells, s in ((plus, sign), (minus, -sign)):
        for k in cells:
            z = x[k] - y[k]
            d += abs(z + s) - abs(z)
    return d


def _check_pair(x: Table, y: Table, mask: SubtableMask):
    if x.shape != mask.shape or y.shape != mask.shape:
        raise InvalidInput("tables and mask must share a shape")
    if marginals(x, mask) != marginals(y, mask):
        raise DifferentFiber("tables have different row, column or subtable sums")


def _search(x: Table, y: Table, moves: MoveSet, depth: int) -> Optional[list[PathStep]]:
    ncols = moves.shape.cols
    flat = _flat_moves(moves, ncols)
    start = (x.key(), y.key())
    # candidate order: side Y before X, then move index, then step sign -1 before +1.
    # Y first: when y > x at both cells a step lowers, that step is always
    # feasible on Y, which is the guaranteed one-step reduction.
    candidates = [(side, k, t) for side in (1, 0) for k in range(len(flat)) for t in (-1, 1)]
    parent = {start: None}
    frontier = deque([start])
    for _ in range(depth):
        nxt = deque()
        while frontier:
            state = frontier.popleft()
            cx, cy = state
            for side, k, t in candidates:
                plus, minus = flat[k]
                # adding t*B to X, or t*B to Y, changes X - Y by +t*B or -t*B
                delta = _norm_delta(cx, cy, plus, minus, t if side == 0 else -t)
                if delta > 0:
                    continue
                if side == 0:
                    moved = _shift(cx, plus, minus, t)
                    new = None if moved is None else (moved, cy)
                else:
                    moved = _shift(cy, plus, minus, t)
                    new = None if moved is None else (cx, moved)
                if new is None or new in parent:
                    continue
                parent[new] = (state, side, k, t)
                if delta < 0:
                    return _unwind(parent, new, moves)
                nxt.append(new)
        frontier = nxt
    return None


def _unwind(parent, state, moves):
    steps = []
    while parent[state] is not None:
        prev, side, k, t = parent[state]
        steps.append(PathStep(X_SIDE if side == 0 else Y_SIDE, moves[k], t))
        state = prev
    return steps[::-1]


def reduction_sequence(x: Table, y: Table, mask: SubtableMask,
                       config: ConnectorConfig = ConnectorConfig(),
                       moves: Optional[MoveSet] = None) -> list[PathStep]:
    """Steps on ``x`` and ``y`` after which ``||x' - y'||_1 < ||x - y||_1``.

    Each step stays feasible on its own side. Raises
    :class:`NoReductionFound` when no such sequence of at most
    ``config.max_sequence_depth`` steps exists.
    """
    _check_pair(x, y, mask)
    if x == y:
        raise SameTable("x and y are the same table")
    if moves is None:
        moves = generate_basic_moves(mask)
    steps = _search(x, y, moves, config.max_sequence_depth)
    if steps is None:
        raise NoReductionFound(
            f"no norm-reducing sequence of length <= {config.max_sequence_depth}")
    return steps


def apply_steps(x: Table, y: Table, steps):
    """Replay reduction steps on their sides; raises if any prefix goes negative."""
    shape = x.shape
    for st in steps:
        arr = st.move.to_array(shape)
        if st.side == X_SIDE:
            x = apply_move(x, arr, st.sign)
        else:
            y = apply_move(y, arr, st.sign)
    return x, y


def apply_path(x: Table, path) -> Table:
    for st in path:
        x = apply_move(x, st.move.to_array(x.shape), st.sign)
    return x


def _bfs_path(x: Table, y: Table, mask: SubtableMask, moves: MoveSet,
              limit: int) -> Optional[list[PathStep]]:
    fiber = enumerate_fiber(marginals(x, mask), mask)
    if len(fiber) > limit:
        return None
    flat = _flat_moves(moves, mask.shape.cols)
    start, goal = x.key(), y.key()
    parent = {start: None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if cur == goal:
            steps = []
            while parent[cur] is not None:
                cur, k, s = parent[cur]
                steps.append(PathStep(X_SIDE, moves[k], s))
            return steps[::-1]
        for k, (plus, minus) in enumerate(flat):
            for s in (-1, 1):
                nb = _shift(cur, plus, minus, s)
                if nb is not None and nb not in parent:
                    parent[nb] = (cur, k, s)
                    queue.append(nb)
    graph = components(fiber, moves)
    raise Disconnected(
        f"x and y lie in different components of a fiber with {len(fiber)} elements",
        len(fiber), graph.component_sizes())


def connect(x: Table, y: Table, mask: SubtableMask,
            config: ConnectorConfig = ConnectorConfig()) -> list[PathStep]:
    """A feasible basic-move path from ``x`` to ``y`` (all steps on the X side).

    Falls back to breadth-first search over the whole fiber when a round
    fails and the fiber has at most ``config.bfs_fallback_limit`` elements;
    that search either finds a path or raises :class:`Disconnected`.
    Otherwise raises :class:`NotConnectedAtDepth`.
    """
    _check_pair(x, y, mask)
    if x == y:
        return []
    moves = generate_basic_moves(mask)
    forward, backward = [], []
    cx, cy = x, y
    while cx != cy:
        try:
            steps = reduction_sequence(cx, cy, mask, config, moves)
        except NoReductionFound as exc:
            path = _bfs_path(x, y, mask, moves, config.bfs_fallback_limit)
            if path is None:
                raise NotConnectedAtDepth(str(exc)) from exc
            return path
        cx, cy = apply_steps(cx, cy, steps)
        forward += [s for s in steps if s.side == X_SIDE]
        backward += [s for s in steps if s.side == Y_SIDE]
    # undo the Y-side steps in reverse order to walk from the meeting point to y
    tail = [PathStep(X_SIDE, s.move, -s.sign) for s in reversed(backward)]
    return forward + tail
