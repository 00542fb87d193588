"""Metropolis-Hastings walk over a fiber and Monte Carlo exact tests.

The target law on a fiber is the hypergeometric one,
``pi(X) proportional to 1 / prod_ij x_ij!``, which is the conditional law of
the table given its row sums, column sums and subtable sum.

Random numbers come from numpy's PCG64 generator seeded with
``WalkConfig.seed``. Every step consumes exactly two doubles from
``Generator.random``: the first picks ``(move, sign)`` as
``floor(u * 2 * len(moves))`` (index ``2k`` is ``+move[k]``, ``2k + 1`` is
``-move[k]``), the second is compared against the acceptance ratio. Any
implementation following this protocol reproduces trajectories exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .basis import MoveSet, generate_basic_moves
from .errors import EmptyMoveSet, EmptyTable, InvalidInput
from .patterns import basic_moves_suffice
from .tables import SubtableMask, Table

Statistic = Callable[[Table], float]


@dataclass(frozen=True)
class WalkConfig:
    steps: int = 10_000
    burn_in: int = 0
    thinning: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.steps < 0 or self.burn_in < 0:
            raise InvalidInput("steps and burn_in must be nonnegative")
        if self.thinning < 1:
            raise InvalidInput("thinning must be at least 1")
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidInput("seed must be a 64-bit unsigned integer")
        if self.burn_in > self.steps:
            raise InvalidInput("burn_in exceeds steps; no samples would be kept")


@dataclass(frozen=True)
class TestReport:
    __test__ = False  # keep pytest from collecting it

    observed_statistic: float
    p_value_estimate: float
    monte_carlo_std_error: float
    samples_used: int
    connectivity_warning: bool
    acceptance_rate: float

    def to_json(self) -> dict:
        return {
            "observed_statistic": self.observed_statistic,
            "p_value_estimate": self.p_value_estimate,
            "monte_carlo_std_error": self.monte_carlo_std_error,
            "samples_used": self.samples_used,
            "connectivity_warning": self.connectivity_warning,
            "acceptance_rate": self.acceptance_rate,
        }


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _flat(moves: MoveSet):
    C = moves.shape.cols
    return [(tuple(i * C + j for i, j in m.plus_cells),
             tuple(i * C + j for i, j in m.minus_cells)) for m in moves]


def _step(state: list, flat, u_pick: float, u_acc: float) -> bool:
    """Advance ``state`` in place; returns whether the proposal was accepted."""
    k = int(u_pick * 2 * len(flat))
    plus, minus = flat[k >> 1]
    up, down = (plus, minus) if k & 1 == 0 else (minus, plus)
    a, b = state[down[0]], state[down[1]]
    if a == 0 or b == 0:
        return False
    # pi(new) / pi(old) = prod x_old! / x_new!
    ratio = a * b / ((state[up[0]] + 1) * (state[up[1]] + 1))
    if ratio < 1.0 and u_acc >= ratio:
        return False
    state[down[0]] -= 1
    state[down[1]] -= 1
    state[up[0]] += 1
    state[up[1]] += 1
    return True


def walk_step(current: Table, moves: MoveSet, rng: np.random.Generator) -> Table:
    """One Metropolis-Hastings step; infeasible or rejected proposals stay put."""
    if not len(moves):
        raise EmptyMoveSet("the walk needs at least one move")
    u = rng.random(2)
    state = list(current.key())
    if not _step(state, _flat(moves), float(u[0]), float(u[1])):
        return current
    return Table(np.array(state, dtype=np.int64).reshape(current.entries.shape))


def run_chain(start: Table, moves: MoveSet, n_steps: int, rng: np.random.Generator,
              block: int = 65_536):
    """Yield the chain states ``s_1 .. s_n`` as flat tuples (``s_0`` is ``start``).

    Draws are taken in blocks but in the same order as repeated
    :func:`walk_step` calls, so both produce identical trajectories.
    """
    if not len(moves):
        raise EmptyMoveSet("the walk needs at least one move")
    flat = _flat(moves)
    state = list(start.key())
    done = 0
    while done < n_steps:
        m = min(block, n_steps - done)
        draws = rng.random((m, 2)).tolist()
        for u_pick, u_acc in draws:
            _step(state, flat, u_pick, u_acc)
            yield tuple(state)
        done += m


def chi_square(table: Table) -> float:
    """Pearson statistic against the independence fit ``x_i+ x_+j / N``."""
    a = table.entries.astype(float)
    n = a.sum()
    if n <= 0:
        raise EmptyTable("chi-square needs a positive grand total")
    e = np.outer(a.sum(axis=1), a.sum(axis=0)) / n
    nz = e > 0
    return float((((a - e) ** 2)[nz] / e[nz]).sum())


def log_hypergeometric_weight(table: Table) -> float:
    """``-sum log x_ij!``, the unnormalised log target density."""
    return -sum(math.lgamma(v + 1) for v in table.key())


def batch_means_se(values, n_batches: Optional[int] = None) -> float:
    """Standard error of the mean of a correlated series by non-overlapping batch means."""
    x = np.asarray(values, dtype=float)
    n = len(x)
    b = n_batches or int(math.isqrt(n))
    if b < 2 or n < 2:
        return 0.0
    size = n // b
    means = x[:b * size].reshape(b, size).mean(axis=1)
    return float(means.std(ddof=1) / math.sqrt(b))


def _connectivity_warning(mask: SubtableMask) -> bool:
    if mask.is_empty() or mask.is_full():
        return False
    return not basic_moves_suffice(mask)


def sample_states(observed: Table, moves: MoveSet, config: WalkConfig):
    """Kept chain states: ``s_t`` for ``t = burn_in, burn_in + thinning, ... <= steps``.

    Returns ``(samples, accepted_steps)``; ``s_0`` is the observed table.
    """
    rng = make_rng(config.seed)
    keep = []
    if config.burn_in == 0:
        keep.append(observed.key())
    prev = observed.key()
    accepted = 0
    for t, s in enumerate(run_chain(observed, moves, config.steps, rng), start=1):
        accepted += s != prev
        prev = s
        if t >= config.burn_in and (t - config.burn_in) % config.thinning == 0:
            keep.append(s)
    return keep, accepted


def exact_test(observed: Table, mask: SubtableMask, config: WalkConfig = WalkConfig(),
               statistic: Statistic = chi_square) -> TestReport:
    """Monte Carlo p-value ``P(T >= T_obs)`` under the hypergeometric law on the fiber.

    The chi-square statistic against independence is only a default; pass
    any ``statistic`` mapping a table to a float.
    """
    if observed.shape != mask.shape:
        raise InvalidInput("observed table and mask shapes differ")
    moves = generate_basic_moves(mask)
    if not len(moves):
        raise EmptyMoveSet("no basic move preserves this subtable sum")
    shape = observed.entries.shape
    t_obs = statistic(observed)
    samples, accepted = sample_states(observed, moves, config)
    cache: dict = {}
    hits = []
    for s in samples:
        v = cache.get(s)
        if v is None:
            v = cache[s] = statistic(Table(np.array(s, dtype=np.int64).reshape(shape)))
        # small tolerance so ties computed in floating point count as >=
        hits.append(v >= t_obs - 1e-9 * max(1.0, abs(t_obs)))
    hits = np.asarray(hits, dtype=float)
    return TestReport(
        observed_statistic=t_obs,
        p_value_estimate=float(hits.mean()),
        monte_carlo_std_error=batch_means_se(hits),
        samples_used=len(samples),
        connectivity_warning=_connectivity_warning(mask),
        acceptance_rate=accepted / config.steps if config.steps else 0.0,
    )
