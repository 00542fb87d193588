"""Markov bases of degree-two moves for two-way tables with a fixed subtable sum."""
from .basis import BasicMove, MoveSet, generate_basic_moves, s_balance
from .connector import ConnectorConfig, PathStep, connect, reduction_sequence
from .errors import *  # noqa: F401,F403
from .fiber import (Fiber, FiberGraph, components, construct_witness, enumerate_fiber,
                    verify_bounded)
from .mcmc import TestReport, WalkConfig, chi_square, exact_test, walk_step
from .patterns import (BLOCK_DIAGONAL, NEITHER, TRIANGULAR, Classification, PatternWitness,
                       basic_moves_suffice, classify, contains_forbidden_pattern)
from .tables import (Marginals, MoveArray, Shape, SubtableMask, Table, apply_move,
                     configuration_matrix, is_move, l1_distance, marginals)

__version__ = "0.1.0"
