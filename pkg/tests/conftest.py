import itertools

import pytest

from subtable_markov.tables import Shape, SubtableMask

ACCEPTANCE_LINES = []


def mask1(rows, cols, cells):
    """Mask from 1-based cells."""
    return SubtableMask.from_one_based(rows, cols, cells)


def proper_masks(rows, cols):
    shape = Shape(rows, cols)
    n = rows * cols
    for code in range(1, 2 ** n - 1):
        yield SubtableMask(shape, [divmod(k, cols) for k in range(n) if code >> k & 1])


def all_tables(shape, max_entry):
    for flat in itertools.product(range(max_entry + 1), repeat=shape.size):
        yield [list(flat[r * shape.cols:(r + 1) * shape.cols]) for r in range(shape.rows)]


@pytest.fixture
def acceptance_line():
    def record(label, ok, detail=""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}" + (f"  ({detail})" if detail else ""))
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
