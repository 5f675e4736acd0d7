import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from edimlab.graph_core import all_pairs_distances, generate_er  # noqa: E402


def connected_er(n, p, count, start_seed=0):
    """First ``count`` connected G(n, p) samples over seeds start_seed, start_seed+1, ..."""
    out = []
    seed = start_seed
    while len(out) < count:
        g = generate_er(n, p, seed)
        if all_pairs_distances(g).connected:
            out.append((seed, g))
        seed += 1
    return out


@pytest.fixture
def tmp_edge_file(tmp_path):
    def write(text, name="g.txt"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


ACCEPTANCE_LINES = {}


@pytest.fixture
def acceptance_report(request):
    """Call with (criterion, passed, detail); the line is printed at the end of the run."""

    def report(criterion, passed, detail):
        label = str(criterion)
        line = f"criterion {label}: {'PASS' if passed else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES[label] = line
        print(line)
        return passed

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES, key=lambda s: (int(s.split()[0]), s)):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
