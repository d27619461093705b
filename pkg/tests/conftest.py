import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from botlab.corpus import Profile, Profiles  # noqa: E402
from botlab.graph import SocialGraph  # noqa: E402

ACCEPTANCE_LINES = []


def graph_from(arcs, nodes=(), layer="social"):
    g = SocialGraph(sorted({x for a in arcs for x in a[:2]} | set(nodes)))
    for a in arcs:
        if layer == "social":
            g.add_social_arc(a[0], a[1])
        else:
            g.add_message(a[0], a[1], a[2] if len(a) > 2 else 1)
    return g


def profiles_from(table):
    """``{user: (books, groups)}`` -> Profiles."""
    return Profiles({u: Profile(u, frozenset(b), frozenset(gr)) for u, (b, gr) in table.items()})


@pytest.fixture
def acceptance_line():
    def emit(number, name, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {name} ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
