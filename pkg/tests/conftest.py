import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from aindex.ingestion import Publication  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"


def _pubs(author, single_counts, multi_counts, prefix="p"):
    pubs = []
    for i, c in enumerate(single_counts):
        pubs.append(Publication(f"{prefix}s{i}", f"Solo {i}", (author,), c, 2000 + i))
    for i, c in enumerate(multi_counts):
        pubs.append(Publication(f"{prefix}m{i}", f"Joint {i}", (author, f"Coauthor {i}"), c, 2000 + i))
    return pubs


@pytest.fixture
def example2_author1():
    """Corpus realizing (20, 200, 11, 5, 100, 3)."""
    return _pubs("M. Abdel-Aty", [40, 30, 28, 1, 1], [11] * 8 + [2, 2, 2, 2, 2, 1, 1], prefix="e2a1")


@pytest.fixture
def example1_author1():
    """Corpus realizing (20, 300, 11, 0, 0, 0): 11 papers with >= 11 citations."""
    return _pubs("A. One", [], [30, 30, 30, 30, 30, 30, 30, 30, 20, 11, 11] + [1] * 8 + [10], prefix="e1a1")


@pytest.fixture
def example1_author2_nearest():
    """Closest corpus to the Example 1 Author 2 row that can exist: (20, 333, 11, 15, 300, 8)."""
    singles = [100, 60, 40, 30, 25, 20, 12, 11] + [1, 1, 0, 0, 0, 0, 0]
    return _pubs("A. Two", singles, [11, 11, 11, 0, 0], prefix="e1a2")


@pytest.fixture
def rng():
    return random.Random(20240601)


def random_corpus(rng, n_max=30, authors=("Ann Lee", "Bo Chen", "Cy Diaz", "Di Evans")):
    pubs = []
    for i in range(rng.randint(0, n_max)):
        k = rng.randint(1, len(authors))
        names = tuple(rng.sample(authors, k))
        pubs.append(
            Publication(
                id=f"w{i}",
                title=rng.choice(["A study", "On things, and more", 'Quote "x"', "Ünïcode title", ""]),
                authors=names,
                citations=rng.randint(0, 60),
                year=rng.choice([None, rng.randint(1990, 2024)]),
                venue=rng.choice([None, "J. Phys", "Acta, Math"]),
                indexed=rng.random() < 0.8,
            )
        )
    return pubs


# ---- acceptance summary: one PASS/FAIL line per criterion

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the terminal summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    label = marker.args[0]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[label] = report.outcome == "passed"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria, key=lambda s: int(s.split()[0][2:])):
        terminalreporter.write_line(f"{'PASS' if _criteria[label] else 'FAIL'}  {label}")
