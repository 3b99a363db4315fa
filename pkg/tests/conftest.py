import json
import random
from importlib import resources

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from homalg.fdhom import HomAlgebra, LinMap, MultTable
from homalg.specfile import parse_spec

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

FIXTURES = resources.files("homalg.fixtures")


def fixture_path(name):
    return str(FIXTURES.joinpath(f"{name}.json"))


def load_fixture(name):
    return parse_spec(json.loads(FIXTURES.joinpath(f"{name}.json").read_text()))


def fixture_names():
    return sorted(p.name[:-5] for p in FIXTURES.iterdir() if p.name.endswith(".json"))


# ------------------------------------------------------------ random tables

SMALL = st.integers(-2, 2)


@st.composite
def dense_tables(draw, dim, density=0.4):
    out = []
    for _ in range(dim):
        plane = []
        for _ in range(dim):
            plane.append([draw(SMALL) if draw(st.floats(0, 1)) < density else 0 for _ in range(dim)])
        out.append(plane)
    return out


@st.composite
def hom_algebras(draw, max_dim=3, bracket=False):
    n = draw(st.integers(1, max_dim))
    mult = MultTable.from_dense(draw(dense_tables(n)))
    alpha = LinMap.from_dense([[draw(SMALL) for _ in range(n)] for _ in range(n)])
    br = None
    if bracket:
        raw = draw(dense_tables(n))
        br = MultTable.from_dense([[[raw[i][j][k] - raw[j][i][k] for k in range(n)] for j in range(n)]
                                   for i in range(n)])
    return HomAlgebra(dim=n, mult=mult, twist=alpha, bracket=br)


def random_corpus(count=200, seed=20240601, max_dim=3):
    """Seeded dim <= 3 Hom-algebras; sparse small-integer tables, half with
    the identity twist so that structured cases are well represented."""
    rng = random.Random(seed)
    out = []
    for idx in range(count):
        n = rng.randint(1, max_dim)
        dens = rng.choice((0.2, 0.35, 0.6))
        dense = [[[rng.randint(-2, 2) if rng.random() < dens else 0 for _ in range(n)] for _ in range(n)]
                 for _ in range(n)]
        if idx % 4 == 0:  # commutative
            dense = [[[dense[min(i, j)][max(i, j)][k] for k in range(n)] for j in range(n)] for i in range(n)]
        if idx % 2:
            alpha = LinMap.identity(n)
        else:
            alpha = LinMap.from_dense([[rng.randint(-1, 2) if rng.random() < 0.5 else 0 for _ in range(n)]
                                       for _ in range(n)])
        out.append(HomAlgebra(dim=n, mult=MultTable.from_dense(dense), twist=alpha))
    return out


@pytest.fixture(scope="session")
def corpus():
    return random_corpus()


# ------------------------------------------------------ acceptance summary

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for mark in getattr(report, "criterion_marks", ()):
        prev = _CRITERIA.get(mark, True)
        _CRITERIA[mark] = prev and report.outcome == "passed"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    rep.criterion_marks = tuple(m.args[0] for m in item.iter_markers("criterion"))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        terminalreporter.write_line(f"AC{n}: {'PASS' if _CRITERIA[n] else 'FAIL'}")
