import time
from pathlib import Path

import pytest

from poset_forge.fields import FiniteField, Rationals
from poset_forge.poset import parse_poset

DATA = Path(__file__).resolve().parent.parent / "data"


def poset(text):
    return parse_poset(text)


def crown(n):
    """The 2n-element zigzag crown: a_i < b_j when |i - j| <= 1."""
    lows = [f"a{i}" for i in range(n)]
    highs = [f"b{i}" for i in range(n)]
    covers = " ".join(f"{lows[i]}<{highs[j]}" for i in range(n) for j in range(n) if abs(i - j) <= 1)
    return parse_poset(f"elements: {' '.join(lows + highs)}\ncovers: {covers}")


CHAIN2 = "elements: a b\ncovers: a<b"
CHAIN3 = "elements: a b c\ncovers: a<b<c"
A3 = "elements: b a c\ncovers: a<b a<c"
CROWN4 = "elements: a b c d\ncovers: a<c a<d b<c b<d"
SPHERE = "elements: 1 2 3 4 5 6\ncovers: 1<3 1<4 2<3 2<4 3<5 3<6 4<5 4<6"
FAN5 = "elements: x y z t s\ncovers: x<y x<z y<t z<t y<s z<s"


@pytest.fixture
def chain2():
    return poset(CHAIN2)


@pytest.fixture
def chain3():
    return poset(CHAIN3)


@pytest.fixture
def a3():
    return poset(A3)


@pytest.fixture
def crown4():
    return poset(CROWN4)


@pytest.fixture
def sphere():
    return poset(SPHERE)


@pytest.fixture
def fan5():
    return poset(FAN5)


@pytest.fixture
def F2():
    return FiniteField(2)


@pytest.fixture
def F3():
    return FiniteField(3)


@pytest.fixture
def F5():
    return FiniteField(5)


@pytest.fixture
def QQ():
    return Rationals()


@pytest.fixture
def data_dir():
    return DATA


# ---- acceptance criteria reporting ---------------------------------------


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title, limit): acceptance criterion with a runtime limit in seconds")
    config.acceptance_results = {}


class Budget:
    def __init__(self, limit):
        self.limit = limit
        self.start = time.perf_counter()
        self.elapsed = None

    def check(self):
        self.elapsed = time.perf_counter() - self.start
        assert self.elapsed < self.limit, f"took {self.elapsed:.2f} s, limit {self.limit} s"


@pytest.fixture
def budget(request):
    """Wall-clock budget for the criterion marked on the requesting test."""
    b = Budget(request.node.get_closest_marker("criterion").args[2])
    request.node.budget = b
    return b


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or not (report.when == "call" or report.failed):
        return
    number, title, limit = mark.args
    b = getattr(item, "budget", None)
    elapsed = b.elapsed if b is not None and b.elapsed is not None else report.duration
    item.config.acceptance_results[number] = (title, report.passed, elapsed, limit)


def pytest_terminal_summary(terminalreporter, config):
    results = getattr(config, "acceptance_results", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, passed, elapsed, limit = results[number]
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2} {verdict}  {title} ({elapsed:.2f} s, limit {limit} s)")
