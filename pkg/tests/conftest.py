import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from charp.tower import Base, Exp, HyperExp, Log, Primitive, Tower  # noqa: E402


def intro_tower(p):
    return Tower.empty(p).extend("X", Base()).extend("E", HyperExp("2*X"))


def rational_tower(p):
    return Tower.empty(p).extend("X", Base())


def random_poly(rng, t, deg=2, terms=3):
    """Sparse random polynomial in the generators of ``t``."""
    gens = t.gens()
    acc = t.elem(rng.randrange(t.p))
    for _ in range(rng.randint(1, terms)):
        m = t.elem(rng.randrange(1, t.p))
        for g in gens:
            k = rng.randint(0, deg)
            if k:
                m = m * g**k
        acc = acc + m
    return acc


def random_elem(rng, t, deg=2, frac=True):
    num = random_poly(rng, t, deg)
    if not frac or rng.random() < 0.5:
        return num
    den = random_poly(rng, t, 1, 2)
    if not den:
        return num
    return num / den


def random_tower(rng, p, depth):
    """Elementary tower: base X then ``depth - 1`` random log/exp/primitive levels."""
    t = rational_tower(p)
    names = ["A", "B", "C"]
    for i in range(depth - 1):
        kind = rng.choice(["log", "exp", "hyperexp", "primitive"])
        while True:
            arg = random_elem(rng, t, 1)
            if not t.is_constant(arg):
                break
        if kind == "log":
            t = t.extend(names[i], Log(arg))
        elif kind == "exp":
            t = t.extend(names[i], Exp(arg))
        elif kind == "hyperexp":
            t = t.extend(names[i], HyperExp(arg))
        else:
            t = t.extend(names[i], Primitive(arg))
    return t


@pytest.fixture
def rng():
    return random.Random(12345)


# -- acceptance reporting -----------------------------------------------------

ACCEPTANCE_RESULTS = {}


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        title = dict(report.user_properties).get("title", "")
        prev = ACCEPTANCE_RESULTS.get(crit, ("passed", title))[0]
        # a parametrized criterion passes only if every instance does
        outcome = report.outcome if prev == "passed" else prev
        ACCEPTANCE_RESULTS[crit] = (outcome, title)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE_RESULTS):
        outcome, title = ACCEPTANCE_RESULTS[crit]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {crit:2d} {verdict}: {title}")


@pytest.fixture
def criterion(record_property):
    """Tag an acceptance test: ``criterion(n, title)``."""

    def tag(n, title):
        record_property("criterion", n)
        record_property("title", title)

    return tag
