import sys
from fractions import Fraction
from itertools import product

import pytest

from latwalk.walk import validate_step_distribution

W3 = [(-1, 1 / 3), (0, 1 / 3), (1, 1 / 3)]
LAZY = [(-1, 0.25), (0, 0.5), (1, 0.25)]
FIVE = [(-2, 0.125), (-1, 0.25), (0, 0.25), (1, 0.25), (2, 0.125)]
SKEW = [(-1, 0.5), (0, 0.25), (2, 0.25)]


@pytest.fixture(scope="session")
def w3():
    return validate_step_distribution(W3)


@pytest.fixture(scope="session")
def lazy():
    return validate_step_distribution(LAZY)


@pytest.fixture(scope="session")
def five():
    return validate_step_distribution(FIVE)


@pytest.fixture(scope="session")
def skew():
    return validate_step_distribution(SKEW)


def enumerate_paths(step_law, n):
    """Yield (path positions S_1..S_n, exact probability) for every step sequence."""
    law = [(s, Fraction(p).limit_denominator(10**6)) for s, p in step_law if p > 0]
    for combo in product(law, repeat=n):
        prob = Fraction(1)
        pos, path = 0, []
        for s, p in combo:
            prob *= p
            pos += s
            path.append(pos)
        yield path, prob


def enumerated_joint(step_law, n, a):
    """Exact {(S_n, Lambda^a_n): probability} by brute force."""
    out = {}
    for path, prob in enumerate_paths(step_law, n):
        key = (path[-1], sum(1 for s in path if s == a))
        out[key] = out.get(key, 0) + prob
    return out


def enumerated_first_passage(step_law, n, a):
    """Exact P[tau_a = n]."""
    total = Fraction(0)
    for path, prob in enumerate_paths(step_law, n):
        if path[-1] == a and all(s != a for s in path[:-1]):
            total += prob
    return total


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
