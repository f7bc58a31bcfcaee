import random
import sys

import pytest

from forge.graded import TruncationContext, rational
from forge.linfty.structures import canonical_words
from forge.polycalc import Poly


def sgn(n):
    return -1 if n % 2 else 1


def var(d, i):
    return Poly.var(d, i)


def random_table(rng, src, tgt, n, shift, density=0.6):
    """Random level-respecting table of arity n and degree shift."""
    entries = {}
    for word in canonical_words(src, n):
        deg = sum(src.degrees[i] for i in word) + shift
        level = sum(src.levels[j] for j in word)
        outs = [i for i in range(len(tgt))
                if tgt.degrees[i] == deg and tgt.levels[i] >= level]
        vec = {i: rational(rng.randint(-3, 3)) for i in outs if rng.random() < density}
        vec = {i: c for i, c in vec.items() if c}
        if vec:
            entries[word] = vec
    return entries


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def chart2():
    return TruncationContext(d=2, N_y=30)


@pytest.fixture
def chart3():
    return TruncationContext(d=3, N_y=30)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
