import random

from hypothesis import settings, strategies as st

from bvtensor.perm import Perm
from bvtensor.samples import random_sequence

settings.register_profile("default", max_examples=25, deadline=None)
settings.load_profile("default")


@st.composite
def perms(draw, n=None):
    n = draw(st.integers(1, 5)) if n is None else n
    return Perm(draw(st.permutations(range(1, n + 1))))


@st.composite
def sequences(draw, cap=3, **kw):
    """Small random sequences, drawn through a seeded generator so shrinking stays cheap."""
    seed = draw(st.integers(0, 10 ** 6))
    return random_sequence(random.Random(seed), cap, **kw)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
