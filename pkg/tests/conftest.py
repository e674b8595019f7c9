from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from vilenkin.group import DUAL, PRIMAL, DigitSequence

DATA = Path(__file__).parent / "data"

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

PRIMES = [2, 3, 5, 7]


@st.composite
def sequences(draw, p=None, side=PRIMAL, lo_range=(-6, 6), max_len=8):
    p = draw(st.sampled_from(PRIMES)) if p is None else p
    lo = draw(st.integers(*lo_range))
    digits = draw(st.lists(st.integers(0, p - 1), max_size=max_len))
    return DigitSequence.make(p, lo, digits, side)


@st.composite
def same_group(draw, k=2, side=PRIMAL):
    p = draw(st.sampled_from(PRIMES))
    return [draw(sequences(p=p, side=side)) for _ in range(k)]


@pytest.fixture
def data_dir():
    return DATA


# -- acceptance summary ----------------------------------------------------------
# Each acceptance test records a "detail" property; the summary prints one line per criterion.

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        detail = dict(report.user_properties).get("detail", "")
        _ACCEPTANCE[report.nodeid.rsplit("::", 1)[1]] = (report.outcome, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        outcome, detail = _ACCEPTANCE[name]
        tag = "PASS" if outcome == "passed" else "FAIL"
        num = name.split("_")[2]
        terminalreporter.write_line(f"{tag}  criterion {int(num):2d}  {detail}")
