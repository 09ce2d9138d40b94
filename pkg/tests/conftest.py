import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from bethecert.exactlinalg import GaussQ, Matrix

settings.register_profile(
    "default",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

FROZEN = json.loads((Path(__file__).parent / "oracles" / "frozen.json").read_text())


@pytest.fixture(scope="session")
def frozen():
    return FROZEN


small_fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
gaussian = st.builds(GaussQ, small_fractions, small_fractions)
real_gaussian = st.builds(GaussQ, small_fractions)


def matrices(n: int, m: int | None = None, elements=gaussian):
    m = n if m is None else m
    return st.lists(st.lists(elements, min_size=m, max_size=m), min_size=n, max_size=n).map(Matrix)


def weights(rank: int, top: int = 3):
    return st.lists(st.integers(0, top), min_size=rank, max_size=rank).map(lambda xs: tuple(sorted(xs, reverse=True)))


# acceptance summary ---------------------------------------------------------

ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def record_criterion(key: str, ok: bool, detail: str) -> None:
    ACCEPTANCE[key] = (ok, detail)
    print(f"{key}: {'PASS' if ok else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.line(f"{key}: {'PASS' if ok else 'FAIL'}  {detail}")
