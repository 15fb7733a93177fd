import sys

import pytest

from klooster.modarith import primes_between


def sampled_primes(limit: int = 5000) -> list[int]:
    """Every prime up to 500, then every tenth prime up to ``limit``."""
    ps = [p for p in primes_between(5, limit)]
    low = [p for p in ps if p <= 500]
    high = [p for p in ps if p > 500][9::10]
    return low + high


@pytest.fixture(scope="session")
def sample():
    return sampled_primes()


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    # never touch ./.klooster-cache from the test suite
    monkeypatch.setenv("KLOOSTER_CACHE", str(tmp_path / "cache"))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n].line())
