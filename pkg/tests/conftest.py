import functools

import pytest

from logmatrix.wach import build_package, min_truncation

# (p, k, a, v) with v_p(a) above the slope floor and roots in a quadratic field
GRID = [(3, 2, 3, 1), (3, 3, 3, 1), (3, 4, 9, 1), (5, 2, 5, 1), (5, 3, 5, 1), (7, 2, 7, 1)]

VERDICTS = {}


@functools.lru_cache(maxsize=None)
def package(p, k, a, v=1, prec=40, N=None, depth=64, share_with=None):
    """Session-wide cache; ``share_with`` names another cached package whose context is reused."""
    N = min_truncation(p, prec) if N is None else N
    ctx = package(*share_with).ctx if share_with else None
    return build_package(p, k, a, v, prec=prec, N=N, depth=depth, ctx=ctx)


def record(criterion, ok, detail=""):
    prev = VERDICTS.get(criterion)
    VERDICTS[criterion] = (bool(ok) and (prev is None or prev[0]), detail if prev is None or not ok else prev[1])


@pytest.fixture(scope="session")
def pkg32():
    return package(3, 2, 3, 1)


@pytest.fixture(scope="session")
def pkg33():
    return package(3, 3, 3, 1)


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for c in sorted(VERDICTS):
        ok, detail = VERDICTS[c]
        terminalreporter.write_line("criterion %2d: %s  %s" % (c, "PASS" if ok else "FAIL", detail))
