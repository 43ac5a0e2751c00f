import sys
from pathlib import Path

import pytest
from gmpy2 import mpq

sys.path.insert(0, str(Path(__file__).parent))

from cpcalc.coeff import make_field  # noqa: E402
from cpcalc.rmatrix import build_family  # noqa: E402


@pytest.fixture(scope="session")
def q0():
    return mpq(3, 2)


@pytest.fixture(scope="session")
def families():
    """(N, mode) -> RFamily, shared across the session."""
    cache = {}

    def get(N, mode="sampled", q=mpq(3, 2)):
        key = (N, mode, q)
        if key not in cache:
            cache[key] = build_family(N, make_field(mode, q))
        return cache[key]

    return get


@pytest.fixture(scope="session")
def contexts():
    from cpcalc.calculus.solve import make_context

    cache = {}

    def get(N, mode="sampled", q=mpq(3, 2)):
        key = (N, mode, q)
        if key not in cache:
            cache[key] = make_context(N, mode, q if mode == "sampled" else None)
        return cache[key]

    return get


# acceptance summary ---------------------------------------------------------

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion a test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    entry = _CRITERIA.setdefault(number, {"title": title, "items": []})
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        if hasattr(rep, "wasxfail"):
            status = "FAIL"
        elif rep.skipped:
            status = "DEFERRED" if "deferred" in str(rep.longrepr).lower() else "SKIP"
        else:
            status = "PASS" if rep.passed else "FAIL"
        entry["items"].append((item.name, status))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        statuses = [s for _, s in entry["items"]]
        if "FAIL" in statuses:
            verdict = "FAIL"
        elif statuses and all(s == "DEFERRED" for s in statuses):
            verdict = "DEFERRED"
        elif "SKIP" in statuses:
            verdict = "INCOMPLETE"
        elif "DEFERRED" in statuses:
            verdict = "DEFERRED"
        else:
            verdict = "PASS"
        bad = [n for n, s in entry["items"] if s != "PASS"]
        extra = f"  (not passing: {', '.join(bad)})" if bad else ""
        tr.write_line(f"{verdict}  criterion {number}: {entry['title']}{extra}")
