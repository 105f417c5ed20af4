import time
from collections import OrderedDict

import pytest

from galois40.canon_io import appendix_polynomial

# wall-clock seconds of the expensive session fixtures, keyed by fixture name
TIMINGS = {}

# acceptance results: criterion number -> list of (part, passed, detail)
CRITERIA = OrderedDict()


@pytest.fixture(scope="session")
def appendix_F():
    return appendix_polynomial()


@pytest.fixture(scope="session")
def theta_gb():
    """Reduced lex basis of <f, g, h, j>; about half a minute."""
    from galois40.groebner import THETA_ORDER, buchberger, theta_ideal

    t0 = time.perf_counter()
    gb = buchberger(theta_ideal(), THETA_ORDER)
    TIMINGS["theta_gb"] = time.perf_counter() - t0
    return gb


@pytest.fixture(scope="session")
def certificate(theta_gb):
    """Primitive-element certificate on the shared basis; about a minute and a half."""
    from galois40.groebner import certify_primitive_element

    t0 = time.perf_counter()
    cert = certify_primitive_element(theta_gb)
    TIMINGS["certificate"] = time.perf_counter() - t0
    return cert


@pytest.fixture(scope="session")
def construction(theta_gb):
    from galois40.construct import construct_F

    t0 = time.perf_counter()
    rep = construct_F(theta_gb)
    TIMINGS["construction"] = time.perf_counter() - t0
    return rep


@pytest.fixture(scope="session")
def survey_111(appendix_F):
    from galois40.galois_id import frobenius_survey

    t0 = time.perf_counter()
    rep = frobenius_survey(appendix_F, (1, 1, 1), prime_count=300, prime_floor=1009)
    TIMINGS["survey_111"] = time.perf_counter() - t0
    return rep


@pytest.fixture
def criterion():
    """Record one part of an acceptance criterion for the end-of-run report."""

    def record(number: int, part: str, passed: bool, detail: str = ""):
        CRITERIA.setdefault(number, []).append((part, bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        parts = CRITERIA[number]
        ok = all(p for _, p, _ in parts)
        detail = "; ".join(f"{name}: {'pass' if p else 'FAIL'}{' (' + d + ')' if d else ''}"
                           for name, p, d in parts)
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} -- {detail}")
