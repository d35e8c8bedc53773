from pathlib import Path

import numpy as np
import pytest

from catpca.data import FEATURES, load_mini_kdd

GOLDEN = Path(__file__).with_name("golden")
REPO = Path(__file__).resolve().parents[1]


def kdd_line(protocol="tcp", service="http", flag="SF", label="normal", difficulty=21, fill=0):
    """One 43-field NSL-KDD record with all numeric features set to ``fill``."""
    fields = [str(fill)] * len(FEATURES)
    fields[1], fields[2], fields[3] = protocol, service, flag
    return ",".join(fields + [label, str(difficulty)])


@pytest.fixture(scope="session")
def mini():
    return load_mini_kdd()


@pytest.fixture(scope="session")
def mini_train(mini):
    return mini[0]


@pytest.fixture(scope="session")
def mini_test(mini):
    return mini[1]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# --- acceptance criteria reporting -------------------------------------------

_criteria = {}


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    report = yield
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return report
    number, title = mark.args
    detail = dict(item.user_properties).get("measured", "")
    if report.skipped:
        reason = report.longrepr[2] if isinstance(report.longrepr, tuple) else str(report.longrepr)
        _criteria[number] = ("SKIP", title, reason.removeprefix("Skipped: "))
    elif report.when == "call" or report.failed:
        _criteria[number] = ("PASS" if report.passed else "FAIL", title, detail)
    return report


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        status, title, detail = _criteria[number]
        line = f"{status} criterion {number:>2}: {title}"
        if detail:
            line += f" [{detail}]"
        terminalreporter.write_line(line)
