import numpy as np
import pytest

from volterra_weights import make_weight

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion of the build")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    num = getattr(report, "acceptance", None)
    if num is None:
        return
    prev = _ACCEPTANCE.get(num[0], (num[1], True))
    _ACCEPTANCE[num[0]] = (num[1], prev[1] and report.outcome == "passed")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is not None:
        report.acceptance = mark.args


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        title, ok = _ACCEPTANCE[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {num}. {title}")


FAMILY_SPECS = [
    ("exp_power", {"alpha": 1.0, "p": 2.0}),
    ("exp_power", {"alpha": 0.5, "p": 1.0}),
    ("exp_power", {"alpha": 2.0, "p": 3.0}),
    ("exp_power_log", {"alpha": 1.0, "p": 2.0, "beta": 0.5, "q": 2.0}),
    ("log_power", {"p": 2.0}),
    ("hardy", {"a": 1.0, "b": 1.0, "c": 1.0, "d": 1.5}),
    ("hardy", {"c": 0.0, "k": 1.0, "m": 2.5}),
]


@pytest.fixture(params=FAMILY_SPECS, ids=lambda s: f"{s[0]}-{'-'.join(f'{k}{v:g}' for k, v in s[1].items())}")
def family_weight(request):
    family, params = request.param
    return make_weight(family, params)


@pytest.fixture
def gauss():
    return make_weight("exp_power", alpha=1.0, p=2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
