import pytest

from tmoments import builtins

ACCEPTANCE_RESULTS = {}


@pytest.fixture
def naf():
    return builtins.naf()


@pytest.fixture
def record_criterion(request):
    """Record pass/fail of an acceptance criterion for the terminal summary."""
    label = request.node.get_closest_marker("criterion").args[0]
    yield
    rep = getattr(request.node, "rep_call", None)
    ACCEPTANCE_RESULTS[request.node.name] = (label, rep is not None and rep.passed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, (label, ok) in sorted(ACCEPTANCE_RESULTS.items(), key=lambda kv: kv[1][0]):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  ({name})")
