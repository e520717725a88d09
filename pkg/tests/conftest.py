import pytest

from castelbound.targets import BUILTIN_TARGETS, load_target


@pytest.fixture(params=BUILTIN_TARGETS)
def target(request):
    return load_target(request.param)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
