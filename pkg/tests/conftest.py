import pytest


def pytest_addoption(parser):
    parser.addoption("--long", action="store_true", default=False, help="run long exact computations (N = 6)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--long"):
        return
    skip = pytest.mark.skip(reason="needs --long")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


ACCEPTANCE_LINES = []


@pytest.fixture
def record():
    """Log one verdict line per acceptance criterion; printed in the terminal summary."""

    def _record(criterion, passed, detail):
        ACCEPTANCE_LINES.append(f"criterion {criterion}: {'PASS' if passed else 'FAIL'}  {detail}")
        print(ACCEPTANCE_LINES[-1])

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
