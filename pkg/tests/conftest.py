import pytest

_LINES = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_LINES] = {}


@pytest.fixture
def acceptance_log(request):
    """Callable recording the one-line verdict of an acceptance criterion."""
    lines = request.config.stash[_LINES]

    def log(n: int, ok: bool, detail: str, seconds: float) -> None:
        lines[n] = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}  [{seconds:.1f} s]"
        print(lines[n])

    return log


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
