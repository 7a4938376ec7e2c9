"""Collects the one-line acceptance verdicts and prints them after the run."""
import pytest

_VERDICTS = {}


class Verdict:
    def __init__(self, number, title):
        self.number, self.title = number, title
        self.checks = []

    def check(self, ok, detail):
        self.checks.append((bool(ok), detail))

    @property
    def passed(self):
        return bool(self.checks) and all(ok for ok, _ in self.checks)

    def line(self):
        failed = [d for ok, d in self.checks if not ok]
        shown = failed if failed else [d for _, d in self.checks]
        status = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number} [{status}] {self.title}: " + "; ".join(shown)

    def finish(self):
        _VERDICTS[self.number] = self
        print(self.line())
        failed = [d for ok, d in self.checks if not ok]
        assert not failed, "; ".join(failed)


@pytest.fixture
def verdict(request):
    marker = request.node.get_closest_marker("criterion")
    return Verdict(*marker.args)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_VERDICTS):
        terminalreporter.write_line(_VERDICTS[n].line())
