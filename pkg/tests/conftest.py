import pytest

_RESULTS = {}


@pytest.fixture
def record():
    def _record(n, ok, detail=""):
        _RESULTS[n] = (bool(ok), detail)
        print(f"ACCEPTANCE criterion {n}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        ok, detail = _RESULTS[n]
        terminalreporter.write_line(f"ACCEPTANCE criterion {n}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
