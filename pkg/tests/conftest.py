import numpy as np
import pytest

from qgdshock.gas import ARGON, HELIUM, NITROGEN

PRESETS = [ARGON, HELIUM, NITROGEN]


@pytest.fixture(params=PRESETS, ids=lambda g: g.name)
def gas(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20061)


_RESULTS: dict = {}


def record(criterion, passed: bool, detail: str) -> None:
    """Store one acceptance verdict for the end-of-run summary."""
    _RESULTS[str(criterion)] = (passed, detail)
    print(f"criterion {criterion}: {'PASS' if passed else 'FAIL'} - {detail}")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_RESULTS, key=lambda k: (len(k.split()[0]), k)):
        passed, detail = _RESULTS[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if passed else 'FAIL'} - {detail}")
