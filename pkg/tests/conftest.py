import os
import sys
import warnings

import pytest

sys.path.insert(0, os.path.dirname(__file__))
warnings.filterwarnings("ignore", module="numba")

DODECANE = "CCCCCCCCCCCC"
CUBANE = "C12C3C4C1C5C2C3C45"
CORONENE = "c1cc2ccc3ccc4ccc5ccc6ccc1c1c2c3c4c5c61"


@pytest.fixture(scope="session")
def exemplars():
    from assemblage.molgraph import parse_smiles

    return {
        "dodecane": parse_smiles(DODECANE),
        "cubane": parse_smiles(CUBANE),
        "coronene": parse_smiles(CORONENE),
    }


# one summary line per acceptance criterion, pass or fail
_CRITERIA: dict[int, tuple[str, str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or not (rep.when == "call" or rep.failed):
        return
    number, title = marker.args
    detail = dict(item.user_properties).get("detail", "")
    if rep.failed and not detail:
        detail = str(call.excinfo.value).splitlines()[0] if call.excinfo else "setup failed"
    _CRITERIA[number] = ("PASS" if rep.passed else "FAIL", title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, title, detail = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d} {status}  {title}: {detail}")
