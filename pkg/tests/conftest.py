import os

import numpy as np
import pytest

from phaseatlas.configspace import ParameterGrid


@pytest.fixture
def rng():
    return np.random.default_rng(int(os.environ.get("PHASEATLAS_SEED", "0")))


@pytest.fixture(scope="session")
def grid24():
    return ParameterGrid.square(24)


def random_hermitian(rng, n, scale=1.0):
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (x + x.conj().T) / 2


def random_unit(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


# -- acceptance reporting: one PASS/FAIL line per numbered criterion -----------

_acceptance = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or call.when != "call" and not (call.when == "setup" and call.excinfo):
        return
    number, title = marker.args
    entry = _acceptance.setdefault(number, {"title": title, "ok": True, "failed": []})
    if call.excinfo is not None:
        entry["ok"] = False
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        e = _acceptance[number]
        status = "PASS" if e["ok"] else "FAIL"
        extra = "" if e["ok"] else f"  (failing: {', '.join(e['failed'])})"
        terminalreporter.write_line(f"criterion {number:2d} {status}  {e['title']}{extra}")
