import json
from pathlib import Path

import numpy as np
import pytest

from yangbaxter import fixtures as fx
from yangbaxter import io as fio

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

_ACCEPTANCE = {}


def fixture_path(name):
    return FIXTURES / name


def load_fixture(name):
    return json.loads(fixture_path(name).read_text())


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        prev = _ACCEPTANCE.get(number, (title, True))[1]
        _ACCEPTANCE[number] = (title, prev and rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok = _ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title}")
    passed = sum(ok for _, ok in _ACCEPTANCE.values())
    terminalreporter.write_line(f"{passed}/{len(_ACCEPTANCE)} acceptance criteria pass")


@pytest.fixture
def T():
    return fx.tl_T()


@pytest.fixture
def bgr():
    return fx.bgr_qpt()


@pytest.fixture
def rational():
    return fx.tl_rational_operator(2)


@pytest.fixture
def yang():
    return fx.yang_operator()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def fixture_operator():
    def load(name, **overrides):
        return fio.spectral_from_doc(load_fixture(name), overrides)
    return load
